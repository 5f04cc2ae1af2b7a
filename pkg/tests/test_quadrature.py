"""
Tests for plane and disk quadrature.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focklab.models import DiskRegion, SpaceParams
from focklab.quadrature import (
    PlaneQuadrature,
    build_panel_rule,
    build_plane_rule,
    disk_grid,
    grid_convergence,
    integrate_disk,
    integrate_log_polar,
    integrate_plane,
    integrate_values,
    norm_rule,
)
from focklab.utils import DomainError, QuadratureError


@pytest.fixture
def gaussian_rule():
    """Rule for e^{-|z|^2} dA."""
    return build_plane_rule(1.0, radial_degree=40, angular_count=32)


class TestBuildPlaneRule:
    """Test cases for rule construction."""

    def test_grid_shape(self):
        """Test the node array is (radial, angular)."""
        rule = build_plane_rule(1.0, radial_degree=10, angular_count=8)
        assert isinstance(rule, PlaneQuadrature)
        assert rule.grid.shape == (10, 8)
        assert rule.moduli_squared.shape == (10, 8)

    def test_nodes_and_weights(self, gaussian_rule):
        """Test flattened weights sum to the mass of e^{-|z|^2}."""
        nodes, weights = gaussian_rule.nodes()
        assert nodes.shape == weights.shape
        assert weights.sum() == pytest.approx(math.pi, rel=1e-12)

    def test_equality_and_refinement(self):
        """Test rules compare by their parameters and refine by doubling."""
        rule = build_plane_rule(1.0, radial_degree=10, angular_count=8)
        assert rule == build_plane_rule(1.0, radial_degree=10, angular_count=8)
        assert hash(rule) == hash(build_plane_rule(1.0, radial_degree=10, angular_count=8))
        fine = rule.refined()
        assert (fine.radial_degree, fine.angular_count) == (20, 16)
        assert rule.rebuild(c=2.0).c == 2.0

    def test_describe(self):
        """Test the resolution summary used in reports."""
        rule = build_plane_rule(0.5, radial_degree=12, angular_count=16, alpha=1.0)
        assert rule.describe() == {"c": 0.5, "alpha": 1.0, "radial_degree": 12, "angular_count": 16}

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"c": 0.0},
            {"c": -1.0},
            {"c": 1.0, "alpha": -1.0},
            {"c": 1.0, "radial_degree": 0},
        ],
    )
    def test_invalid_parameters(self, kwargs):
        """Test invalid rates, powers and resolutions raise DomainError."""
        with pytest.raises(DomainError):
            build_plane_rule(**kwargs)

    def test_norm_rule(self):
        """Test the rule for F^{2,1} has rate 1 and radial power 1."""
        rule = norm_rule(SpaceParams(p=2.0, m=1), radial_degree=8, angular_count=8)
        assert rule.c == 1.0
        assert rule.alpha == 1.0

    def test_norm_rule_rejects_sup(self):
        """Test p = inf has no quadrature rule."""
        with pytest.raises(DomainError):
            norm_rule(SpaceParams(p=math.inf, m=0))


class TestIntegratePlane:
    """Test cases for Gaussian-weighted plane integrals."""

    def test_gaussian_mass(self, gaussian_rule):
        """Test the integral of e^{-|z|^2} is pi."""
        assert integrate_plane(gaussian_rule, lambda z: np.ones_like(z)) == pytest.approx(
            math.pi, rel=1e-12
        )

    def test_scalar_integrand_broadcasts(self, gaussian_rule):
        """Test a constant return value is broadcast to the grid."""
        assert integrate_plane(gaussian_rule, lambda z: 2.0) == pytest.approx(2 * math.pi, rel=1e-12)

    @pytest.mark.parametrize("j,k", [(0, 0), (1, 1), (3, 3), (5, 5)])
    def test_diagonal_moments(self, gaussian_rule, j, k):
        """Test the integral of z^j conj(z)^j e^{-|z|^2} is pi j!."""
        value = integrate_plane(gaussian_rule, lambda z: z ** j * np.conj(z) ** k)
        assert value == pytest.approx(math.pi * math.factorial(j), rel=1e-11)

    @pytest.mark.parametrize("j,k", [(1, 0), (2, 1), (4, 0), (6, 3)])
    def test_off_diagonal_moments_vanish(self, gaussian_rule, j, k):
        """Test monomials of different degree are orthogonal."""
        value = integrate_plane(gaussian_rule, lambda z: z ** j * np.conj(z) ** k)
        assert abs(value) < 1e-10

    def test_radial_power_and_rate(self):
        """Test the integral of |z|^3 e^{-2|z|^2} against pi Gamma(5/2)/2^{5/2}."""
        rule = build_plane_rule(2.0, alpha=1.5)
        expected = math.pi * math.gamma(2.5) / 2.0 ** 2.5
        assert integrate_plane(rule, lambda z: 1.0).real == pytest.approx(expected, rel=1e-11)

    @given(
        st.floats(min_value=0.0, max_value=4.0),
        st.floats(min_value=0.25, max_value=4.0),
    )
    @settings(max_examples=40, deadline=None)
    def test_weighted_mass(self, alpha, c):
        """Test the mass of |z|^{2 alpha} e^{-c|z|^2} over a parameter range."""
        rule = build_plane_rule(c, radial_degree=30, angular_count=4, alpha=alpha)
        expected = math.pi * math.gamma(alpha + 1.0) / c ** (alpha + 1.0)
        assert integrate_plane(rule, lambda z: 1.0).real == pytest.approx(expected, rel=1e-10)

    def test_non_finite_integrand(self, gaussian_rule):
        """Test an infinite value raises QuadratureError naming the node."""
        with pytest.raises(QuadratureError) as exc_info:
            integrate_plane(gaussian_rule, lambda z: np.where(np.abs(z) > 1.0, np.inf, 1.0))
        assert exc_info.value.node_index is not None
        assert abs(exc_info.value.node) > 1.0

    def test_integrate_values(self, gaussian_rule):
        """Test pre-sampled values give the same result."""
        values = np.abs(gaussian_rule.grid) ** 2
        assert integrate_values(gaussian_rule, values) == pytest.approx(math.pi, rel=1e-12)

    def test_grid_convergence_for_polynomial(self, gaussian_rule):
        """Test a polynomial integrand is already converged."""
        change = grid_convergence(gaussian_rule, lambda z: np.abs(z) ** 4)
        assert change < 1e-12

    @given(
        st.integers(min_value=0, max_value=31),
        st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False),
    )
    @settings(max_examples=40, deadline=None)
    def test_rotation_by_grid_angle(self, k, shift):
        """Test g(z) and g(e^{2 pi i k/N} z) integrate alike for any g."""
        rule = build_plane_rule(1.0, radial_degree=20, angular_count=32)
        rotation = np.exp(2j * math.pi * k / 32)

        def g(z):
            return np.abs(z - shift) ** 1.5 * np.cos(z.real) + 1j * z.imag

        plain = integrate_plane(rule, g)
        rotated = integrate_plane(rule, lambda z: g(rotation * z))
        assert abs(plain - rotated) <= 1e-12 * (1.0 + abs(plain))


class TestIntegrateDisk:
    """Test cases for disk quadrature."""

    def test_disk_area(self):
        """Test the area of B(1+i, 2) is 4 pi."""
        region = DiskRegion(center=1 + 1j, radius=2.0)
        assert integrate_disk(region, lambda w: np.ones_like(w)) == pytest.approx(4 * math.pi, rel=1e-12)

    def test_second_moment(self):
        """Test the integral of |w - c|^2 over B(c, r) is pi r^4 / 2."""
        center, radius = -2.0 + 0.5j, 1.5
        region = DiskRegion(center=center, radius=radius)
        value = integrate_disk(region, lambda w: np.abs(w - center) ** 2)
        assert value.real == pytest.approx(math.pi * radius ** 4 / 2.0, rel=1e-12)

    def test_nodes_inside_disk(self):
        """Test every node lies strictly inside the disk."""
        region = DiskRegion(center=3.0, radius=0.5)
        nodes, _ = disk_grid(region, node_budget=64)
        assert np.all(np.abs(nodes - 3.0) < 0.5)

    def test_budget_too_small(self):
        """Test budgets below 16 raise DomainError."""
        with pytest.raises(DomainError):
            disk_grid(DiskRegion(radius=1.0), node_budget=8)


class TestPolarPanelRule:
    """Test cases for the cusp-graded polar panel rule."""

    @pytest.mark.parametrize("alpha,c", [(0.0, 1.0), (1.5, 2.0), (-0.7, 0.5)])
    def test_weighted_mass(self, alpha, c):
        """Test the mass of |w|^{2 alpha} e^{-c|w|^2} including singular alpha."""
        rule = build_panel_rule(c, alpha=alpha)
        log_mass = integrate_log_polar(rule, lambda w: np.zeros(w.shape), rule.radius_for(0.0))
        expected = math.pi * math.gamma(alpha + 1.0) / c ** (alpha + 1.0)
        assert math.exp(log_mass) == pytest.approx(expected, rel=1e-12)

    def test_cusp_integrand_converges(self):
        """Test |w - a| e^{-|w|^2} with its cusp on a cell corner."""
        cusp = 1.0 + 1.0j
        rule = build_panel_rule(1.0)

        def log_g(w):
            with np.errstate(divide="ignore"):
                return np.log(np.abs(w - cusp))

        radius = rule.radius_for(0.0)
        coarse = integrate_log_polar(rule, log_g, radius, [cusp])
        fine = integrate_log_polar(rule.refined(), log_g, radius, [cusp])
        assert abs(coarse - fine) <= 1e-9

    def test_large_log_values(self):
        """Test integrands far beyond the float range."""
        rule = build_panel_rule(1.0)
        log_mass = integrate_log_polar(rule, lambda w: np.full(w.shape, 2000.0), rule.radius_for(0.0))
        assert log_mass == pytest.approx(2000.0 + math.log(math.pi), rel=1e-14)

    def test_cells_cover_disk(self):
        """Test the sector areas add up to pi R^2."""
        cells = build_panel_rule(1.0).cells(5.0, [1.0 + 1.0j, -2.0 + 0.5j], sharpness=30.0)
        r_lo, r_hi, t_lo, t_hi = cells.T
        area = np.sum(0.5 * (r_hi ** 2 - r_lo ** 2) * (t_hi - t_lo))
        assert area == pytest.approx(25.0 * math.pi, rel=1e-12)

    def test_cusp_is_a_graded_corner(self):
        """Test a cusp sits on cell corners and cells shrink toward it."""
        cusp = 1.0 + 1.0j
        cells = build_panel_rule(1.0).cells(5.0, [cusp])
        on_corner = np.isclose(cells[:, 0], abs(cusp)) & np.isclose(
            np.exp(1j * cells[:, 2]), cusp / abs(cusp)
        )
        assert np.any(on_corner)
        assert np.min(cells[:, 1] - cells[:, 0]) <= 0.5 / 2 ** 8

    def test_sharpness_narrows_sectors(self):
        """Test arcs obey 2/sqrt(sharpness)."""
        cells = build_panel_rule(1.0, corner_levels=0).cells(3.0, sharpness=100.0)
        assert np.max(cells[:, 3] - cells[:, 2]) <= 0.2 + 1e-12

    def test_cusps_outside_disk_are_ignored(self):
        """Test cusps at or beyond the radius do not change the cells."""
        rule = build_panel_rule(1.0)
        np.testing.assert_array_equal(rule.cells(3.0, [4.0 + 0j, 0j]), rule.cells(3.0))

    def test_refined_doubles_nodes(self):
        """Test refinement keeps the cells and doubles nodes per side."""
        rule = build_panel_rule(1.0, alpha=0.5, panel_nodes=6)
        finer = rule.refined()
        assert finer.panel_nodes == 12
        assert finer.describe() == {"c": 1.0, "alpha": 0.5, "panel_nodes": 12, "corner_levels": 8}
        assert finer.radial_power == 2.0

    def test_non_finite_log_integrand(self):
        """Test NaN raises QuadratureError while -inf counts as a zero."""
        rule = build_panel_rule(1.0)
        with pytest.raises(QuadratureError):
            integrate_log_polar(rule, lambda w: np.full(w.shape, np.nan), 3.0)
        zero = integrate_log_polar(rule, lambda w: np.full(w.shape, -np.inf), 3.0)
        assert zero == -np.inf

    @pytest.mark.parametrize(
        "kwargs",
        [{"c": 0.0}, {"c": 1.0, "alpha": -1.0}, {"c": 1.0, "panel_nodes": 1}, {"c": 1.0, "corner_levels": -1}],
    )
    def test_invalid_parameters(self, kwargs):
        """Test invalid rules raise DomainError."""
        with pytest.raises(DomainError):
            build_panel_rule(**kwargs)

    def test_invalid_radius(self):
        """Test a non-positive radius raises DomainError."""
        with pytest.raises(DomainError):
            build_panel_rule(1.0).cells(0.0)
