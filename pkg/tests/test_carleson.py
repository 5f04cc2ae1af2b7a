"""
Tests for the geometric and embedding Carleson tests.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from focklab.carleson import (
    analyze_measure,
    carleson_sup,
    classify_profile,
    default_window,
    disk_mass,
    embedding_centers,
    embedding_estimate,
    embedding_profile,
    kernel_sequence_decay,
    lattice_centers,
    lattice_measure,
    log_kernel_norm,
    measure_zoo,
    shell_edges,
    vanishing_profile,
)
from focklab.models import CarlesonVerdict, DiscreteMeasure, DiskRegion, ShellProfile, SpaceParams
from focklab.quadrature import build_plane_rule
from focklab.utils import ConfigurationError, DomainError

F21 = SpaceParams(p=2.0, m=1)


@pytest.fixture
def atom():
    """Unit point mass at the origin."""
    return DiscreteMeasure.from_arrays([0j], [1.0], name="atom")


@pytest.fixture
def small_measure():
    """Three atoms of mixed mass."""
    return DiscreteMeasure.from_arrays([0.5j, 1.0 + 1.0j, -2.0], [1.0, 0.25, 3.0], name="small")


def _profile(values):
    return [
        ShellProfile(inner=float(i), outer=float(i + 1), max_value=v, centers=0 if v is None else 1)
        for i, v in enumerate(values)
    ]


class TestLattice:
    """Test cases for centers, windows and shells."""

    def test_lattice_centers_order(self):
        """Test the unit window at spacing 1 gives the five lattice points in (real, imag) order."""
        centers = lattice_centers(1.0, 1.0)
        assert centers.tolist() == [-1 + 0j, -1j, 0j, 1j, 1 + 0j]

    def test_lattice_centers_invalid(self):
        """Test non-positive spacing raises DomainError."""
        with pytest.raises(DomainError):
            lattice_centers(1.0, 0.0)

    def test_default_window(self, small_measure):
        """Test four support radii plus 8r."""
        assert default_window(small_measure, 1.0) == pytest.approx(16.0)

    def test_shell_edges(self, small_measure):
        """Test shells cover [0, support - r]."""
        edges = shell_edges(small_measure, 1.0, count=4)
        assert edges.tolist() == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_lattice_measure(self):
        """Test the unit lattice of radius 10 has 317 atoms."""
        lattice = lattice_measure()
        assert len(lattice) == 317
        assert lattice.total_mass == 317.0


class TestDiskMass:
    """Test cases for mu(B(a, r))."""

    def test_open_disk_excludes_boundary(self):
        """Test an atom on the boundary circle is not counted."""
        mu = DiscreteMeasure.from_arrays([1.0, 0.5], [2.0, 3.0])
        assert disk_mass(mu, DiskRegion(center=0j, radius=1.0)) == 3.0

    def test_empty_measure(self):
        """Test the empty measure has zero mass everywhere."""
        assert disk_mass(DiscreteMeasure(), DiskRegion(radius=5.0)) == 0.0


class TestClassifyProfile:
    """Test cases for the shell verdict rule."""

    def test_decaying_profile_is_vanishing(self):
        """Test a decreasing profile that drops below half its peak."""
        assert classify_profile(_profile([1.0, 0.8, 0.4, 0.1])) is CarlesonVerdict.VANISHING

    def test_flat_profile_is_carleson(self):
        """Test a constant profile is bounded but not vanishing."""
        assert classify_profile(_profile([4.0, 4.0, 4.0, 4.0])) is CarlesonVerdict.CARLESON

    def test_growing_profile_is_not_carleson(self):
        """Test outer growth beyond the factor."""
        assert classify_profile(_profile([1.0, 1.0, 1.2, 2.0])) is CarlesonVerdict.NOT_CARLESON

    def test_growth_within_factor(self):
        """Test a rise within the growth factor is still bounded."""
        assert classify_profile(_profile([1.0, 1.0, 1.04, 1.0])) is CarlesonVerdict.CARLESON

    def test_empty_shells_are_ignored(self):
        """Test shells without centers do not enter the split."""
        profile = _profile([1.0, None, None, 0.9, None, 0.1])
        assert classify_profile(profile) is CarlesonVerdict.VANISHING

    def test_short_profile(self):
        """Test fewer than two data shells default to bounded."""
        assert classify_profile(_profile([None, 3.0])) is CarlesonVerdict.CARLESON


class TestCarlesonSup:
    """Test cases for the geometric sweep."""

    def test_point_mass(self, atom):
        """Test delta_0 in F^{2,1} with r = 1."""
        report = carleson_sup(atom, F21, r=1.0)
        assert report.sup_ratio == pytest.approx(1.0)
        assert report.argmax_center == (0.0, 0.0)
        assert report.verdict is CarlesonVerdict.VANISHING
        assert report.lattice_spacing == 0.5
        assert report.window == 8.0
        assert report.embedding_estimate is None
        assert report.comparability is None

    def test_lattice_order_one_is_vanishing(self):
        """Test the unit lattice decays against (1 + |a|)^2."""
        report = carleson_sup(lattice_measure(), F21)
        assert report.verdict is CarlesonVerdict.VANISHING

    def test_lattice_order_zero_is_bounded(self):
        """Test the unit lattice is Carleson but not vanishing for m = 0."""
        report = carleson_sup(lattice_measure(), SpaceParams(p=2.0, m=0))
        assert report.verdict is CarlesonVerdict.CARLESON
        assert report.sup_ratio == pytest.approx(4.0)

    def test_exponential_masses(self):
        """Test masses e^{n^2} are not Carleson within the window."""
        n = np.arange(1, 9)
        mu = DiscreteMeasure.from_arrays(n.astype(complex), np.exp(n.astype(float) ** 2))
        report = carleson_sup(mu, F21)
        assert report.verdict is CarlesonVerdict.NOT_CARLESON
        assert not report.verdict.is_bounded

    def test_doubling_masses_doubles_ratio(self, small_measure):
        """Test the ratio is linear in the measure."""
        base = carleson_sup(small_measure, F21)
        doubled = carleson_sup(small_measure.scaled(2.0), F21)
        assert doubled.sup_ratio == 2.0 * base.sup_ratio
        assert doubled.argmax_center == base.argmax_center

    def test_parallel_matches_inline(self, small_measure):
        """Test worker threads return the same report."""
        inline = carleson_sup(small_measure, F21)
        threaded = carleson_sup(small_measure, F21, n_jobs=2)
        assert threaded.model_dump() == inline.model_dump()

    def test_spacing_larger_than_radius(self, atom):
        """Test spacing > r raises ConfigurationError."""
        with pytest.raises(ConfigurationError):
            carleson_sup(atom, F21, r=1.0, spacing=1.5)

    def test_sup_space_rejected(self, atom):
        """Test p = inf raises DomainError."""
        with pytest.raises(DomainError):
            carleson_sup(atom, SpaceParams(p=math.inf, m=1))

    @given(
        st.floats(min_value=0.5, max_value=1.5),
        st.floats(min_value=0.0, max_value=1.5),
    )
    @settings(max_examples=20, deadline=None)
    def test_sup_ratio_grows_with_radius(self, r, extra):
        """Test a larger disk never lowers the supremum on a fixed lattice."""
        mu = lattice_measure(3.0)
        small = carleson_sup(mu, F21, r=r, window=5.0, spacing=0.25)
        large = carleson_sup(mu, F21, r=r + extra, window=5.0, spacing=0.25)
        assert large.sup_ratio >= small.sup_ratio

    @given(st.complex_numbers(max_magnitude=2.0, allow_nan=False, allow_infinity=False))
    @settings(max_examples=10, deadline=None)
    def test_verdict_stable_under_translation(self, shift):
        """Test translating the lattice by |tau| <= 2 keeps it vanishing."""
        report = carleson_sup(lattice_measure().translated(shift), F21)
        assert report.verdict is CarlesonVerdict.VANISHING


class TestVanishingProfile:
    """Test cases for per-shell maxima on given radii."""

    def test_shell_count(self, atom):
        """Test one profile entry per pair of consecutive radii."""
        profile = vanishing_profile(atom, F21, 1.0, [0.0, 1.0, 2.0, 4.0])
        assert len(profile.shells) == 3
        assert profile.shells[0].max_value == pytest.approx(1.0)
        assert profile.shells[2].max_value == 0.0
        assert profile.growth_factor == 1.05

    def test_radii_must_increase(self, atom):
        """Test unordered radii raise DomainError."""
        with pytest.raises(DomainError):
            vanishing_profile(atom, F21, 1.0, [0.0, 2.0, 1.0])

    def test_decaying_masses_vanish(self):
        """Test masses 1/(1+|n|) on the real axis vanish in F^{1,1}."""
        n = np.arange(-20, 21)
        mu = DiscreteMeasure.from_arrays(n.astype(complex), 1.0 / (1.0 + np.abs(n)))
        profile = vanishing_profile(mu, SpaceParams(p=1.0, m=1), 1.0, shell_edges(mu, 1.0, 8))
        assert profile.verdict is CarlesonVerdict.VANISHING
        assert profile.is_vanishing

    @pytest.mark.parametrize("m,vanishing", [(0, False), (1, True), (2, True), (3, True)])
    def test_lattice_vanishes_exactly_for_positive_order(self, m, vanishing):
        """Test the unit lattice is bounded for m = 0 and vanishing for m >= 1."""
        mu = lattice_measure()
        profile = vanishing_profile(mu, SpaceParams(p=2.0, m=m), 1.0, shell_edges(mu, 1.0, 8))
        assert profile.is_vanishing is vanishing
        if not vanishing:
            assert profile.verdict is CarlesonVerdict.CARLESON
            assert profile.shells[-1].max_value == pytest.approx(4.0)

    @pytest.mark.parametrize("m", [0, 1, 2])
    def test_exponential_masses_never_vanish(self, m):
        """Test masses e^{n^2} fail for every order."""
        n = np.arange(1, 9)
        mu = DiscreteMeasure.from_arrays(n.astype(complex), np.exp(n.astype(float) ** 2))
        profile = vanishing_profile(mu, SpaceParams(p=2.0, m=m), 1.0, shell_edges(mu, 1.0, 8))
        assert profile.verdict is CarlesonVerdict.NOT_CARLESON
        assert not profile.is_vanishing


class TestEmbedding:
    """Test cases for the kernel embedding test."""

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0, 3.0])
    def test_log_kernel_norm_order_zero(self, a):
        """Test log ||K_0(., a)||_{2,0}^2 = a^2."""
        rule = build_plane_rule(1.0)
        assert log_kernel_norm(a, SpaceParams(p=2.0, m=0), rule) == pytest.approx(a * a, abs=1e-12)

    @pytest.mark.parametrize("a", [0.5, 2.0, 4.0])
    def test_log_kernel_norm_order_one(self, a):
        """Test log ||K_1(., a)||_{2,1}^2 = log((e^{a^2} - 1)/a^2)."""
        rule = build_plane_rule(1.0)
        expected = math.log(math.expm1(a * a) / (a * a))
        assert log_kernel_norm(a, F21, rule) == pytest.approx(expected, rel=1e-10)

    def test_large_center_stays_finite(self):
        """Test the recentred log-space integral at |a| = 30."""
        value = log_kernel_norm(30.0, F21, build_plane_rule(1.0))
        assert value == pytest.approx(900.0 - math.log(900.0), rel=1e-10)

    def test_point_mass_at_origin(self, atom):
        """Test the normalized kernel at a = 0 integrates delta_0 to 1."""
        assert embedding_estimate(atom, F21) == pytest.approx(1.0, rel=1e-10)

    def test_empty_measure(self):
        """Test the empty measure gives 0."""
        assert embedding_estimate(DiscreteMeasure(), F21) == 0.0
        values, skipped = embedding_profile(DiscreteMeasure(), F21, [0j, 1.0])
        assert values.tolist() == [0.0, 0.0]
        assert skipped == 0

    def test_doubling_masses_doubles_estimate(self, small_measure):
        """Test the embedding integral is linear in the measure."""
        base = embedding_estimate(small_measure, F21, radial_degree=20, angular_count=32)
        doubled = embedding_estimate(small_measure.scaled(2.0), F21, radial_degree=20, angular_count=32)
        assert doubled == 2.0 * base

    def test_rule_with_radial_power_rejected(self, atom):
        """Test kernel norms need a rule without absorbed power."""
        with pytest.raises(ConfigurationError):
            embedding_profile(atom, F21, [0j], rule=build_plane_rule(1.0, alpha=1.0))

    def test_rule_rate_mismatch(self, atom):
        """Test kernel norms need a rule of rate p/2."""
        with pytest.raises(ConfigurationError):
            embedding_profile(atom, F21, [0j], rule=build_plane_rule(2.0))

    def test_kernel_sequence_decay(self, atom):
        """Test the normalized kernels along the axis decay on delta_0."""
        decay = kernel_sequence_decay(atom, F21, [0.0, 2.0, 4.0], radial_degree=20, angular_count=32)
        assert [radius for radius, _ in decay] == [0.0, 2.0, 4.0]
        values = [value for _, value in decay]
        assert values[0] > values[1] > values[2]

    def test_embedding_centers(self, small_measure):
        """Test atoms and extra centers are merged, deduplicated and ordered."""
        centers = embedding_centers(small_measure, [0.5j, 3.0])
        assert centers.tolist() == [-2 + 0j, 0.5j, 1 + 1j, 3 + 0j]


class TestAnalyzeMeasure:
    """Test cases for the combined analysis."""

    def test_point_mass(self, atom):
        """Test both tests agree that delta_0 is bounded."""
        report = analyze_measure(atom, F21, radial_degree=20, angular_count=32)
        assert report.verdict is CarlesonVerdict.VANISHING
        assert report.embedding_estimate == pytest.approx(1.0, rel=1e-8)
        assert report.comparability == pytest.approx(1.0, rel=1e-8)
        assert report.test_centers == 1
        assert report.skipped_centers == 0
        assert report.verdicts_agree is True
        assert len(report.kernel_decay) == len(report.shells)

    def test_vanishing_profile_is_attached(self, atom):
        """Test the combined analysis carries the vanishing profile."""
        report = analyze_measure(atom, F21, radial_degree=20, angular_count=32)
        assert report.vanishing is not None
        assert report.vanishing.verdict is CarlesonVerdict.VANISHING
        assert len(report.vanishing.shells) == len(report.shells)

    def test_measure_zoo(self):
        """Test the standard measures and their spaces."""
        zoo = measure_zoo()
        names = [mu.name for mu, _ in zoo]
        assert names == [
            "atom", "lattice", "lattice-m0", "decaying", "exponential", "translated", "scaled"
        ]
        assert dict((mu.name, params.m) for mu, params in zoo)["lattice-m0"] == 0
