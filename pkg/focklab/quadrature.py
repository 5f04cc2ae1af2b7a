"""
Deterministic quadrature over the plane and over disks.

A ``PlaneQuadrature`` integrates g(z) |z|^{2 alpha} e^{-c|z|^2} dA(z).
In polar form with t = |z|^2 the area element is dA = dt dtheta / 2, so the
rule is a generalized Gauss-Laguerre rule in t for the weight t^alpha e^{-ct}
times the trapezoid rule on uniform angles:

    integral ~ (pi / N) sum_k w_k sum_j g(sqrt(t_k) e^{i theta_j})

It is exact for z^j conj(z)^k whenever |j - k| < N and the radial degree
(j + k)/2 is at most 2 * radial_degree - 1.

Integrands with conical zeros, such as |K_m|^p for odd p, converge only
algebraically under that rule. A ``PolarPanelRule`` handles them with
sectors cornered and graded at the zeros, and works in log space.
"""

import math
from functools import cached_property, lru_cache
from typing import Any, Callable, List, Optional, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.special import logsumexp, roots_genlaguerre, roots_jacobi

from focklab.models import DiskRegion, SpaceParams
from focklab.utils import DomainError, QuadratureError

DEFAULT_RADIAL_DEGREE = 60
DEFAULT_ANGULAR_COUNT = 128
DEFAULT_DISK_BUDGET = 4096

PlaneFunction = Callable[[np.ndarray], Any]


@lru_cache(maxsize=64)
def _laguerre_rule(n: int, alpha: float) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_genlaguerre(n, alpha)
    keep = w > 0
    x, w = x[keep], w[keep]
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def _legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _angles(count: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(count) / count)


class PlaneQuadrature(BaseModel):
    """Immutable node/weight scheme for Gaussian-weighted plane integrals."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c: float = Field(..., gt=0, description="Gaussian rate")
    alpha: float = Field(default=0.0, gt=-1, description="Radial power absorbed into the weight")
    radial_degree: int = Field(..., ge=1, description="Gauss nodes in t = |z|^2")
    angular_count: int = Field(..., ge=1, description="Uniform angular nodes")
    t_nodes: np.ndarray = Field(..., description="Radial nodes in t")
    t_weights: np.ndarray = Field(..., description="Radial weights for t^alpha e^{-ct}")

    @field_validator('t_weights')
    @classmethod
    def validate_weights(cls, v: np.ndarray) -> np.ndarray:
        """Validate weights are strictly positive."""
        if v.size == 0 or not np.all(v > 0):
            raise ValueError("radial weights must be strictly positive")
        return v

    @cached_property
    def grid(self) -> np.ndarray:
        """Nodes as a (radial, angular) complex array."""
        return np.sqrt(self.t_nodes)[:, None] * _angles(self.angular_count)[None, :]

    @cached_property
    def moduli_squared(self) -> np.ndarray:
        """|z|^2 at every node, same shape as ``grid``."""
        return np.broadcast_to(self.t_nodes[:, None], self.grid.shape)

    @property
    def radial_nodes(self) -> List[Tuple[float, float]]:
        return [(float(t), float(w)) for t, w in zip(self.t_nodes, self.t_weights)]

    def nodes(self) -> Tuple[np.ndarray, np.ndarray]:
        """Flattened nodes and their full weights (pi/N) w_k."""
        weights = np.repeat(self.t_weights * (np.pi / self.angular_count), self.angular_count)
        return self.grid.ravel().copy(), weights

    def rebuild(
        self,
        c: Optional[float] = None,
        alpha: Optional[float] = None,
        radial_degree: Optional[int] = None,
        angular_count: Optional[int] = None
    ) -> "PlaneQuadrature":
        """Same resolution with a different rate or radial power, or vice versa."""
        return build_plane_rule(
            self.c if c is None else c,
            self.radial_degree if radial_degree is None else radial_degree,
            self.angular_count if angular_count is None else angular_count,
            alpha=self.alpha if alpha is None else alpha,
        )

    def refined(self) -> "PlaneQuadrature":
        """Rule with doubled radial degree and angular count."""
        return self.rebuild(
            radial_degree=2 * self.radial_degree,
            angular_count=2 * self.angular_count
        )

    def describe(self) -> dict:
        return {
            "c": self.c,
            "alpha": self.alpha,
            "radial_degree": self.radial_degree,
            "angular_count": self.angular_count,
        }

    def _key(self) -> tuple:
        return (self.c, self.alpha, self.radial_degree, self.angular_count)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneQuadrature):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())


def build_plane_rule(
    c: float,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    alpha: float = 0.0
) -> PlaneQuadrature:
    """
    Build the rule for g(z) |z|^{2 alpha} e^{-c|z|^2} dA(z).

    Raises:
        DomainError: If c <= 0, alpha <= -1, or a resolution is below 1
    """
    if not c > 0 or not np.isfinite(c):
        raise DomainError("Gaussian rate must be positive", parameter="c", value=c, rule="c > 0")
    if not alpha > -1:
        raise DomainError("Radial power must exceed -1", parameter="alpha", value=alpha, rule="alpha > -1")
    if radial_degree < 1 or angular_count < 1:
        raise DomainError(
            "Resolutions must be positive",
            parameter="radial_degree",
            value=(radial_degree, angular_count)
        )

    x, w = _laguerre_rule(int(radial_degree), float(alpha))
    t_nodes = x / c
    t_weights = w / c ** (alpha + 1.0)
    t_nodes.setflags(write=False)
    t_weights.setflags(write=False)
    return PlaneQuadrature(
        c=float(c),
        alpha=float(alpha),
        radial_degree=int(radial_degree),
        angular_count=int(angular_count),
        t_nodes=t_nodes,
        t_weights=t_weights,
    )


def norm_rule(
    params: SpaceParams,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT
) -> PlaneQuadrature:
    """Rule of rate p/2 with |z|^{mp} absorbed into the weight."""
    if params.is_sup:
        raise DomainError("The sup norm has no quadrature rule", parameter="p", value=params.p)
    return build_plane_rule(
        params.gaussian_rate, radial_degree, angular_count, alpha=params.m * params.p / 2.0
    )


def _check_finite(values: np.ndarray, nodes: np.ndarray) -> None:
    finite = np.isfinite(values)
    if not np.all(finite):
        index = int(np.argmin(finite.ravel()))
        node = complex(nodes.ravel()[index])
        raise QuadratureError(
            "Integrand is not finite at a quadrature node",
            node_index=index,
            node=node
        )


def _evaluate_on(g: PlaneFunction, nodes: np.ndarray) -> np.ndarray:
    values = np.asarray(g(nodes))
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape)
    return values


def integrate_values(rule: PlaneQuadrature, values: np.ndarray) -> complex:
    """Apply the rule to integrand values already sampled on ``rule.grid``."""
    _check_finite(values, rule.grid)
    angular = np.sum(values, axis=1)
    total = np.sum(rule.t_weights * angular)
    return complex(total * (np.pi / rule.angular_count))


def integrate_plane(rule: PlaneQuadrature, g: PlaneFunction) -> complex:
    """
    Integrate g(z) |z|^{2 alpha} e^{-c|z|^2} over the plane.

    ``g`` receives the (radial, angular) node array and returns values of the
    same shape (or a broadcastable scalar). Angular sums run first, then the
    radial sum, in a fixed order.

    Raises:
        QuadratureError: If g is not finite at some node
    """
    return integrate_values(rule, _evaluate_on(g, rule.grid))


def disk_grid(region: DiskRegion, node_budget: int = DEFAULT_DISK_BUDGET) -> Tuple[np.ndarray, np.ndarray]:
    """
    Tensor polar rule on a disk: Gauss-Legendre in s = |w - center|^2, uniform angles.

    Returns:
        (nodes, radial_weights): a (radial, angular) node array and the weight
        shared by every node of each radial row
    """
    if node_budget < 16:
        raise DomainError("Disk node budget must be at least 16", parameter="node_budget", value=node_budget)
    radial = max(2, int(np.sqrt(node_budget / 4)))
    angular = max(8, node_budget // radial)
    x, w = _legendre_rule(radial)
    r2 = region.radius ** 2
    s = r2 * (x + 1.0) / 2.0
    ws = r2 * w / 2.0
    nodes = region.center + np.sqrt(s)[:, None] * _angles(angular)[None, :]
    return nodes, ws * (np.pi / angular)


def integrate_disk(
    region: DiskRegion,
    g: PlaneFunction,
    node_budget: int = DEFAULT_DISK_BUDGET
) -> complex:
    """Integrate g over the open disk ``region`` with respect to area."""
    nodes, weights = disk_grid(region, node_budget)
    values = _evaluate_on(g, nodes)
    _check_finite(values, nodes)
    angular = np.sum(values, axis=1)
    return complex(np.sum(weights * angular))


def grid_convergence(rule: PlaneQuadrature, g: PlaneFunction) -> float:
    """Relative change of integrate_plane when the rule is refined."""
    coarse = integrate_plane(rule, g)
    fine = integrate_plane(rule.refined(), g)
    scale = abs(fine)
    if scale == 0:
        return abs(fine - coarse)
    return abs(fine - coarse) / scale


# Composite polar rule for integrands with isolated cusps.

DEFAULT_PANEL_NODES = 8
DEFAULT_CORNER_LEVELS = 8
# Log-decay below the peak at which the panel rule stops integrating.
PANEL_TAIL = 40.0

Cell = Tuple[float, float, float, float]


@lru_cache(maxsize=64)
def _jacobi_rule(n: int, beta: float) -> Tuple[np.ndarray, np.ndarray]:
    # weight (1 + x)^beta on [-1, 1]
    x, w = roots_jacobi(n, 0.0, beta)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _subdivide(edges: np.ndarray, step: float) -> np.ndarray:
    """Split every gap of the sorted ``edges`` into pieces no longer than ``step``."""
    pieces = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        count = max(1, math.ceil((hi - lo) / step))
        pieces.append(np.linspace(lo, hi, count + 1)[:-1])
    pieces.append(edges[-1:])
    return np.concatenate(pieces)


def _seam_angle(angles: np.ndarray) -> float:
    """Middle of the widest angular gap between the given angles."""
    if angles.size == 0:
        return 0.0
    ordered = np.sort(angles)
    gaps = np.diff(np.append(ordered, ordered[0] + 2.0 * np.pi))
    widest = int(np.argmax(gaps))
    return float(ordered[widest] + gaps[widest] / 2.0)


def _graded_cells(cell: Cell, corners: Set[Tuple[float, float]], levels: int) -> List[Cell]:
    """Quadtree split of ``cell`` toward whichever of its corners is listed."""
    r_lo, r_hi, t_lo, t_hi = cell
    if levels == 0 or not any((r, t) in corners for r in (r_lo, r_hi) for t in (t_lo, t_hi)):
        return [cell]
    r_mid = 0.5 * (r_lo + r_hi)
    t_mid = 0.5 * (t_lo + t_hi)
    cells: List[Cell] = []
    for r_pair in ((r_lo, r_mid), (r_mid, r_hi)):
        for t_pair in ((t_lo, t_mid), (t_mid, t_hi)):
            cells.extend(_graded_cells((*r_pair, *t_pair), corners, levels - 1))
    return cells


class PolarPanelRule(BaseModel):
    """
    Composite rule for g(w) |w|^{2 alpha} e^{-c|w|^2} dA(w) on a disk of
    given radius, for g with isolated cusps (conical zeros of |g|).

    The disk is cut into annular sectors whose corners include every cusp,
    and the four sectors around a cusp are split toward it ``corner_levels``
    times. Each sector carries a tensor Gauss rule with ``panel_nodes``
    points per direction: Gauss-Legendre, or Gauss-Jacobi in r on sectors
    touching the origin so that r^{2 alpha + 1} is integrated exactly.
    Weights are kept in log form so that integrands far beyond the float
    range still sum correctly.
    """

    model_config = ConfigDict(frozen=True)

    c: float = Field(..., gt=0, description="Gaussian rate")
    alpha: float = Field(default=0.0, gt=-1, description="Radial power absorbed into the weight")
    panel_nodes: int = Field(default=DEFAULT_PANEL_NODES, ge=2, description="Gauss nodes per cell side")
    corner_levels: int = Field(default=DEFAULT_CORNER_LEVELS, ge=0, description="Splits toward each cusp")

    @property
    def radial_power(self) -> float:
        """Exponent of r in the polar weight r^{2 alpha + 1} e^{-c r^2}."""
        return 2.0 * self.alpha + 1.0

    def refined(self) -> "PolarPanelRule":
        """Rule with doubled nodes per cell side on the same cells."""
        return self.model_copy(update={"panel_nodes": 2 * self.panel_nodes})

    def describe(self) -> dict:
        return {
            "c": self.c,
            "alpha": self.alpha,
            "panel_nodes": self.panel_nodes,
            "corner_levels": self.corner_levels,
        }

    def radius_for(self, growth: float) -> float:
        """
        Radius enclosing r^{2 alpha + 1} e^{growth r - c r^2} up to e^{-PANEL_TAIL}.

        ``growth`` is the linear rate of the log-integrand along its steepest ray.
        """
        beta = max(self.radial_power, 0.0)
        peak = (growth + math.sqrt(growth * growth + 8.0 * self.c * beta)) / (4.0 * self.c)
        return peak + math.sqrt(PANEL_TAIL / self.c)

    def cells(self, radius: float, cusps: Sequence[complex] = (), sharpness: float = 0.0) -> np.ndarray:
        """
        Sectors (r_lo, r_hi, theta_lo, theta_hi) covering the disk of ``radius``.

        Radial cells are at most 0.5/sqrt(c) wide. Angular cells are at most
        pi/4 and at most 2/sqrt(sharpness), where ``sharpness`` bounds the
        curvature of the log-integrand across rays.
        """
        if not radius > 0 or not math.isfinite(radius):
            raise DomainError("Panel radius must be positive and finite", parameter="radius", value=radius)
        points = np.asarray(cusps, dtype=complex).ravel()
        points = points[(np.abs(points) > 0) & (np.abs(points) < radius)]
        cusp_r = np.abs(points)
        seam = _seam_angle(np.angle(points))
        cusp_t = seam + np.mod(np.angle(points) - seam, 2.0 * np.pi)

        r_edges = _subdivide(np.unique(np.concatenate(([0.0, radius], cusp_r))), 0.5 / math.sqrt(self.c))
        arc = np.pi / 4.0
        if sharpness > 0:
            arc = min(arc, 2.0 / math.sqrt(sharpness))
        t_edges = _subdivide(np.unique(np.concatenate(([seam, seam + 2.0 * np.pi], cusp_t))), arc)

        corners = set(zip(cusp_r.tolist(), cusp_t.tolist()))
        cells: List[Cell] = []
        for r_lo, r_hi in zip(r_edges[:-1].tolist(), r_edges[1:].tolist()):
            for t_lo, t_hi in zip(t_edges[:-1].tolist(), t_edges[1:].tolist()):
                cells.extend(_graded_cells((r_lo, r_hi, t_lo, t_hi), corners, self.corner_levels))
        return np.array(cells, dtype=float)

    def log_nodes(
        self,
        radius: float,
        cusps: Sequence[complex] = (),
        sharpness: float = 0.0
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Flattened nodes and the logs of their weights, weight included.

        Raises:
            DomainError: If the radius is not positive and finite
        """
        cells = self.cells(radius, cusps, sharpness)
        beta = self.radial_power
        x, w = _legendre_rule(self.panel_nodes)

        r_lo, r_hi, t_lo, t_hi = cells.T
        half_r = (r_hi - r_lo) / 2.0
        r = (r_lo + half_r)[:, None] + half_r[:, None] * x[None, :]
        log_wr = np.log(half_r[:, None] * w[None, :]) + beta * np.log(r)

        at_origin = r_lo == 0
        if np.any(at_origin):
            xj, wj = _jacobi_rule(self.panel_nodes, beta)
            h = half_r[at_origin][:, None]
            r[at_origin] = h * (1.0 + xj[None, :])
            log_wr[at_origin] = np.log(wj)[None, :] + (beta + 1.0) * np.log(h)
        log_wr = log_wr - self.c * r * r

        half_t = (t_hi - t_lo) / 2.0
        theta = (t_lo + half_t)[:, None] + half_t[:, None] * x[None, :]
        log_wt = np.log(half_t[:, None] * w[None, :])

        nodes = r[:, :, None] * np.exp(1j * theta)[:, None, :]
        log_weights = log_wr[:, :, None] + log_wt[:, None, :]
        return nodes.ravel(), log_weights.ravel()


def build_panel_rule(
    c: float,
    alpha: float = 0.0,
    panel_nodes: int = DEFAULT_PANEL_NODES,
    corner_levels: int = DEFAULT_CORNER_LEVELS
) -> PolarPanelRule:
    """
    Build the panel rule for g(w) |w|^{2 alpha} e^{-c|w|^2} dA(w).

    Raises:
        DomainError: If c <= 0, alpha <= -1, or panel_nodes < 2
    """
    if not c > 0 or not np.isfinite(c):
        raise DomainError("Gaussian rate must be positive", parameter="c", value=c, rule="c > 0")
    if not alpha > -1:
        raise DomainError("Radial power must exceed -1", parameter="alpha", value=alpha, rule="alpha > -1")
    if panel_nodes < 2 or corner_levels < 0:
        raise DomainError(
            "Panel rules need at least two nodes per side",
            parameter="panel_nodes",
            value=(panel_nodes, corner_levels)
        )
    return PolarPanelRule(
        c=float(c), alpha=float(alpha), panel_nodes=int(panel_nodes), corner_levels=int(corner_levels)
    )


def integrate_log_polar(
    rule: PolarPanelRule,
    log_g: PlaneFunction,
    radius: float,
    cusps: Sequence[complex] = (),
    sharpness: float = 0.0
) -> float:
    """
    log of the integral of e^{log_g(w)} |w|^{2 alpha} e^{-c|w|^2} over |w| < radius.

    ``log_g`` receives a flat node array; -inf marks a zero of the integrand.

    Raises:
        QuadratureError: If log_g is NaN or +inf at some node
    """
    nodes, log_weights = rule.log_nodes(radius, cusps, sharpness)
    values = np.asarray(log_g(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape)
    bad = np.isnan(values) | (values == np.inf)
    if np.any(bad):
        index = int(np.argmax(bad))
        raise QuadratureError(
            "Log-integrand is not finite at a quadrature node",
            node_index=index,
            node=complex(nodes[index])
        )
    with np.errstate(divide="ignore"):
        return float(logsumexp(values + log_weights))
