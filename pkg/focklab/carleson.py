"""
Carleson measures for F^{p,m}: the geometric disk test and the embedding test.

The geometric test sweeps lattice centers a and records

    mu(B(a, r)) / (1 + |a|)^{mp},

the embedding test integrates normalized reproducing kernels
K_m(., a) / ||K_m(., a)||_{p,m} against mu. Both profiles are binned into
radial shells and classified by the same rule, so the two verdicts can be
compared measure by measure.
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import logsumexp

from focklab.models import (
    CarlesonReport, CarlesonVerdict, DiscreteMeasure, DiskRegion,
    ShellProfile, SpaceParams, VanishingProfile, complex_pair
)
from focklab.parallel import ordered_map
from focklab.quadrature import (
    DEFAULT_ANGULAR_COUNT, DEFAULT_RADIAL_DEGREE, PlaneQuadrature, build_plane_rule
)
from focklab.spaces import normalizer, require_rate
from focklab.special import log_abs_kernel
from focklab.utils import ConfigurationError, DomainError, get_logger, log_execution_time

logger = get_logger(__name__)

DEFAULT_RADIUS = 1.0
DEFAULT_GROWTH_FACTOR = 1.05
DEFAULT_VANISHING_FRACTION = 0.5
DEFAULT_SHELL_COUNT = 8
CENTER_CHUNK = 4096


def _require_finite_p(params: SpaceParams) -> None:
    if params.is_sup:
        raise DomainError(
            "Carleson tests are defined for p < inf",
            parameter="p",
            value=params.p,
            rule="p < inf"
        )


def _tree(mu: DiscreteMeasure) -> cKDTree:
    return cKDTree(np.column_stack([mu.positions.real, mu.positions.imag]))


def _disk_masses(mu: DiscreteMeasure, centers: np.ndarray, radius: float) -> np.ndarray:
    """mu(B(a, radius)) for every center a, open disks."""
    if mu.is_empty or centers.size == 0:
        return np.zeros(centers.size)
    tree = _tree(mu)
    points = np.column_stack([centers.real, centers.imag])
    masses = np.empty(centers.size)
    for i, (center, hits) in enumerate(zip(centers, tree.query_ball_point(points, radius))):
        hits = sorted(hits)
        inside = [j for j in hits if abs(mu.positions[j] - center) < radius]
        masses[i] = math.fsum(mu.masses[inside])
    return masses


def disk_mass(mu: DiscreteMeasure, region: DiskRegion) -> float:
    """Total mass of the atoms strictly inside ``region``."""
    return float(_disk_masses(mu, np.array([region.center], dtype=complex), region.radius)[0])


def default_window(mu: DiscreteMeasure, r: float) -> float:
    """Four times the support radius plus 8r."""
    return 4.0 * mu.support_radius + 8.0 * r


def lattice_centers(window: float, spacing: float) -> np.ndarray:
    """Points of spacing * Z^2 with |a| <= window, ordered by (real, imag)."""
    if not spacing > 0 or not window > 0:
        raise DomainError("Window and spacing must be positive", parameter="spacing", value=spacing)
    count = int(math.floor(window / spacing))
    steps = np.arange(-count, count + 1) * spacing
    xs, ys = np.meshgrid(steps, steps, indexing="ij")
    centers = (xs + 1j * ys).ravel()
    return centers[np.abs(centers) <= window * (1.0 + 1e-12)]


def shell_edges(mu: DiscreteMeasure, r: float, count: int = DEFAULT_SHELL_COUNT) -> np.ndarray:
    """Edges of ``count`` shells covering [0, max(support - r, r)]."""
    return np.linspace(0.0, max(mu.support_radius - r, r), count + 1)


def _shell_profile(moduli: np.ndarray, values: np.ndarray, edges: Sequence[float]) -> List[ShellProfile]:
    shells = []
    last = len(edges) - 2
    for i in range(len(edges) - 1):
        lo, hi = float(edges[i]), float(edges[i + 1])
        upper = moduli <= hi if i == last else moduli < hi
        mask = (moduli >= lo) & upper & np.isfinite(values)
        count = int(np.count_nonzero(mask))
        shells.append(ShellProfile(
            inner=lo,
            outer=hi,
            max_value=float(np.max(values[mask])) if count else None,
            centers=count,
        ))
    return shells


def classify_profile(
    shells: Sequence[ShellProfile],
    growth_factor: float = DEFAULT_GROWTH_FACTOR,
    vanishing_fraction: float = DEFAULT_VANISHING_FRACTION
) -> CarlesonVerdict:
    """
    Verdict from a shell profile.

    Shells holding data are split into an inner and an outer half. The
    profile is bounded when the outer maximum stays within ``growth_factor``
    of the inner maximum, and vanishing when moreover it does not rise and
    the last shell has dropped to ``vanishing_fraction`` of the peak.
    """
    data = [s.max_value for s in shells if s.max_value is not None]
    if len(data) < 2:
        return CarlesonVerdict.CARLESON
    half = len(data) // 2
    inner, outer = max(data[:half]), max(data[half:])
    if outer > growth_factor * inner:
        return CarlesonVerdict.NOT_CARLESON
    if outer <= inner and data[-1] <= vanishing_fraction * max(data):
        return CarlesonVerdict.VANISHING
    return CarlesonVerdict.CARLESON


def _argmax_center(centers: np.ndarray, values: np.ndarray) -> Tuple[float, complex]:
    """Largest value; ties go to the lexicographically smallest center."""
    if values.size == 0:
        return 0.0, 0j
    best = float(np.max(values))
    tied = centers[values == best]
    first = np.lexsort((tied.imag, tied.real))[0]
    return best, complex(tied[first])


def _ratios(
    mu: DiscreteMeasure,
    params: SpaceParams,
    centers: np.ndarray,
    r: float,
    n_jobs: int
) -> np.ndarray:
    chunks = [centers[i:i + CENTER_CHUNK] for i in range(0, centers.size, CENTER_CHUNK)]
    masses = ordered_map(lambda chunk: _disk_masses(mu, chunk, r), chunks, n_jobs)
    masses = np.concatenate(masses) if masses else np.zeros(0)
    return masses / (1.0 + np.abs(centers)) ** params.growth_exponent


def _check_lattice(r: float, spacing: float) -> None:
    if not r > 0:
        raise DomainError("Disk radius must be positive", parameter="r", value=r, rule="r > 0")
    if spacing > r:
        raise ConfigurationError(
            f"Lattice spacing {spacing:g} exceeds the disk radius {r:g}",
            config_key="spacing"
        )


@log_execution_time
def carleson_sup(
    mu: DiscreteMeasure,
    params: SpaceParams,
    r: float = DEFAULT_RADIUS,
    window: Optional[float] = None,
    spacing: Optional[float] = None,
    shell_count: int = DEFAULT_SHELL_COUNT,
    growth_factor: float = DEFAULT_GROWTH_FACTOR,
    vanishing_fraction: float = DEFAULT_VANISHING_FRACTION,
    n_jobs: int = 1
) -> CarlesonReport:
    """
    Geometric test: sup over lattice centers of mu(B(a,r)) / (1+|a|)^{mp}.

    Args:
        mu: Measure under test
        params: Space F^{p,m}, p < inf
        r: Disk radius
        window: Largest |a| swept (default 4 * support radius + 8r)
        spacing: Lattice spacing, at most r (default r/2)
        shell_count: Shells of the verdict profile
        growth_factor: Outer/inner tolerance for a bounded verdict
        vanishing_fraction: Last-shell fraction for a vanishing verdict
        n_jobs: Worker threads

    Returns:
        CarlesonReport with the geometric fields filled in

    Raises:
        DomainError: If p = inf
        ConfigurationError: If spacing > r
    """
    _require_finite_p(params)
    spacing = r / 2.0 if spacing is None else spacing
    _check_lattice(r, spacing)
    window = default_window(mu, r) if window is None else window

    centers = lattice_centers(window, spacing)
    logger.info(
        "Sweeping lattice centers",
        measure=mu.name,
        centers=int(centers.size),
        window=window,
        spacing=spacing
    )
    ratios = _ratios(mu, params, centers, r, n_jobs)
    sup_ratio, argmax = _argmax_center(centers, ratios)
    shells = _shell_profile(np.abs(centers), ratios, shell_edges(mu, r, shell_count))
    verdict = classify_profile(shells, growth_factor, vanishing_fraction)
    logger.info("Lattice sweep finished", measure=mu.name, sup_ratio=sup_ratio, verdict=verdict.value)

    return CarlesonReport(
        measure_name=mu.name,
        p=params.p,
        m=params.m,
        sup_ratio=sup_ratio,
        argmax_center=complex_pair(argmax),
        lattice_spacing=spacing,
        radius=r,
        window=window,
        centers_swept=int(centers.size),
        verdict=verdict,
        growth_factor=growth_factor,
        vanishing_fraction=vanishing_fraction,
        shells=shells,
    )


def vanishing_profile(
    mu: DiscreteMeasure,
    params: SpaceParams,
    r: float,
    radii: Sequence[float],
    spacing: Optional[float] = None,
    growth_factor: float = DEFAULT_GROWTH_FACTOR,
    vanishing_fraction: float = DEFAULT_VANISHING_FRACTION,
    n_jobs: int = 1
) -> VanishingProfile:
    """
    Per-shell maxima of mu(B(a,r)) / (1+|a|)^{mp} for shells between consecutive
    ``radii``, classified by ``classify_profile``.

    Lattice centers are swept out to the last radius only, so the verdict
    reads the trend of the ratio over the given shells.

    Raises:
        DomainError: If p = inf or the radii are not increasing
    """
    _require_finite_p(params)
    edges = np.asarray(radii, dtype=float)
    if edges.size < 2 or np.any(np.diff(edges) <= 0) or edges[0] < 0:
        raise DomainError("Shell radii must be increasing and non-negative", parameter="radii")
    spacing = r / 2.0 if spacing is None else spacing
    _check_lattice(r, spacing)
    centers = lattice_centers(float(edges[-1]), spacing)
    ratios = _ratios(mu, params, centers, r, n_jobs)
    shells = _shell_profile(np.abs(centers), ratios, edges)
    return VanishingProfile(
        shells=shells,
        verdict=classify_profile(shells, growth_factor, vanishing_fraction),
        growth_factor=growth_factor,
        vanishing_fraction=vanishing_fraction,
    )


def _test_rule(
    params: SpaceParams,
    rule: Optional[PlaneQuadrature],
    radial_degree: int,
    angular_count: int
) -> PlaneQuadrature:
    if rule is None:
        return build_plane_rule(params.gaussian_rate, radial_degree, angular_count)
    require_rate(rule, params.gaussian_rate)
    if rule.alpha != 0:
        raise ConfigurationError("Kernel norms need a rule without radial power", config_key="rule.alpha")
    return rule


def log_kernel_norm(modulus: float, params: SpaceParams, rule: PlaneQuadrature) -> float:
    """
    log ||K_m(., a)||_{p,m}^p for |a| = modulus.

    The integral is taken with the Gaussian rule recentred at a, where
    |K_m(z,a)|^p e^{-p|z|^2/2} behaves like e^{p|a|^2/2} e^{-p|z-a|^2/2};
    the sum is done in log space.
    """
    a = float(modulus)
    offsets = rule.grid
    z = a + offsets
    with np.errstate(divide="ignore"):
        log_values = (
            params.p * log_abs_kernel(z, a, params.m)
            - params.p * np.abs(z) ** 2 / 2.0
            + params.growth_exponent * np.log(np.abs(z))
            + params.p * np.abs(offsets) ** 2 / 2.0
        )
    weights = np.broadcast_to(rule.t_weights[:, None] * (np.pi / rule.angular_count), z.shape)
    return float(math.log(normalizer(params)) + logsumexp(log_values, b=weights))


def embedding_profile(
    mu: DiscreteMeasure,
    params: SpaceParams,
    centers: Sequence[complex],
    rule: Optional[PlaneQuadrature] = None,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    n_jobs: int = 1
) -> Tuple[np.ndarray, int]:
    """
    int |f_a(z) e^{-|z|^2/2}|^p dmu(z) for the normalized kernels f_a.

    Returns:
        (values, skipped): one value per center, NaN where the kernel norm
        under- or overflowed, and the number of such centers

    Raises:
        DomainError: If p = inf
        ConfigurationError: If the rule's rate is not p/2
    """
    _require_finite_p(params)
    centers = np.asarray(list(centers), dtype=complex)
    if centers.size == 0:
        return np.zeros(0), 0
    rule = _test_rule(params, rule, radial_degree, angular_count)

    # the norm only depends on |a|
    moduli, inverse = np.unique(np.abs(centers), return_inverse=True)
    unique_norms = ordered_map(lambda modulus: log_kernel_norm(modulus, params, rule), moduli.tolist(), n_jobs)
    log_norms = np.asarray(unique_norms, dtype=float)[inverse.ravel()]

    positions = mu.positions
    masses = mu.masses

    def value(index: int) -> float:
        log_norm = log_norms[index]
        if not math.isfinite(log_norm):
            return math.nan
        if mu.is_empty:
            return 0.0
        with np.errstate(divide="ignore"):
            exponents = params.p * (
                log_abs_kernel(positions, centers[index], params.m) - np.abs(positions) ** 2 / 2.0
            )
        return math.fsum(masses * np.exp(exponents - log_norm))

    values = np.array(ordered_map(value, range(centers.size), n_jobs), dtype=float)
    skipped = int(np.count_nonzero(np.isnan(values)))
    if skipped:
        logger.warning("Skipped test centers with degenerate kernel norms", measure=mu.name, skipped=skipped)
    return values, skipped


def embedding_estimate(
    mu: DiscreteMeasure,
    params: SpaceParams,
    centers: Optional[Sequence[complex]] = None,
    rule: Optional[PlaneQuadrature] = None,
    **kwargs
) -> float:
    """
    Max over centers of the normalized embedding integral (p-th power form).

    Centers default to the atoms' positions; the empty measure gives 0.
    """
    if centers is None:
        centers = mu.positions
    values, _ = embedding_profile(mu, params, centers, rule, **kwargs)
    finite = values[np.isfinite(values)]
    return float(np.max(finite)) if finite.size else 0.0


def kernel_sequence_decay(
    mu: DiscreteMeasure,
    params: SpaceParams,
    radii: Sequence[float],
    rule: Optional[PlaneQuadrature] = None,
    **kwargs
) -> List[Tuple[float, float]]:
    """Embedding values of the normalized kernels at a = radius on the positive axis."""
    radii = [float(x) for x in radii]
    values, _ = embedding_profile(mu, params, radii, rule, **kwargs)
    return [(x, float(v)) for x, v in zip(radii, values)]


def embedding_centers(mu: DiscreteMeasure, extra: Sequence[complex] = ()) -> np.ndarray:
    """Atom positions plus ``extra`` centers, deduplicated and sorted by (real, imag)."""
    points = np.concatenate([mu.positions, np.asarray(list(extra), dtype=complex)])
    return np.unique(points)


@log_execution_time
def analyze_measure(
    mu: DiscreteMeasure,
    params: SpaceParams,
    r: float = DEFAULT_RADIUS,
    window: Optional[float] = None,
    spacing: Optional[float] = None,
    shell_count: int = DEFAULT_SHELL_COUNT,
    growth_factor: float = DEFAULT_GROWTH_FACTOR,
    vanishing_fraction: float = DEFAULT_VANISHING_FRACTION,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    n_jobs: int = 1
) -> CarlesonReport:
    """
    Geometric sweep, embedding estimate, both shell profiles and the
    vanishing profile over the verdict shells for one measure.

    Embedding test centers are the atoms plus the lattice center maximizing
    the geometric ratio; the kernel decay column samples the shell midpoints.
    """
    report = carleson_sup(
        mu, params, r, window, spacing, shell_count, growth_factor, vanishing_fraction, n_jobs
    )
    centers = embedding_centers(mu, [complex(*report.argmax_center)])
    resolution = {"radial_degree": radial_degree, "angular_count": angular_count, "n_jobs": n_jobs}
    values, skipped = embedding_profile(mu, params, centers, **resolution)

    finite = values[np.isfinite(values)]
    estimate = float(np.max(finite)) if finite.size else 0.0
    edges = shell_edges(mu, r, shell_count)
    embedding_shells = _shell_profile(np.abs(centers), values, edges)
    embedding_verdict = classify_profile(embedding_shells, growth_factor, vanishing_fraction)
    midpoints = (edges[:-1] + edges[1:]) / 2.0
    decay = kernel_sequence_decay(mu, params, midpoints, **resolution)
    vanishing = vanishing_profile(
        mu, params, r, edges, report.lattice_spacing, growth_factor, vanishing_fraction, n_jobs
    )

    return report.model_copy(update={
        "embedding_estimate": estimate,
        "embedding_verdict": embedding_verdict,
        "embedding_shells": embedding_shells,
        "test_centers": int(centers.size),
        "skipped_centers": skipped,
        "kernel_decay": decay,
        "vanishing": vanishing,
    })


def lattice_measure(radius: float = 10.0, name: str = "lattice") -> DiscreteMeasure:
    """Unit atoms on the integer lattice within |z| <= radius."""
    count = int(math.floor(radius))
    steps = np.arange(-count, count + 1)
    xs, ys = np.meshgrid(steps, steps, indexing="ij")
    points = (xs + 1j * ys).ravel()
    points = points[np.abs(points) <= radius]
    return DiscreteMeasure.from_arrays(points, np.ones(points.size), name=name)


def measure_zoo() -> List[Tuple[DiscreteMeasure, SpaceParams]]:
    """
    Standard measures with the space each one is analysed in.

    Atom, lattice (in F^{2,1} and F^{2,0}), decaying masses 1/(1+|n|) on the
    real axis (in F^{1,1}), masses e^{n^2} at n = 1..8, and the lattice
    translated by 1+i and with doubled masses.
    """
    default = SpaceParams(p=2.0, m=1)
    lattice = lattice_measure()
    n = np.arange(-20, 21)
    grows = np.arange(1, 9)
    return [
        (DiscreteMeasure.from_arrays([0j], [1.0], name="atom"), default),
        (lattice, default),
        (DiscreteMeasure(atoms=lattice.atoms, name="lattice-m0"), SpaceParams(p=2.0, m=0)),
        (
            DiscreteMeasure.from_arrays(n.astype(complex), 1.0 / (1.0 + np.abs(n)), name="decaying"),
            SpaceParams(p=1.0, m=1),
        ),
        (
            DiscreteMeasure.from_arrays(grows.astype(complex), np.exp(grows.astype(float) ** 2), name="exponential"),
            default,
        ),
        (lattice.translated(1 + 1j, name="translated"), default),
        (lattice.scaled(2.0, name="scaled"), default),
    ]
