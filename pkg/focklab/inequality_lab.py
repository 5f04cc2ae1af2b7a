"""
Empirical two-sided checks of the Fock-Sobolev estimates.

Each check sweeps a parameter grid, computes the ratio of the two sides of
one estimate at every point and returns a ``BoundReport`` with the extrema,
where they occur and whether they stayed inside the admissible band.
Removable 0/0 points are excluded and counted, never defined by limits.
Extrema ties go to the first point in grid order.
"""

import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.special import gammaln

from focklab.entire import EntireFunction, taylor_section
from focklab.models import BoundReport, DiskRegion, SpaceParams, complex_pair
from focklab.parallel import ordered_map
from focklab.projection import DEFAULT_PROJECTION_DEGREE, projection_ratio
from focklab.quadrature import (
    DEFAULT_ANGULAR_COUNT, DEFAULT_DISK_BUDGET, DEFAULT_PANEL_NODES, DEFAULT_RADIAL_DEGREE, PANEL_TAIL,
    PlaneQuadrature, PolarPanelRule, build_panel_rule, build_plane_rule, integrate_disk,
    integrate_log_polar, integrate_values, norm_rule
)
from focklab.spaces import duality_ratio, holder_constant, norm, normalizer, theorem_a_ratio
from focklab.special import (
    LEMMA_SERIES_TOLERANCE, kernel, lemma_series, log_abs_kernel, remainder_zeros
)
from focklab.utils import (
    ConfigurationError, DomainError, HypothesisViolationError, ValidationError, get_logger
)

logger = get_logger(__name__)

DEFAULT_SIGMA = 0.5
DEFAULT_X_MAX = 40.0
DEFAULT_X_POINTS = 80
DEFAULT_S_VALUES = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.5)
DEFAULT_Z_RADII = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0)
DEFAULT_ANGLE_COUNT = 8
SECTION_DEGREE = 15
LEMMA4_DISPLAY_SLACK = 1e-6

Sample = Tuple[Optional[float], Dict[str, Any]]


def default_x_grid(
    sigma: float = DEFAULT_SIGMA,
    x_max: float = DEFAULT_X_MAX,
    points: int = DEFAULT_X_POINTS
) -> np.ndarray:
    """Uniform grid of ``points`` values on [sigma, x_max]."""
    return np.linspace(sigma, x_max, points)


def default_z_grid(
    radii: Sequence[float] = DEFAULT_Z_RADII,
    angles: int = DEFAULT_ANGLE_COUNT
) -> np.ndarray:
    """Points r e^{2 pi i j / angles}; radius 0 contributes the origin once."""
    points: List[complex] = []
    for r in radii:
        if r == 0:
            points.append(0j)
            continue
        points.extend(r * np.exp(2j * np.pi * np.arange(angles) / angles))
    return np.asarray(points, dtype=complex)


def _point(z: complex) -> List[float]:
    return list(complex_pair(z))


def _summarize(
    inequality_id: str,
    samples: Sequence[Sample],
    grid: Dict[str, Any],
    band: Tuple[float, float] = (0.0, math.inf),
    **fields: Any
) -> BoundReport:
    """
    Fold (ratio, point) samples into a report; a ratio of None is excluded.

    The check passes when every ratio is finite and lies within ``band``
    (open at 0 on the left, closed on the right).
    """
    kept = [(ratio, point) for ratio, point in samples if ratio is not None]
    excluded = len(samples) - len(kept)
    if not kept:
        return BoundReport(
            inequality_id=inequality_id, grid=grid, passed=False, excluded=excluded, **fields
        )

    ratios = np.array([ratio for ratio, _ in kept], dtype=float)
    if np.any(np.isnan(ratios)):
        i_min = i_max = int(np.argmax(np.isnan(ratios)))
        finite = False
    else:
        i_min, i_max = int(np.argmin(ratios)), int(np.argmax(ratios))
        finite = bool(np.all(np.isfinite(ratios)))
    ratio_min, ratio_max = float(ratios[i_min]), float(ratios[i_max])
    low, high = band
    passed = finite and ratio_min > low and ratio_max <= high
    if excluded:
        logger.warning("Excluded removable points", inequality_id=inequality_id, excluded=excluded)
    logger.info(
        "Bound check finished",
        inequality_id=inequality_id,
        ratio_min=ratio_min,
        ratio_max=ratio_max,
        passed=passed
    )
    return BoundReport(
        inequality_id=inequality_id,
        grid=grid,
        ratio_min=ratio_min,
        ratio_max=ratio_max,
        argmin=kept[i_min][1],
        argmax=kept[i_max][1],
        passed=passed,
        evaluated=len(kept),
        excluded=excluded,
        **fields
    )


def _with_extras(report: BoundReport, passed: bool, **extras: Any) -> BoundReport:
    merged = {**report.extras, **extras}
    if report.ratio_min is None:
        passed = False
    return report.model_copy(update={"passed": report.passed and passed, "extras": merged})


def _series_ratio(s: float, x: float, tolerance: float) -> float:
    return lemma_series(s, x, tolerance) * math.exp(-x)


def _series_samples(
    s_values: Sequence[float],
    x_grid: Sequence[float],
    tolerance: float,
    n_jobs: int
) -> List[Sample]:
    pairs = [(float(s), float(x)) for s in s_values for x in x_grid]
    ratios = ordered_map(lambda pair: _series_ratio(pair[0], pair[1], tolerance), pairs, n_jobs)
    return [(ratio, {"s": s, "x": x}) for ratio, (s, x) in zip(ratios, pairs)]


def _per_s_extrema(samples: Sequence[Sample]) -> Dict[str, List[float]]:
    per_s: Dict[str, List[float]] = {}
    for ratio, point in samples:
        key = f"{point['s']:g}"
        low, high = per_s.get(key, [ratio, ratio])
        per_s[key] = [min(low, ratio), max(high, ratio)]
    return per_s


def _require_grid_above(x_grid: Sequence[float], sigma: float) -> None:
    below = [x for x in x_grid if x < sigma]
    if below:
        raise ValidationError(
            "x grid reaches below sigma",
            field_name="x_grid",
            field_value=min(below),
            validation_rule=f"x >= {sigma:g}"
        )


def check_lemma1(
    s_values: Sequence[float] = DEFAULT_S_VALUES,
    x_grid: Optional[Sequence[float]] = None,
    sigma: float = DEFAULT_SIGMA,
    tolerance: float = LEMMA_SERIES_TOLERANCE,
    n_jobs: int = 1
) -> BoundReport:
    """
    Upper bound S(s, x) <= C e^x for x >= sigma.

    For s >= 0 the bound also holds on [0, sigma]; those values are checked
    separately and reported under ``near_zero_max``.
    """
    x_grid = default_x_grid(sigma) if x_grid is None else x_grid
    _require_grid_above(x_grid, sigma)
    samples = _series_samples(s_values, x_grid, tolerance, n_jobs)

    near_zero = [s for s in s_values if s >= 0]
    near_samples = _series_samples(near_zero, np.linspace(0.0, sigma, 9), tolerance, n_jobs)
    near_max = max((ratio for ratio, _ in near_samples), default=None)

    report = _summarize(
        "lemma1",
        samples,
        grid={"s_values": list(map(float, s_values)), "x_min": float(min(x_grid)),
              "x_max": float(max(x_grid)), "x_points": len(x_grid), "sigma": sigma},
        resolution={"series_tolerance": tolerance},
    )
    near_ok = near_max is None or math.isfinite(near_max)
    return _with_extras(report, near_ok, per_s=_per_s_extrema(samples), near_zero_max=near_max)


def check_lemma2(
    s_values: Sequence[float] = DEFAULT_S_VALUES,
    x_grid: Optional[Sequence[float]] = None,
    sigma: float = DEFAULT_SIGMA,
    tolerance: float = LEMMA_SERIES_TOLERANCE,
    n_jobs: int = 1
) -> BoundReport:
    """
    Lower bound S(s, x) >= C e^x for x >= sigma.

    For s <= 0 the bound extends to small x > 0 (and to x = 0 when s = 0,
    since S(s, 0) is undefined for s < 0); reported under ``near_zero_min``.
    """
    x_grid = default_x_grid(sigma) if x_grid is None else x_grid
    _require_grid_above(x_grid, sigma)
    samples = _series_samples(s_values, x_grid, tolerance, n_jobs)

    near_points = list(np.linspace(0.0, sigma, 9)[1:])
    near_samples = _series_samples([s for s in s_values if s < 0], near_points, tolerance, n_jobs)
    if 0.0 in [float(s) for s in s_values]:
        near_samples += _series_samples([0.0], [0.0] + near_points, tolerance, n_jobs)
    near_min = min((ratio for ratio, _ in near_samples), default=None)

    report = _summarize(
        "lemma2",
        samples,
        grid={"s_values": list(map(float, s_values)), "x_min": float(min(x_grid)),
              "x_max": float(max(x_grid)), "x_points": len(x_grid), "sigma": sigma},
        resolution={"series_tolerance": tolerance},
    )
    near_ok = near_min is None or near_min > 0
    return _with_extras(report, near_ok, per_s=_per_s_extrema(samples), near_zero_min=near_min)


Theorem3Rule = Union[PlaneQuadrature, PolarPanelRule]


def has_smooth_power(p: float) -> bool:
    """True when |f|^p is smooth wherever f is analytic, i.e. p is an even integer."""
    return float(p).is_integer() and int(p) % 2 == 0


def theorem3_rule(
    p: float,
    a: float,
    b: float,
    m: int,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    panel_nodes: int = DEFAULT_PANEL_NODES
) -> Theorem3Rule:
    """
    Rule of rate a absorbing |w|^{mp + b}.

    Even p gets the Laguerre plane rule. Otherwise |K_m(z, .)|^p has conical
    zeros, and the panel rule places them on cell corners.
    """
    alpha = (m * p + b) / 2.0
    if has_smooth_power(p):
        return build_plane_rule(a, radial_degree, angular_count, alpha=alpha)
    return build_panel_rule(a, alpha, panel_nodes)


def _panel_log_integral(z: complex, p: float, a: float, m: int, rule: PolarPanelRule) -> float:
    growth = p * abs(z)
    radius = rule.radius_for(growth)
    # the integrand peaks at w = pz/2a; zeros far from it carry no weight
    center = p * z / (2.0 * a)
    cusps = np.conj(remainder_zeros(m, abs(z) * radius) / z)
    cusps = cusps[a * np.abs(cusps - center) ** 2 < PANEL_TAIL]
    return integrate_log_polar(
        rule,
        lambda w: p * log_abs_kernel(z, w, m),
        radius,
        cusps,
        sharpness=growth * radius,
    )


def theorem3_log_ratio(z: complex, p: float, a: float, b: float, m: int, rule: Theorem3Rule) -> float:
    """
    log of I(z) |z|^{-b} e^{-(p^2/4a)|z|^2} for z != 0, where

        I(z) = int |e^{z conj(w)} - p_m(z conj(w))|^p e^{-a|w|^2} |w|^b dA(w)
             = |z|^{mp} / m!^p int |K_m(z, w)|^p |w|^{mp+b} e^{-a|w|^2} dA(w).
    """
    if isinstance(rule, PolarPanelRule):
        log_integral = _panel_log_integral(z, p, a, m, rule)
    else:
        values = np.abs(kernel(z, rule.grid, m)) ** p
        log_integral = math.log(integrate_values(rule, values).real)
    modulus = abs(z)
    return (
        (m * p - b) * math.log(modulus)
        - p * gammaln(m + 1)
        + log_integral
        - p * p * modulus ** 2 / (4.0 * a)
    )


def _theorem3_sample(
    z: complex,
    p: float,
    a: float,
    b: float,
    m: int,
    sigma: float,
    rule: Theorem3Rule
) -> Sample:
    point = {"z": _point(z)}
    if abs(z) < sigma and b > m * p:
        return None, point
    if z == 0:
        # I(0) = int |E_m(0)|^p ... vanishes for m >= 1
        if m >= 1:
            return (None if b > 0 else 0.0), point
        if b > 0:
            return math.inf, point
        # int e^{-a|w|^2} dA = pi/a
        return (math.pi / a if b == 0 else 0.0), point
    return math.exp(theorem3_log_ratio(z, p, a, b, m, rule)), point


def check_theorem3(
    p: float,
    a: float,
    b: float,
    m: int,
    z_grid: Optional[Sequence[complex]] = None,
    sigma: float = DEFAULT_SIGMA,
    rule: Optional[Theorem3Rule] = None,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    n_jobs: int = 1,
    panel_nodes: int = DEFAULT_PANEL_NODES
) -> BoundReport:
    """
    Kernel-remainder moment bound I(z) <= C |z|^b e^{(p^2/4a)|z|^2}.

    Points with |z| < sigma are kept only when b <= mp. Without a supplied
    rule, ``theorem3_rule`` picks one from the resolutions.

    Raises:
        HypothesisViolationError: If b <= -(mp + 2)
        ConfigurationError: If a supplied rule has the wrong rate or radial power
    """
    if not p > 0 or not a > 0 or math.isinf(p):
        raise DomainError("p and a must be positive and finite", parameter="p", value=(p, a))
    if m < 0:
        raise DomainError("Order must be non-negative", parameter="m", value=m)
    if not b > -(m * p + 2):
        raise HypothesisViolationError(
            f"b = {b:g} violates b > -(mp + 2) = {-(m * p + 2):g}",
            parameter="b",
            value=b,
            rule="b > -(mp + 2)"
        )
    alpha = (m * p + b) / 2.0
    if rule is None:
        rule = theorem3_rule(p, a, b, m, radial_degree, angular_count, panel_nodes)
    elif abs(rule.c - a) > 1e-12 * a or abs(rule.alpha - alpha) > 1e-12:
        raise ConfigurationError(
            f"Rule (c={rule.c:g}, alpha={rule.alpha:g}) does not match (a={a:g}, alpha={alpha:g})",
            config_key="rule"
        )
    z_grid = default_z_grid() if z_grid is None else z_grid
    points = [complex(z) for z in z_grid]
    samples = ordered_map(lambda z: _theorem3_sample(z, p, a, b, m, sigma, rule), points, n_jobs)
    return _summarize(
        "theorem3",
        samples,
        grid={"p": p, "a": a, "b": b, "m": m, "sigma": sigma, "points": len(points),
              "max_modulus": max((abs(z) for z in points), default=0.0)},
        band=(-math.inf, math.inf),
        resolution=rule.describe(),
        extras={"small_z_clause": b <= m * p},
    )


def _family_norms(
    family: Sequence[EntireFunction],
    params: SpaceParams,
    rule: PlaneQuadrature,
    n_jobs: int
) -> List[float]:
    return ordered_map(lambda f: norm(f, params, rule), family, n_jobs)


def check_lemma4(
    family: Sequence[EntireFunction],
    p: float,
    z_grid: Optional[Sequence[complex]] = None,
    tolerance: float = 1e-8,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    seed: Optional[int] = None,
    n_jobs: int = 1
) -> BoundReport:
    """
    Pointwise estimate |f(z)| e^{-|z|^2/2} <= ||f||_{p,0}.

    For p <= 1 the integrated form int |f e^{-|z|^2/2}| dA <= C [int |f e^{-|z|^2/2}|^p dA]^{1/p}
    with C = (p/2pi)^{(1-p)/p} is checked as well (``display_*`` extras).
    """
    params = SpaceParams(p=p, m=0)
    rule = norm_rule(params, radial_degree, angular_count)
    members = [f for f in family if not f.is_zero]
    norms = _family_norms(members, params, rule, n_jobs)
    z_grid = default_z_grid() if z_grid is None else z_grid

    samples: List[Sample] = []
    for index, (f, size) in enumerate(zip(members, norms)):
        values = np.abs(f(np.asarray(z_grid, dtype=complex))) * np.exp(-np.abs(z_grid) ** 2 / 2.0)
        samples.extend(
            (float(v) / size, {"f": index, "z": _point(z)}) for v, z in zip(values, z_grid)
        )
    samples.extend((None, {"f": None}) for _ in range(len(family) - len(members)))

    report = _summarize(
        "lemma4",
        samples,
        grid={"p": p, "functions": len(family), "points": len(z_grid)},
        band=(-math.inf, 1.0 + tolerance),
        seed=seed,
        resolution=rule.describe(),
    )
    if p > 1 or not members:
        return report

    one = SpaceParams(p=1.0, m=0)
    l1_norms = _family_norms(members, one, norm_rule(one, radial_degree, angular_count), n_jobs)
    display = [
        (l1 / normalizer(one)) / (size ** p / normalizer(params)) ** (1.0 / p)
        for l1, size in zip(l1_norms, norms)
    ]
    bound = (p / (2.0 * math.pi)) ** ((1.0 - p) / p)
    display_max = max(display)
    return _with_extras(
        report,
        display_max <= bound * (1.0 + LEMMA4_DISPLAY_SLACK),
        display_max=display_max,
        display_bound=bound,
    )


def _disk_ratio(f: EntireFunction, z: complex, p: float, t: float, node_budget: int) -> Optional[float]:
    def weighted(w: np.ndarray) -> np.ndarray:
        return np.abs(f(w) * np.exp(-np.abs(w) ** 2 / 2.0)) ** p

    local = integrate_disk(DiskRegion(center=z, radius=t), weighted, node_budget).real
    value = float(weighted(np.array([z]))[0])
    if local <= 0:
        return None
    return value / local


def check_lemma9(
    family: Sequence[EntireFunction],
    p: float,
    t: float,
    z_grid: Optional[Sequence[complex]] = None,
    node_budget: int = DEFAULT_DISK_BUDGET,
    seed: Optional[int] = None,
    n_jobs: int = 1
) -> BoundReport:
    """
    Sub-mean-value estimate |f(z) e^{-|z|^2/2}|^p <= C int_{|w-z|<t} |f(w) e^{-|w|^2/2}|^p dA(w).

    Zero functions are skipped. ``half_family_max`` records the maximum over
    the first half of the family so callers can check that the constant is
    stable as the family grows.
    """
    if not t > 0:
        raise DomainError("Disk radius must be positive", parameter="t", value=t, rule="t > 0")
    z_grid = default_z_grid() if z_grid is None else z_grid
    tasks = [
        (index, f, complex(z))
        for index, f in enumerate(family) if not f.is_zero
        for z in z_grid
    ]
    ratios = ordered_map(lambda task: _disk_ratio(task[1], task[2], p, t, node_budget), tasks, n_jobs)
    samples: List[Sample] = [
        (ratio, {"f": index, "z": _point(z)}) for ratio, (index, _, z) in zip(ratios, tasks)
    ]
    skipped = sum(1 for f in family if f.is_zero)

    report = _summarize(
        "lemma9",
        samples,
        grid={"p": p, "t": t, "functions": len(family), "points": len(z_grid)},
        band=(-math.inf, math.inf),
        seed=seed,
        resolution={"disk_node_budget": node_budget},
    )
    half = (len(family) + 1) // 2
    half_values = [r for (r, point) in samples if r is not None and point["f"] < half]
    half_max = max(half_values, default=None)
    stability = None
    if half_max and report.ratio_max is not None:
        stability = report.ratio_max / half_max
    return _with_extras(report, True, skipped_functions=skipped, half_family_max=half_max,
                        family_stability=stability)


def check_theorem_a(
    family: Sequence[EntireFunction],
    p_values: Sequence[float] = (1.0, 2.0, 4.0),
    m_values: Sequence[int] = (1, 2, 3),
    section_degree: int = SECTION_DEGREE,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    seed: Optional[int] = None,
    n_jobs: int = 1
) -> BoundReport:
    """
    Band of ||f||_{p,m} / (sum_{k<m} |f^{(k)}(0)| + ||f^{(m)}||_{F^p}) over a family.

    The band is also computed on the Taylor sections of degree
    ``section_degree``; ``widening[p,m]`` is (max/min on the full family)
    over (max/min on the sections), minus one.
    """
    members = [f for f in family if not f.is_zero]
    samples: List[Sample] = []
    bands: Dict[str, List[float]] = {}
    widening: Dict[str, Optional[float]] = {}
    for p in p_values:
        for m in m_values:
            params = SpaceParams(p=p, m=m)
            rule = norm_rule(params, radial_degree, angular_count)
            full = ordered_map(lambda f: theorem_a_ratio(f, params, rule), members, n_jobs)
            sections = [taylor_section(f, section_degree + 1) for f in members]
            sections = [g for g in sections if not g.is_zero]
            short = ordered_map(lambda g: theorem_a_ratio(g, params, rule), sections, n_jobs)

            key = params.label()
            samples.extend((ratio, {"p": p, "m": m, "f": i}) for i, ratio in enumerate(full))
            if full and short:
                bands[key] = [min(full), max(full)]
                spread_full = max(full) / min(full)
                spread_short = max(short) / min(short)
                widening[key] = spread_full / spread_short - 1.0

    report = _summarize(
        "theorem_a",
        samples,
        grid={"p_values": list(map(float, p_values)), "m_values": list(m_values),
              "functions": len(family), "section_degree": section_degree},
        seed=seed,
        resolution={"radial_degree": radial_degree, "angular_count": angular_count},
    )
    return _with_extras(report, True, bands=bands, widening=widening)


def check_projection_bound(
    params: SpaceParams,
    family: Sequence[EntireFunction],
    conjugate_powers: Sequence[int] = (0, 1, 2),
    degree: int = DEFAULT_PROJECTION_DEGREE,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    seed: Optional[int] = None,
    n_jobs: int = 1
) -> BoundReport:
    """
    Empirical norm of Q_m on inputs g(z) = conj(z)^j f(z).

    For j = 0 the inputs are entire and the ratio is 1 up to quadrature.
    """
    tasks = [(j, i, f) for j in conjugate_powers for i, f in enumerate(family) if not f.is_zero]

    def ratio(task: Tuple[int, int, EntireFunction]) -> float:
        j, _, f = task
        return projection_ratio(
            lambda w: np.conj(w) ** j * f(w), params, degree, radial_degree, angular_count
        )

    ratios = ordered_map(ratio, tasks, n_jobs)
    samples = [(r, {"j": j, "f": i}) for r, (j, i, _) in zip(ratios, tasks)]
    return _summarize(
        "projection_bound",
        samples,
        grid={"p": params.p, "m": params.m, "conjugate_powers": list(conjugate_powers),
              "functions": len(family)},
        band=(-math.inf, math.inf),
        seed=seed,
        resolution={"radial_degree": radial_degree, "angular_count": angular_count,
                    "projection_degree": degree},
    )


def check_duality(
    family: Sequence[EntireFunction],
    params: SpaceParams,
    tolerance: float = 1e-8,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT,
    seed: Optional[int] = None,
    n_jobs: int = 1
) -> BoundReport:
    """
    |<f, g>_m| / (||f||_{p,m} ||g||_{q,m}) over consecutive family pairs.

    For p >= 1 the ratio must stay below the Hoelder constant.
    """
    members = [f for f in family if not f.is_zero]
    pairs = list(zip(members[:-1], members[1:]))
    ratios = ordered_map(
        lambda pair: duality_ratio(pair[0], pair[1], params, radial_degree, angular_count),
        pairs,
        n_jobs
    )
    samples = [(r, {"pair": i}) for i, r in enumerate(ratios)]
    constant = holder_constant(params)
    band = (-math.inf, math.inf) if constant is None else (-math.inf, constant * (1.0 + tolerance))
    report = _summarize(
        "duality",
        samples,
        grid={"p": params.p, "m": params.m, "pairs": len(pairs)},
        band=band,
        seed=seed,
        resolution={"radial_degree": radial_degree, "angular_count": angular_count},
    )
    return _with_extras(report, True, holder_constant=constant)
