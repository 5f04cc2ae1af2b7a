"""
Norms of F^p, F^{p,m} and L^p_m, the constant c(p, m), and the pairing <f, g>_m.

For p < inf the norm is

    ||f||_{p,m}^p = c(p,m) int |z^m f(z) e^{-|z|^2/2}|^p dA(z),
    c(p,m) = (p/2)^{mp/2 + 1} / (pi Gamma(mp/2 + 1)),

so the constant function 1 has norm 1. For p = inf it is the supremum of
|z^m f(z)| e^{-|z|^2/2}. All norms are returned as p-th roots.
"""

import math
from typing import Callable, Optional, Union

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.special import gammaln

from focklab.entire import EntireFunction, derivative
from focklab.models import SpaceParams
from focklab.quadrature import (
    DEFAULT_ANGULAR_COUNT, DEFAULT_RADIAL_DEGREE, PlaneQuadrature,
    build_plane_rule, integrate_values, norm_rule
)
from focklab.utils import ConfigurationError, DomainError

DEFAULT_SUP_RAYS = 256
DEFAULT_SUP_RADIAL_POINTS = 400
SUP_REFINED_CANDIDATES = 8
RATE_TOLERANCE = 1e-12

PlaneFunction = Union[EntireFunction, Callable[[np.ndarray], np.ndarray]]


def normalizer(params: SpaceParams) -> float:
    """
    c(p, m) = (p/2)^{mp/2+1} / (pi Gamma(mp/2+1)).

    Raises:
        DomainError: If p = inf
    """
    if params.is_sup:
        raise DomainError(
            "The sup norm has no normalizing constant",
            parameter="p",
            value=params.p,
            rule="p < inf"
        )
    half = params.m * params.p / 2.0
    log_c = (half + 1.0) * math.log(params.p / 2.0) - math.log(math.pi) - gammaln(half + 1.0)
    return math.exp(log_c)


def require_rate(rule: PlaneQuadrature, rate: float) -> None:
    """Raise ConfigurationError unless the rule's Gaussian rate equals ``rate``."""
    if abs(rule.c - rate) > RATE_TOLERANCE * max(1.0, rate):
        raise ConfigurationError(
            f"Quadrature rate {rule.c:g} does not match the required rate {rate:g}",
            config_key="rule.c"
        )


def radial_power(rule: PlaneQuadrature, power: float) -> Union[float, np.ndarray]:
    """|z|^{power - 2 alpha} on the rule's grid, undoing the absorbed weight."""
    exponent = (power - 2.0 * rule.alpha) / 2.0
    if exponent == 0:
        return 1.0
    return rule.moduli_squared ** exponent


def _integral_norm(f: PlaneFunction, params: SpaceParams, rule: PlaneQuadrature) -> float:
    require_rate(rule, params.gaussian_rate)
    values = np.abs(np.asarray(f(rule.grid))) ** params.p
    values = values * radial_power(rule, params.m * params.p)
    integral = integrate_values(rule, np.broadcast_to(values, rule.grid.shape)).real
    return (normalizer(params) * max(integral, 0.0)) ** (1.0 / params.p)


def _sup_objective(f: PlaneFunction, m: int) -> Callable[[np.ndarray], np.ndarray]:
    def weighted(z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return np.abs(z) ** m * np.abs(np.asarray(f(z))) * np.exp(-np.abs(z) ** 2 / 2.0)
    return weighted


def sup_search_radius(f: PlaneFunction, m: int) -> float:
    """Radius sqrt(2(d+m)) + 10 beyond which |z^m f(z)| e^{-|z|^2/2} decreases."""
    degree = max(f.degree, 0) if isinstance(f, EntireFunction) else 0
    return math.sqrt(2.0 * (degree + m)) + 10.0


def sup_norm(
    f: PlaneFunction,
    m: int,
    radius: Optional[float] = None,
    rays: int = DEFAULT_SUP_RAYS,
    radial_points: int = DEFAULT_SUP_RADIAL_POINTS
) -> float:
    """
    Grid-refined sup of |z^m f(z)| e^{-|z|^2/2} over |z| <= radius.

    The best grid samples are refined along their rays with bounded
    golden-section search, then polished in the plane.
    """
    if isinstance(f, EntireFunction) and f.is_zero:
        return 0.0
    radius = sup_search_radius(f, m) if radius is None else radius
    objective = _sup_objective(f, m)

    radii = np.linspace(0.0, radius, radial_points)
    angles = 2.0 * np.pi * np.arange(rays) / rays
    grid = radii[:, None] * np.exp(1j * angles)[None, :]
    values = objective(grid)
    best = float(np.max(values))
    best_point = complex(grid.ravel()[int(np.argmax(values))])

    order = np.argsort(-values.ravel(), kind="stable")[:SUP_REFINED_CANDIDATES]
    step = radii[1] - radii[0] if radial_points > 1 else radius
    for flat in order:
        i, j = np.unravel_index(flat, values.shape)
        direction = np.exp(1j * angles[j])
        low = max(radii[i] - step, 0.0)
        high = min(radii[i] + step, radius)
        if high <= low:
            continue
        result = minimize_scalar(
            lambda r: -float(objective(np.array([r * direction]))[0]),
            bounds=(low, high),
            method="bounded",
            options={"xatol": 1e-12}
        )
        if -result.fun > best:
            best = float(-result.fun)
            best_point = complex(result.x * direction)

    polish = minimize(
        lambda xy: -float(objective(np.array([complex(xy[0], xy[1])]))[0]),
        x0=np.array([best_point.real, best_point.imag]),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15}
    )
    if np.isfinite(polish.fun) and -polish.fun > best:
        best = float(-polish.fun)
    return best


def norm(
    f: PlaneFunction,
    params: SpaceParams,
    rule: Optional[PlaneQuadrature] = None,
    sup_radius: Optional[float] = None,
    sup_rays: int = DEFAULT_SUP_RAYS,
    sup_radial_points: int = DEFAULT_SUP_RADIAL_POINTS
) -> float:
    """
    ||f||_{p,m} for an entire function or any plane function (element of L^p_m).

    Any rule of rate p/2 is accepted; its absorbed radial power is divided
    out, and ``norm_rule(params)`` is exact for ||1||.

    Raises:
        ConfigurationError: If the rule's rate is not p/2
    """
    if params.is_sup:
        return sup_norm(f, params.m, sup_radius, sup_rays, sup_radial_points)
    if isinstance(f, EntireFunction) and f.is_zero:
        return 0.0
    if rule is None:
        rule = norm_rule(params)
    return _integral_norm(f, params, rule)


def pairing(
    f: PlaneFunction,
    g: PlaneFunction,
    m: int,
    rule: Optional[PlaneQuadrature] = None
) -> complex:
    """
    <f, g>_m = 1/(m! pi) int f(z) conj(g(z)) e^{-|z|^2} |z|^{2m} dA(z).

    Raises:
        ConfigurationError: If the rule's rate is not 1
    """
    if rule is None:
        rule = build_plane_rule(1.0, alpha=float(m))
    require_rate(rule, 1.0)
    values = np.asarray(f(rule.grid)) * np.conj(np.asarray(g(rule.grid)))
    values = values * radial_power(rule, 2.0 * m)
    integral = integrate_values(rule, np.broadcast_to(values, rule.grid.shape))
    return integral / (math.factorial(m) * math.pi)


def theorem_a_denominator(f: EntireFunction, params: SpaceParams, rule: PlaneQuadrature) -> float:
    """sum_{k<m} |f^{(k)}(0)| + ||f^{(m)}||_{F^p}."""
    taylor = math.fsum(abs(f.taylor_coefficient_at_zero(k)) for k in range(params.m))
    plain = SpaceParams(p=params.p, m=0)
    return taylor + norm(derivative(f, params.m), plain, rule.rebuild(alpha=0.0))


def theorem_a_ratio(
    f: EntireFunction,
    params: SpaceParams,
    rule: Optional[PlaneQuadrature] = None
) -> float:
    """
    ||f||_{p,m} / (sum_{k<m} |f^{(k)}(0)| + ||f^{(m)}||_{F^p}).

    Raises:
        DomainError: For the zero function, m = 0 or p = inf
    """
    if f.is_zero:
        raise DomainError("The ratio is undefined for the zero function", parameter="f")
    if params.m < 1:
        raise DomainError("The equivalence needs m >= 1", parameter="m", value=params.m, rule="m >= 1")
    if params.is_sup:
        raise DomainError("The ratio is defined for p < inf", parameter="p", value=params.p)
    if rule is None:
        rule = norm_rule(params)
    return norm(f, params, rule) / theorem_a_denominator(f, params, rule)


def dual_exponent(p: float) -> float:
    """q = p/(p-1) for p > 1; q = inf for 0 < p <= 1."""
    if not p > 0:
        raise DomainError("p must be positive", parameter="p", value=p)
    if p <= 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def holder_constant(params: SpaceParams) -> Optional[float]:
    """
    Constant C with |<f,g>_m| <= C ||f||_{p,m} ||g||_{q,m} from Hoelder's inequality.

    None for p < 1, where no Hoelder bound applies.
    """
    if params.p < 1:
        return None
    q = dual_exponent(params.p)
    constant = 1.0 / (math.factorial(params.m) * math.pi)
    for exponent in (params.p, q):
        if not math.isinf(exponent):
            constant *= normalizer(SpaceParams(p=exponent, m=params.m)) ** (-1.0 / exponent)
    return constant


def duality_ratio(
    f: PlaneFunction,
    g: PlaneFunction,
    params: SpaceParams,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT
) -> float:
    """
    |<f,g>_m| / (||f||_{p,m} ||g||_{q,m}) with q the dual exponent.

    Raises:
        DomainError: If either norm vanishes
    """
    q_params = SpaceParams(p=dual_exponent(params.p), m=params.m)
    resolution = {"radial_degree": radial_degree, "angular_count": angular_count}

    def _norm(h: PlaneFunction, space: SpaceParams) -> float:
        if space.is_sup:
            return norm(h, space)
        return norm(h, space, norm_rule(space, **resolution))

    denominator = _norm(f, params) * _norm(g, q_params)
    if denominator == 0:
        raise DomainError("Duality ratio needs non-zero functions", parameter="f")
    rule = build_plane_rule(1.0, radial_degree, angular_count, alpha=float(params.m))
    return abs(pairing(f, g, params.m, rule)) / denominator
