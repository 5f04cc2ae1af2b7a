"""
The projection Q_m and the integral representations of f^{(m)} and f - f_m.

Every exponential kernel is expanded in powers of z conj(w) and truncated,
so each integral handed to quadrature is a moment

    M_k = int h(w) conj(w)^k e^{-|w|^2} dA(w)

of some data h, and the operators become coefficient maps. With h a
polynomial the moments are exact for the default rules.
"""

import math
from typing import Optional

import numpy as np
from scipy.special import gammaln

from focklab.entire import EntireFunction, evaluate
from focklab.models import SpaceParams
from focklab.quadrature import (
    DEFAULT_ANGULAR_COUNT, DEFAULT_RADIAL_DEGREE, PlaneQuadrature,
    build_plane_rule, integrate_values, norm_rule
)
from focklab.spaces import PlaneFunction, norm, radial_power, require_rate
from focklab.utils import ConfigurationError, DomainError

DEFAULT_PROJECTION_DEGREE = 32
DEFAULT_GUARD_TERMS = 4


def _require_order(m: int) -> None:
    if m < 0:
        raise DomainError("Order must be non-negative", parameter="m", value=m, rule="m >= 0")


def _conjugate_moments(
    values: np.ndarray,
    rule: PlaneQuadrature,
    count: int,
    power: float = 0.0
) -> np.ndarray:
    """
    M_k = int h(w) conj(w)^k |w|^power e^{-|w|^2} dA(w) for k < count.

    ``values`` holds h on ``rule.grid``; the rule's absorbed radial power is
    divided out.
    """
    require_rate(rule, 1.0)
    weighted = np.broadcast_to(values, rule.grid.shape) * radial_power(rule, power)
    conj_nodes = np.conj(rule.grid)
    moments = np.empty(count, dtype=complex)
    for k in range(count):
        moments[k] = integrate_values(rule, weighted)
        weighted = weighted * conj_nodes
    return moments


def _inverse_factorials(start: int, count: int) -> np.ndarray:
    """1/(start + k)! for k < count."""
    return np.exp(-gammaln(np.arange(start, start + count) + 1.0))


def project_polynomial(
    g: PlaneFunction,
    m: int,
    rule: Optional[PlaneQuadrature] = None,
    degree: int = DEFAULT_PROJECTION_DEGREE
) -> EntireFunction:
    """
    Q_m g truncated to the given degree.

    Coefficient k is 1/(pi (k+m)!) int g(w) conj(w)^k |w|^{2m} e^{-|w|^2} dA(w),
    so polynomials of degree <= ``degree`` are reproduced exactly.

    Raises:
        ConfigurationError: If the rule's rate is not 1
        QuadratureError: If g is not finite at a node
    """
    _require_order(m)
    if degree < 0:
        raise DomainError("Degree must be non-negative", parameter="degree", value=degree)
    if rule is None:
        rule = build_plane_rule(1.0, alpha=float(m))
    values = np.asarray(g(rule.grid))
    moments = _conjugate_moments(values, rule, degree + 1, power=2.0 * m)
    return EntireFunction(coeffs=moments * _inverse_factorials(m, degree + 1) / math.pi)


def project(
    g: PlaneFunction,
    m: int,
    z: complex,
    rule: Optional[PlaneQuadrature] = None,
    degree: int = DEFAULT_PROJECTION_DEGREE
) -> complex:
    """Q_m g(z) = 1/(m! pi) int g(w) K_m(z, w) e^{-|w|^2} |w|^{2m} dA(w)."""
    return evaluate(project_polynomial(g, m, rule, degree), z)


def derivative_polynomial(
    f: EntireFunction,
    m: int,
    rule: Optional[PlaneQuadrature] = None,
    truncation: Optional[int] = None
) -> EntireFunction:
    """
    f^{(m)} from 1/pi int e^{z conj(w)} conj(w)^m f(w) e^{-|w|^2} dA(w).

    The exponential is truncated after ``truncation`` powers of z conj(w)
    (default degree(f) + m + 4).

    Raises:
        ConfigurationError: If the truncation is below degree(f) + m
    """
    _require_order(m)
    if f.is_zero:
        return f
    minimum = f.degree + m
    if truncation is None:
        truncation = minimum + DEFAULT_GUARD_TERMS
    if truncation < minimum:
        raise ConfigurationError(
            f"Kernel truncation {truncation} is below degree(f) + m = {minimum}",
            config_key="kernel_guard_terms"
        )
    if rule is None:
        rule = build_plane_rule(1.0)
    values = np.asarray(f(rule.grid)) * np.conj(rule.grid) ** m
    moments = _conjugate_moments(values, rule, truncation + 1)
    return EntireFunction(coeffs=moments * _inverse_factorials(0, truncation + 1) / math.pi)


def derivative_via_projection(
    f: EntireFunction,
    m: int,
    z: complex,
    rule: Optional[PlaneQuadrature] = None,
    truncation: Optional[int] = None
) -> complex:
    """f^{(m)}(z) through its integral representation."""
    return evaluate(derivative_polynomial(f, m, rule, truncation), z)


def remainder_polynomial(
    fm_deriv: EntireFunction,
    m: int,
    rule: Optional[PlaneQuadrature] = None,
    truncation: Optional[int] = None
) -> EntireFunction:
    """
    f - f_m recovered from f^{(m)}.

    Uses (e^{z conj(w)} - p_m(z conj(w)))/conj(w)^m = sum_k z^{k+m} conj(w)^k/(k+m)!,
    so no division by conj(w) happens at the nodes.

    Raises:
        ConfigurationError: If the truncation is below degree(f^{(m)})
    """
    _require_order(m)
    if fm_deriv.is_zero:
        return fm_deriv
    if truncation is None:
        truncation = fm_deriv.degree + DEFAULT_GUARD_TERMS
    if truncation < fm_deriv.degree:
        raise ConfigurationError(
            f"Kernel truncation {truncation} is below degree(f^(m)) = {fm_deriv.degree}",
            config_key="kernel_guard_terms"
        )
    if rule is None:
        rule = build_plane_rule(1.0)
    moments = _conjugate_moments(np.asarray(fm_deriv(rule.grid)), rule, truncation + 1)
    shifted = moments * _inverse_factorials(m, truncation + 1) / math.pi
    return EntireFunction(coeffs=np.concatenate([np.zeros(m, dtype=complex), shifted]))


def remainder_via_kernel(
    fm_deriv: EntireFunction,
    m: int,
    z: complex,
    rule: Optional[PlaneQuadrature] = None,
    truncation: Optional[int] = None
) -> complex:
    """f(z) - f_m(z) where ``fm_deriv`` is f^{(m)}."""
    return evaluate(remainder_polynomial(fm_deriv, m, rule, truncation), z)


def projection_ratio(
    g: PlaneFunction,
    params: SpaceParams,
    degree: int = DEFAULT_PROJECTION_DEGREE,
    radial_degree: int = DEFAULT_RADIAL_DEGREE,
    angular_count: int = DEFAULT_ANGULAR_COUNT
) -> float:
    """
    ||Q_m g||_{p,m} / ||g||_{p,m}, an empirical lower bound for the norm of Q_m.

    Raises:
        DomainError: If g has zero norm
    """
    if params.is_sup:
        size = norm(g, params)
    else:
        size = norm(g, params, norm_rule(params, radial_degree, angular_count))
    if size == 0:
        raise DomainError("Projection ratio needs a non-zero input", parameter="g")
    rule = build_plane_rule(1.0, radial_degree, angular_count, alpha=float(params.m))
    image = project_polynomial(g, params.m, rule, degree)
    if params.is_sup:
        return norm(image, params) / size
    return norm(image, params, norm_rule(params, radial_degree, angular_count)) / size
