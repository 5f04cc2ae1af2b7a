"""
Stable special functions of the Fock-Sobolev theory.

- ``exp_remainder``: E_m(z) = e^z - p_m(z) = sum_{k>=m} z^k/k!
- ``kernel``: K_m(z, w) = m! sum_k (z conj(w))^k/(k+m)!, the reproducing kernel of F^{2,m}
- ``remainder_zeros``: the zeros of E_m, where |K_m| has conical zeros
- ``basis``: the orthonormal monomials sqrt(m!/(n+m)!) z^n
- ``lemma_series``: S(s, x) = sum_n (x/(n+1))^s x^n/n!

Every function accepts scalars or numpy arrays and is pure.
"""

import math
from typing import List, Union

import numpy as np
from pydantic import ValidationError as PydanticValidationError
from scipy.special import gammaln

from focklab.entire import DEFAULT_DEGREE_CAP, EntireFunction
from focklab.models import KernelParams
from focklab.utils import DegreeRangeError, DomainError

ComplexLike = Union[complex, float, np.ndarray]

LEMMA_SERIES_TOLERANCE = 1e-13
FIXED_POINT_STEPS = 60
NEWTON_STEPS = 8


def kernel_order(m: int) -> int:
    """
    Validate a Sobolev order through ``KernelParams``.

    Raises:
        DomainError: If m is not a non-negative integer
    """
    try:
        return KernelParams(m=int(m) if isinstance(m, np.integer) else m).m
    except PydanticValidationError as e:
        raise DomainError("Order must be non-negative", parameter="m", value=m, rule="m >= 0", cause=e)


def switch_threshold(m: int) -> float:
    """|z| at or below which series forms are used instead of closed forms."""
    return max(4.0, 2.0 * m)


def _series_terms(radius: float) -> int:
    # enough terms for |z| <= radius to reach double precision
    return int(3 * radius) + 40


def _shifted_series(zeta: np.ndarray, m: int) -> np.ndarray:
    """m! sum_k zeta^k/(k+m)! = 1F1(1; m+1; zeta) for |zeta| below the threshold."""
    result = np.empty_like(zeta)
    negative = zeta.real < 0
    largest = float(np.max(np.abs(zeta))) if zeta.size else 0.0
    count = _series_terms(max(switch_threshold(m), largest))

    direct = zeta[~negative]
    if direct.size:
        term = np.ones_like(direct)
        total = np.ones_like(direct)
        for k in range(1, count):
            term = term * direct / (k + m)
            total = total + term
        result[~negative] = total

    # Kummer: 1F1(1; m+1; zeta) = e^zeta sum_k m/(m+k) (-zeta)^k/k!
    flipped = zeta[negative]
    if flipped.size:
        power = np.ones_like(flipped)
        total = np.ones_like(flipped)
        for k in range(1, count):
            power = power * (-flipped) / k
            total = total + power * (m / (m + k))
        result[negative] = np.exp(flipped) * total

    return result


def _taylor_polynomial(z: np.ndarray, m: int) -> np.ndarray:
    """p_m(z) = sum_{k<m} z^k/k! by Horner's rule; p_0 = 0."""
    result = np.zeros_like(z)
    for k in range(m - 1, -1, -1):
        result = result * z / (k + 1) + 1.0
    return result


def _series_remainder(z: np.ndarray, m: int) -> np.ndarray:
    return z ** m / math.factorial(m) * _shifted_series(z, m)


def _subtracted_remainder(z: np.ndarray, m: int) -> np.ndarray:
    return np.exp(z) - _taylor_polynomial(z, m)


def _as_output(values: np.ndarray, scalar: bool) -> ComplexLike:
    return complex(values) if scalar else values


def exp_remainder(z: ComplexLike, m: int) -> ComplexLike:
    """
    E_m(z) = e^z - p_m(z) with relative error near machine precision.

    Tail summation below ``switch_threshold(m)``, direct subtraction above it.
    """
    m = kernel_order(m)
    points = np.asarray(z, dtype=complex)
    scalar = points.ndim == 0
    points = np.atleast_1d(points)
    if m == 0:
        return _as_output(np.exp(points).reshape(np.shape(z)), scalar)

    result = np.empty_like(points)
    small = np.abs(points) <= switch_threshold(m)
    if np.any(small):
        result[small] = _series_remainder(points[small], m)
    if np.any(~small):
        result[~small] = _subtracted_remainder(points[~small], m)
    return _as_output(result.reshape(np.shape(z)), scalar)


def kernel(z: ComplexLike, w: ComplexLike, m: int) -> ComplexLike:
    """
    Reproducing kernel K_m(z, w) of F^{2,m}; broadcasts over z and w.

    Finite at z conj(w) = 0, where it equals 1.
    """
    m = kernel_order(m)
    zeta = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    scalar = zeta.ndim == 0
    shape = zeta.shape
    zeta = np.atleast_1d(zeta).ravel()
    if m == 0:
        return _as_output(np.exp(zeta).reshape(shape), scalar)

    result = np.empty_like(zeta)
    small = np.abs(zeta) <= switch_threshold(m)
    if np.any(small):
        result[small] = _shifted_series(zeta[small], m)
    if np.any(~small):
        result[~small] = _closed_form(zeta[~small], m)
    return _as_output(result.reshape(shape), scalar)


def _closed_form(zeta: np.ndarray, m: int) -> np.ndarray:
    return math.factorial(m) * _subtracted_remainder(zeta, m) / zeta ** m


def kernel_series(zeta: ComplexLike, m: int) -> np.ndarray:
    """Series branch of K_m as a function of zeta = z conj(w), at any |zeta|."""
    values = np.atleast_1d(np.asarray(zeta, dtype=complex))
    return _shifted_series(values.ravel(), m).reshape(values.shape)


def kernel_closed_form(zeta: ComplexLike, m: int) -> np.ndarray:
    """Closed-form branch m! (e^zeta - p_m(zeta)) / zeta^m; zeta must be non-zero."""
    values = np.atleast_1d(np.asarray(zeta, dtype=complex))
    if np.any(values == 0):
        raise DomainError("The closed form is singular at zeta = 0", parameter="zeta", value=0)
    return _closed_form(values.ravel(), m).reshape(values.shape)


def log_abs_kernel(z: ComplexLike, w: ComplexLike, m: int) -> np.ndarray:
    """
    log |K_m(z, w)| without overflow for large |z conj(w)|.

    Zeros of the kernel give -inf.
    """
    m = kernel_order(m)
    zeta = np.asarray(z, dtype=complex) * np.conj(np.asarray(w, dtype=complex))
    shape = zeta.shape
    zeta = np.atleast_1d(zeta).ravel()
    result = np.empty(zeta.shape, dtype=float)

    moderate = zeta.real <= 600.0
    with np.errstate(divide="ignore"):
        if np.any(moderate):
            result[moderate] = np.log(np.abs(kernel(zeta[moderate], 1.0, m)))
        if np.any(~moderate):
            # e^zeta (m!/zeta^m) (1 - e^{-zeta} p_m(zeta))
            large = zeta[~moderate]
            correction = 1.0 - np.exp(-large) * _taylor_polynomial(large, m)
            result[~moderate] = (
                large.real
                + gammaln(m + 1)
                - m * np.log(np.abs(large))
                + np.log(np.abs(correction))
            )
    return result.reshape(shape)


def remainder_zeros(m: int, limit: float) -> np.ndarray:
    """
    Non-zero zeros of E_m with modulus at most ``limit``, sorted by modulus.

    They are the zeros of K_m(z, w) in zeta = z conj(w). E_0 has none and
    E_1 vanishes at 2 pi i k. For m >= 2 the zero on branch k >= 1 solves
    zeta = log p_m(zeta) + 2 pi i k, with the logarithm continued along
    (m - 1) arg zeta; fixed-point steps locate it and Newton steps with
    E_m' = E_{m-1} polish it. Zeros come in conjugate pairs.
    """
    m = kernel_order(m)
    if m == 0 or not limit > 0:
        return np.empty(0, dtype=complex)

    branches = np.arange(1, int(limit / (2.0 * np.pi)) + 3)
    zeta = 2j * np.pi * branches
    if m >= 2:
        for _ in range(FIXED_POINT_STEPS):
            section = _taylor_polynomial(zeta, m)
            phase = np.angle(section)
            phase = phase + 2.0 * np.pi * np.round(((m - 1) * np.angle(zeta) - phase) / (2.0 * np.pi))
            zeta = np.log(np.abs(section)) + 1j * (phase + 2.0 * np.pi * branches)
        for _ in range(NEWTON_STEPS):
            zeta = zeta - exp_remainder(zeta, m) / exp_remainder(zeta, m - 1)

    found: List[complex] = []
    for root in zeta[np.isfinite(zeta) & (np.abs(zeta) <= limit)]:
        if all(abs(root - other) > 1e-8 * abs(root) for other in found):
            found.append(complex(root))
    roots = np.array(found + [r.conjugate() for r in found], dtype=complex)
    return roots[np.lexsort((roots.imag, np.abs(roots)))]


def kernel_polynomial(w: complex, m: int, degree: int) -> EntireFunction:
    """K_m(., w) truncated to a polynomial of the given degree in z."""
    m = kernel_order(m)
    if degree < 0:
        raise DomainError("Degree must be non-negative", parameter="degree", value=degree)
    k = np.arange(degree + 1)
    scale = np.exp(gammaln(m + 1) - gammaln(k + m + 1))
    return EntireFunction(coeffs=scale * np.conj(complex(w)) ** k)


def basis(n: int, m: int, degree_cap: int = DEFAULT_DEGREE_CAP) -> EntireFunction:
    """
    Orthonormal basis element e_n = sqrt(m!/(n+m)!) z^n of F^{2,m}.

    Raises:
        DegreeRangeError: If n + m exceeds the degree cap
    """
    m = kernel_order(m)
    if n < 0:
        raise DomainError("Index must be non-negative", parameter="n", value=n, rule="n >= 0")
    if n + m > degree_cap:
        raise DegreeRangeError(
            "Basis index exceeds the degree cap", limit=degree_cap, requested=n + m
        )
    scale = 1.0
    for j in range(1, n + 1):
        scale /= m + j
    return EntireFunction.monomial(n, math.sqrt(scale))


def _lemma_log_terms(s: float, x: float, count: int) -> np.ndarray:
    n = np.arange(count, dtype=float)
    return s * (math.log(x) - np.log1p(n)) + n * math.log(x) - gammaln(n + 1)


def lemma_series(s: float, x: float, tolerance: float = LEMMA_SERIES_TOLERANCE) -> float:
    """
    S(s, x) = sum_n (x/(n+1))^s x^n/n! with certified truncation.

    Summation stops at the first N with N + 2 > x for which the geometric
    majorant a_{N+1}/(1-q), q = ((N+3)/(N+2))^{max(-s,0)} x/(N+2), is below
    ``tolerance * e^x``. The successive term ratios decrease in n for every
    real s, so q bounds all later ratios.

    Raises:
        DomainError: If x < 0, or x = 0 with s < 0
    """
    if not math.isfinite(s):
        raise DomainError("s must be finite", parameter="s", value=s)
    if x < 0 or not math.isfinite(x):
        raise DomainError("x must be finite and non-negative", parameter="x", value=x)
    if x == 0:
        if s < 0:
            raise DomainError(
                "S(s, 0) is undefined for s < 0",
                parameter="s",
                value=s,
                rule="x = 0 requires s >= 0"
            )
        return 1.0 if s == 0 else 0.0

    count = int(x + 10 * math.sqrt(x) + 60)
    log_bound = math.log(tolerance) + x
    while True:
        log_terms = _lemma_log_terms(s, x, count + 1)
        for n_cut in range(int(max(x - 2, 0)), count):
            ratio = ((n_cut + 3) / (n_cut + 2)) ** max(-s, 0.0) * x / (n_cut + 2)
            if ratio >= 1:
                continue
            if log_terms[n_cut + 1] - math.log1p(-ratio) < log_bound:
                return math.fsum(np.exp(log_terms[:n_cut + 1]))
        count *= 2
