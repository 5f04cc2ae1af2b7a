"""
Entire functions represented by finite Taylor coefficient sequences.

``EntireFunction`` holds the coefficients c_0, ..., c_d of a polynomial
truncation f(z) = sum_n c_n z^n. Instances are immutable; every operation
returns a new function. The zero function has degree ``ZERO_DEGREE``.
"""

import math
from typing import Any, List, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from focklab.utils import DegreeRangeError, DomainError

ZERO_DEGREE = -1
DEFAULT_DEGREE_CAP = 64

# (n + m)! / n! stays finite in double precision up to this index
MAX_DEGREE = 170

ComplexLike = Union[complex, float, int, np.ndarray]


class EntireFunction(BaseModel):
    """Polynomial truncation of an entire function."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coeffs: np.ndarray = Field(
        default_factory=lambda: np.zeros(0, dtype=complex),
        validate_default=True,
        description="coeffs[n] is the coefficient of z^n; trailing zeros are trimmed"
    )

    @field_validator('coeffs', mode='before')
    @classmethod
    def validate_coeffs(cls, v: Any) -> np.ndarray:
        """Convert to a read-only complex array without trailing zeros."""
        values = np.array(v, dtype=complex).ravel()
        if not np.all(np.isfinite(values)):
            raise ValueError("coefficients must be finite")
        nonzero = np.flatnonzero(values)
        values = values[:nonzero[-1] + 1] if nonzero.size else values[:0]
        if values.size - 1 > MAX_DEGREE:
            raise ValueError(f"degree {values.size - 1} exceeds {MAX_DEGREE}")
        values.setflags(write=False)
        return values

    @classmethod
    def zero(cls) -> "EntireFunction":
        return cls(coeffs=[])

    @classmethod
    def constant(cls, value: complex) -> "EntireFunction":
        return cls(coeffs=[value])

    @classmethod
    def monomial(cls, n: int, scale: complex = 1.0) -> "EntireFunction":
        """scale * z^n."""
        if n < 0:
            raise DomainError("Monomial degree must be non-negative", parameter="n", value=n)
        coeffs = np.zeros(n + 1, dtype=complex)
        coeffs[n] = scale
        return cls(coeffs=coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1 if self.coeffs.size else ZERO_DEGREE

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 0

    def coefficient(self, n: int) -> complex:
        """Coefficient of z^n, 0 beyond the degree."""
        if n < 0 or n > self.degree:
            return 0j
        return complex(self.coeffs[n])

    def taylor_coefficient_at_zero(self, k: int) -> complex:
        """f^{(k)}(0) = k! c_k."""
        return math.factorial(k) * self.coefficient(k)

    def __call__(self, z: ComplexLike) -> ComplexLike:
        return evaluate(self, z)

    def __add__(self, other: "EntireFunction") -> "EntireFunction":
        if not isinstance(other, EntireFunction):
            return NotImplemented
        size = max(self.coeffs.size, other.coeffs.size)
        total = np.zeros(size, dtype=complex)
        total[:self.coeffs.size] += self.coeffs
        total[:other.coeffs.size] += other.coeffs
        return EntireFunction(coeffs=total)

    def __neg__(self) -> "EntireFunction":
        return EntireFunction(coeffs=-self.coeffs)

    def __sub__(self, other: "EntireFunction") -> "EntireFunction":
        if not isinstance(other, EntireFunction):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar: complex) -> "EntireFunction":
        if isinstance(scalar, EntireFunction) or not np.isscalar(scalar):
            return NotImplemented
        return EntireFunction(coeffs=self.coeffs * scalar)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EntireFunction):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self) -> int:
        return hash(self.coeffs.tobytes())

    def __repr__(self) -> str:
        return f"EntireFunction(degree={self.degree}, coeffs={self.coeffs.tolist()})"


def evaluate(f: EntireFunction, z: ComplexLike) -> ComplexLike:
    """
    Evaluate f at z by Horner's rule, highest degree first.

    Accepts a scalar or an array of points; returns the same shape.
    """
    points = np.asarray(z, dtype=complex)
    result = np.zeros_like(points)
    for c in f.coeffs[::-1]:
        result = result * points + c
    if points.ndim == 0:
        return complex(result)
    return result


def derivative(f: EntireFunction, m: int) -> EntireFunction:
    """
    m-th derivative: coefficient n becomes c_{n+m} (n+m)!/n!.

    The factorial ratio is a running product, never a quotient of factorials.
    """
    if m < 0:
        raise DomainError("Derivative order must be non-negative", parameter="m", value=m)
    if m == 0:
        return f
    size = f.coeffs.size - m
    if size <= 0:
        return EntireFunction.zero()
    n = np.arange(size, dtype=float)
    factors = np.ones(size)
    for j in range(1, m + 1):
        factors *= n + j
    return EntireFunction(coeffs=f.coeffs[m:] * factors)


def monomial_shift(
    f: EntireFunction,
    m: int,
    degree_cap: int = DEFAULT_DEGREE_CAP
) -> EntireFunction:
    """z^m f(z)."""
    if m < 0:
        raise DomainError("Shift must be non-negative", parameter="m", value=m)
    if f.is_zero:
        return f
    if f.degree + m > degree_cap:
        raise DegreeRangeError(
            "Shifted degree exceeds the degree cap",
            limit=degree_cap,
            requested=f.degree + m
        )
    return EntireFunction(coeffs=np.concatenate([np.zeros(m, dtype=complex), f.coeffs]))


def taylor_section(f: EntireFunction, m: int) -> EntireFunction:
    """Truncation of f to degree <= m - 1; m = 0 gives the zero function."""
    if m < 0:
        raise DomainError("Section order must be non-negative", parameter="m", value=m)
    return EntireFunction(coeffs=f.coeffs[:m])


def random_polynomials(
    count: int,
    degree: int,
    seed: int,
    degree_cap: int = DEFAULT_DEGREE_CAP
) -> List[EntireFunction]:
    """
    Seeded family of polynomials with standard complex Gaussian coefficients.

    Each coefficient has independent real and imaginary parts of variance 1/2.
    """
    if degree > degree_cap:
        raise DegreeRangeError(
            "Family degree exceeds the degree cap", limit=degree_cap, requested=degree
        )
    if count < 0 or degree < 0:
        raise DomainError("count and degree must be non-negative", parameter="count", value=count)
    rng = np.random.default_rng(seed)
    parts = rng.standard_normal((count, degree + 1, 2)) / math.sqrt(2.0)
    coeffs = parts[..., 0] + 1j * parts[..., 1]
    return [EntireFunction(coeffs=row) for row in coeffs]
