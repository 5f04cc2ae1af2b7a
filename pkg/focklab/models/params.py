"""
Parameter models for Fock-Sobolev spaces, kernels and disks.
"""

import math

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SpaceParams(BaseModel):
    """The pair (p, m) selecting the space F^{p,m}."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(..., description="Integrability exponent, 0 < p <= inf")
    m: int = Field(default=0, ge=0, description="Sobolev order")

    @field_validator('p')
    @classmethod
    def validate_p(cls, v: float) -> float:
        """Validate p is positive (infinity allowed)."""
        if math.isnan(v) or v <= 0:
            raise ValueError("p must be positive")
        return float(v)

    @property
    def is_sup(self) -> bool:
        """True for the sup-norm space F^{inf,m}."""
        return math.isinf(self.p)

    @property
    def gaussian_rate(self) -> float:
        """Gaussian rate p/2 of the norm integral."""
        return self.p / 2.0

    @property
    def growth_exponent(self) -> float:
        """Exponent mp of the Carleson growth bound (1+|a|)^{mp}."""
        return self.m * self.p

    def label(self) -> str:
        p_text = "inf" if self.is_sup else f"{self.p:g}"
        return f"p={p_text}, m={self.m}"


class KernelParams(BaseModel):
    """Sobolev order selecting the kernel K_m and the Taylor section p_m."""

    model_config = ConfigDict(frozen=True)

    m: int = Field(default=0, ge=0, description="Sobolev order")


class DiskRegion(BaseModel):
    """Open Euclidean disk B(center, radius)."""

    model_config = ConfigDict(frozen=True)

    center: complex = Field(default=0j, description="Disk center")
    radius: float = Field(..., gt=0, description="Disk radius")

    @field_validator('radius')
    @classmethod
    def validate_radius(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("radius must be finite")
        return v

    @property
    def area(self) -> float:
        return math.pi * self.radius ** 2
