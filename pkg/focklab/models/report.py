"""
Report models for bound checks, Carleson analyses and verification suites.

Reports are plain data: every numerical module returns them and the
publishers serialize them without further computation. Complex numbers
are stored as ``(real, imag)`` pairs so machine reports stay plain JSON.
"""

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator


def complex_pair(z: complex) -> Tuple[float, float]:
    """Convert a complex number to the (real, imag) pair stored in reports."""
    z = complex(z)
    return (float(z.real), float(z.imag))


class BoundReport(BaseModel):
    """Record of one empirical bound check over a parameter grid."""

    model_config = ConfigDict(populate_by_name=True)

    inequality_id: str = Field(..., description="Identifier of the estimate checked")
    grid: Dict[str, Any] = Field(default_factory=dict, description="Swept parameters")
    ratio_min: Optional[float] = Field(None, description="Smallest observed ratio")
    ratio_max: Optional[float] = Field(None, description="Largest observed ratio")
    argmin: Dict[str, Any] = Field(default_factory=dict, description="Parameters at the minimum")
    argmax: Dict[str, Any] = Field(default_factory=dict, description="Parameters at the maximum")
    passed: bool = Field(..., alias="pass", description="Ratios finite and within the configured band")
    evaluated: int = Field(default=0, ge=0, description="Grid points contributing to the extrema")
    excluded: int = Field(default=0, ge=0, description="Removable 0/0 or out-of-domain points skipped")
    seed: Optional[int] = Field(None, description="Seed of the random family, when one is used")
    resolution: Dict[str, Any] = Field(default_factory=dict, description="Quadrature resolution used")
    extras: Dict[str, Any] = Field(default_factory=dict, description="Check-specific observations")

    @model_validator(mode='after')
    def validate_extrema(self) -> "BoundReport":
        """Validate ordering of the extrema and the meaning of a pass."""
        if self.ratio_min is not None and self.ratio_max is not None:
            if self.ratio_min > self.ratio_max:
                raise ValueError("ratio_min must not exceed ratio_max")
        if self.passed:
            if self.ratio_min is None or self.ratio_max is None:
                raise ValueError("a passing report needs observed extrema")
            if not (math.isfinite(self.ratio_min) and math.isfinite(self.ratio_max)):
                raise ValueError("a passing report needs finite extrema")
        return self


class ShellProfile(BaseModel):
    """Maximum of a per-center quantity over one annulus inner <= |a| <= outer."""

    inner: float = Field(..., ge=0, description="Inner shell radius")
    outer: float = Field(..., ge=0, description="Outer shell radius")
    max_value: Optional[float] = Field(None, description="Shell maximum, None when the shell holds no center")
    centers: int = Field(default=0, ge=0, description="Centers falling in the shell")


class CarlesonVerdict(str, Enum):
    """Window-qualified outcome of a Carleson test."""

    CARLESON = "carleson"
    NOT_CARLESON = "not-carleson-within-window"
    VANISHING = "vanishing"

    @property
    def is_bounded(self) -> bool:
        return self is not CarlesonVerdict.NOT_CARLESON


class VanishingProfile(BaseModel):
    """Shell maxima of the Carleson ratio and the verdict they support."""

    shells: List[ShellProfile] = Field(default_factory=list, description="Per-shell maxima of mu(B(a,r))/(1+|a|)^{mp}")
    verdict: CarlesonVerdict = Field(..., description="Verdict of the shell profile")
    growth_factor: float = Field(..., description="Outer/inner tolerance behind the verdict")
    vanishing_fraction: float = Field(..., description="Last-shell fraction behind a vanishing verdict")

    @property
    def is_vanishing(self) -> bool:
        return self.verdict is CarlesonVerdict.VANISHING


class CarlesonReport(BaseModel):
    """
    Outcome of the geometric and embedding tests for one measure.

    The geometric fields are always present. Embedding fields stay None
    until the embedding estimate has been run.
    """

    measure_name: Optional[str] = Field(None, description="Label of the analysed measure")
    p: float = Field(..., gt=0, description="Integrability exponent")
    m: int = Field(..., ge=0, description="Sobolev order")
    sup_ratio: float = Field(..., ge=0, description="sup over lattice centers of mu(B(a,r))/(1+|a|)^{mp}")
    argmax_center: Tuple[float, float] = Field(..., description="Lattice center attaining sup_ratio")
    lattice_spacing: float = Field(..., gt=0, description="Spacing of the center lattice")
    radius: float = Field(..., gt=0, description="Disk radius r")
    window: float = Field(..., gt=0, description="Largest |a| swept")
    centers_swept: int = Field(default=0, ge=0, description="Lattice centers evaluated")
    verdict: CarlesonVerdict = Field(..., description="Geometric verdict")
    growth_factor: float = Field(..., description="Outer/inner tolerance behind the verdict")
    vanishing_fraction: float = Field(..., description="Last-shell fraction behind a vanishing verdict")
    shells: List[ShellProfile] = Field(default_factory=list, description="Geometric shell profile")

    embedding_estimate: Optional[float] = Field(None, ge=0, description="Max over centers of the normalized embedding integral")
    embedding_verdict: Optional[CarlesonVerdict] = Field(None, description="Verdict from the embedding profile")
    embedding_shells: List[ShellProfile] = Field(default_factory=list, description="Embedding shell profile")
    test_centers: int = Field(default=0, ge=0, description="Test-function centers evaluated")
    skipped_centers: int = Field(default=0, ge=0, description="Centers whose test-function norm under- or overflowed")
    kernel_decay: List[Tuple[float, float]] = Field(
        default_factory=list, description="(|a|, embedding value) along the positive axis"
    )
    vanishing: Optional[VanishingProfile] = Field(None, description="Vanishing profile over the verdict shells")

    @computed_field
    @property
    def comparability(self) -> Optional[float]:
        """embedding_estimate / sup_ratio, defined when both are known and sup_ratio > 0."""
        if self.embedding_estimate is None or self.sup_ratio <= 0:
            return None
        return self.embedding_estimate / self.sup_ratio

    @computed_field
    @property
    def verdicts_agree(self) -> Optional[bool]:
        """Whether geometric and embedding verdicts agree on boundedness."""
        if self.embedding_verdict is None:
            return None
        return self.verdict.is_bounded == self.embedding_verdict.is_bounded

    @property
    def is_vanishing(self) -> bool:
        return self.verdict is CarlesonVerdict.VANISHING


class CheckRecord(BaseModel):
    """Single assertion inside a verification suite."""

    name: str = Field(..., description="Check identifier")
    observed: Optional[float] = Field(None, description="Observed value or error")
    expected: Optional[float] = Field(None, description="Expected value, when there is one")
    tolerance: Optional[float] = Field(None, description="Allowed deviation")
    passed: bool = Field(..., description="Outcome")
    detail: str = Field(default="", description="Free-form explanation")


class SuiteReport(BaseModel):
    """Everything one ``verify`` run produced."""

    suite: str = Field(..., description="Suite name")
    seed: int = Field(..., description="Seed used for random families")
    resolution: Dict[str, Any] = Field(default_factory=dict, description="Quadrature resolution used")
    checks: List[CheckRecord] = Field(default_factory=list)
    bounds: List[BoundReport] = Field(default_factory=list)
    carleson: List[CarlesonReport] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        """True iff every check and every bound report passed."""
        return all(c.passed for c in self.checks) and all(b.passed for b in self.bounds)

    def failures(self) -> List[str]:
        """Names of the failing records, checks first."""
        names = [c.name for c in self.checks if not c.passed]
        names.extend(b.inequality_id for b in self.bounds if not b.passed)
        return names

    def merge(self, other: "SuiteReport") -> "SuiteReport":
        """Concatenate another report's records into a new report."""
        return SuiteReport(
            suite=self.suite,
            seed=self.seed,
            resolution=self.resolution,
            checks=self.checks + other.checks,
            bounds=self.bounds + other.bounds,
            carleson=self.carleson + other.carleson,
        )
