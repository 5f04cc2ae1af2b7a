"""
Data models for the Fock-Sobolev laboratory.

This module contains Pydantic models for space parameters, discrete
measures and the reports produced by checks and suites.
"""

from focklab.models.params import SpaceParams, KernelParams, DiskRegion
from focklab.models.measure import Atom, DiscreteMeasure
from focklab.models.report import (
    BoundReport,
    CarlesonReport,
    CarlesonVerdict,
    CheckRecord,
    ShellProfile,
    SuiteReport,
    VanishingProfile,
    complex_pair,
)

__all__ = [
    "SpaceParams",
    "KernelParams",
    "DiskRegion",
    "Atom",
    "DiscreteMeasure",
    "BoundReport",
    "CarlesonReport",
    "CarlesonVerdict",
    "CheckRecord",
    "ShellProfile",
    "VanishingProfile",
    "SuiteReport",
    "complex_pair",
]
