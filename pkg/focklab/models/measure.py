"""
Discrete measures: finite lists of weighted atoms in the plane.

Continuous densities are not represented; callers sample them into atoms.
"""

import math
from functools import cached_property
from typing import Iterable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class Atom(BaseModel):
    """A point mass at x + iy."""

    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Real part of the position")
    y: float = Field(..., description="Imaginary part of the position")
    mass: float = Field(..., description="Positive mass")

    @field_validator('x', 'y')
    @classmethod
    def validate_coordinate(cls, v: float) -> float:
        """Validate coordinates are finite."""
        if not math.isfinite(v):
            raise ValueError("coordinates must be finite")
        return v

    @field_validator('mass')
    @classmethod
    def validate_mass(cls, v: float) -> float:
        """Validate mass is finite and strictly positive."""
        if not math.isfinite(v) or v <= 0:
            raise ValueError("mass must be finite and positive")
        return v

    @property
    def position(self) -> complex:
        return complex(self.x, self.y)


class DiscreteMeasure(BaseModel):
    """
    Finite positive measure sum_j mass_j * delta_{position_j}.

    Positions and masses are also exposed as read-only numpy arrays for
    vectorized disk counting and atom sums.
    """

    model_config = ConfigDict(frozen=True)

    atoms: List[Atom] = Field(default_factory=list, description="Weighted atoms")
    name: Optional[str] = Field(default=None, description="Label used in reports")

    @field_validator('name')
    @classmethod
    def validate_name(cls, v: Optional[str]) -> Optional[str]:
        if v is None:
            return v
        if not v.strip():
            raise ValueError("Measure name cannot be empty")
        return v.strip()

    @classmethod
    def from_arrays(
        cls,
        positions: Iterable[complex],
        masses: Iterable[float],
        name: Optional[str] = None
    ) -> "DiscreteMeasure":
        """Build a measure from parallel position and mass sequences."""
        positions = np.asarray(list(positions), dtype=complex)
        masses = np.asarray(list(masses), dtype=float)
        if positions.shape != masses.shape:
            raise ValueError("positions and masses must have the same length")
        atoms = [
            Atom(x=float(z.real), y=float(z.imag), mass=float(w))
            for z, w in zip(positions, masses)
        ]
        return cls(atoms=atoms, name=name)

    @cached_property
    def positions(self) -> np.ndarray:
        values = np.array([atom.position for atom in self.atoms], dtype=complex)
        values.setflags(write=False)
        return values

    @cached_property
    def masses(self) -> np.ndarray:
        values = np.array([atom.mass for atom in self.atoms], dtype=float)
        values.setflags(write=False)
        return values

    def __len__(self) -> int:
        return len(self.atoms)

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    @property
    def total_mass(self) -> float:
        return math.fsum(self.masses)

    @property
    def support_radius(self) -> float:
        """Largest |position| over the atoms; 0 for the empty measure."""
        if self.is_empty:
            return 0.0
        return float(np.max(np.abs(self.positions)))

    def scaled(self, factor: float, name: Optional[str] = None) -> "DiscreteMeasure":
        """Multiply every mass by ``factor`` > 0."""
        if not factor > 0:
            raise ValueError("scale factor must be positive")
        return DiscreteMeasure.from_arrays(
            self.positions, self.masses * factor, name=name or self.name
        )

    def translated(self, shift: complex, name: Optional[str] = None) -> "DiscreteMeasure":
        """Move every atom by ``shift``."""
        return DiscreteMeasure.from_arrays(
            self.positions + complex(shift), self.masses, name=name or self.name
        )
