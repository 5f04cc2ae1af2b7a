"""
Tests for discrete measure models.

This module tests the Atom and DiscreteMeasure models defined in
focklab/models/measure.py.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from focklab.models import Atom, DiscreteMeasure


@pytest.fixture
def measure():
    """Two atoms with distinct masses."""
    return DiscreteMeasure.from_arrays([3.0 + 4.0j, 1.0], [2.0, 0.5], name="pair")


class TestAtom:
    """Test cases for Atom model."""

    def test_position(self):
        atom = Atom(x=1.5, y=-2.0, mass=3.0)

        assert atom.position == 1.5 - 2.0j

    @pytest.mark.parametrize("mass", [0.0, -1.0, math.inf, math.nan])
    def test_invalid_mass(self, mass):
        """Test masses must be finite and positive."""
        with pytest.raises(ValidationError):
            Atom(x=0.0, y=0.0, mass=mass)

    def test_invalid_coordinate(self):
        """Test coordinates must be finite."""
        with pytest.raises(ValidationError):
            Atom(x=math.inf, y=0.0, mass=1.0)


class TestDiscreteMeasure:
    """Test cases for DiscreteMeasure model."""

    def test_empty_measure(self):
        """Test the empty measure."""
        mu = DiscreteMeasure()

        assert mu.is_empty
        assert len(mu) == 0
        assert mu.total_mass == 0.0
        assert mu.support_radius == 0.0
        assert mu.positions.shape == (0,)

    def test_from_arrays(self, measure):
        """Test arrays mirror the atoms."""
        assert len(measure) == 2
        assert measure.name == "pair"
        np.testing.assert_array_equal(measure.positions, [3.0 + 4.0j, 1.0 + 0.0j])
        np.testing.assert_array_equal(measure.masses, [2.0, 0.5])
        assert measure.total_mass == 2.5
        assert measure.support_radius == 5.0

    def test_from_arrays_length_mismatch(self):
        """Test parallel sequences must have equal length."""
        with pytest.raises(ValueError):
            DiscreteMeasure.from_arrays([0j, 1.0], [1.0])

    def test_arrays_are_read_only(self, measure):
        """Test cached arrays cannot be modified in place."""
        with pytest.raises(ValueError):
            measure.masses[0] = 10.0

    def test_name_is_stripped(self):
        assert DiscreteMeasure(name="  lattice ").name == "lattice"

    def test_blank_name(self):
        """Test a blank name is rejected."""
        with pytest.raises(ValidationError):
            DiscreteMeasure(name="   ")

    def test_scaled(self, measure):
        """Test scaling multiplies every mass and keeps positions."""
        doubled = measure.scaled(2.0)

        np.testing.assert_array_equal(doubled.masses, [4.0, 1.0])
        np.testing.assert_array_equal(doubled.positions, measure.positions)
        assert doubled.name == "pair"
        assert measure.total_mass == 2.5

    def test_scaled_rejects_non_positive(self, measure):
        with pytest.raises(ValueError):
            measure.scaled(0.0)

    def test_translated(self, measure):
        """Test translation shifts positions and keeps masses."""
        moved = measure.translated(-1.0, name="moved")

        np.testing.assert_array_equal(moved.positions, [2.0 + 4.0j, 0j])
        np.testing.assert_array_equal(moved.masses, measure.masses)
        assert moved.name == "moved"
