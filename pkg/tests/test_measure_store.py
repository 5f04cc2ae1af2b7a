"""
Tests for the measure file parsers and the measure store.

This module tests text and JSON parsing, file loading and the
directory-backed MeasureStore defined in focklab/db/measure_store.py.
"""

import json
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

from focklab.db import (
    MeasureStore,
    dump_measure,
    load_measure_file,
    parse_measure_json,
    parse_measure_text,
)
from focklab.models import DiscreteMeasure
from focklab.utils.exceptions import FockLabError, MeasureParseError, ResourceNotFoundError

REPO_MEASURES = Path(__file__).resolve().parent.parent / "measures"


@pytest.fixture
def sample_measure():
    """Three atoms with awkward decimal expansions."""
    return DiscreteMeasure.from_arrays(
        [0.1 + 0.2j, -3.0, 1e-7j], [1.0 / 3.0, 2.5, 7e12], name="sample"
    )


class TestParseMeasureText:
    """Test cases for the text format."""

    def test_basic_parse(self):
        """Test comments and blank lines are skipped."""
        text = "# header\n\n0 0 1\n  1.5 -2 0.25  \n# trailing\n"

        mu = parse_measure_text(text, name="mu")

        assert len(mu) == 2
        assert mu.name == "mu"
        np.testing.assert_array_equal(mu.positions, [0j, 1.5 - 2j])
        np.testing.assert_array_equal(mu.masses, [1.0, 0.25])

    def test_empty_text(self):
        """Test a file of comments gives the empty measure."""
        assert parse_measure_text("# nothing\n").is_empty

    def test_wrong_field_count(self):
        """Test a line with two fields reports its line number."""
        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_text("0 0 1\n# ok\n1 2\n", path="mu.txt")

        assert exc_info.value.line_number == 3
        assert exc_info.value.context == {"path": "mu.txt", "line": 3}
        assert "Expected 3 fields" in exc_info.value.message

    def test_non_numeric_field(self):
        """Test a non-numeric field is reported with its cause."""
        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_text("0 zero 1\n")

        assert exc_info.value.line_number == 1
        assert isinstance(exc_info.value.cause, ValueError)

    @pytest.mark.parametrize("line", ["0 0 0", "0 0 -1", "0 0 nan", "inf 0 1"])
    def test_invalid_atom(self, line):
        """Test non-positive masses and non-finite values are rejected."""
        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_text(f"1 1 1\n{line}\n")

        assert exc_info.value.line_number == 2
        assert exc_info.value.message.startswith("Invalid atom")


class TestParseMeasureJson:
    """Test cases for the JSON format."""

    def test_basic_parse(self):
        """Test atoms and the embedded name."""
        text = json.dumps({"name": "pair", "atoms": [{"x": 1, "y": 0, "mass": 2}, {"x": 0, "y": -1, "mass": 0.5}]})

        mu = parse_measure_json(text)

        assert mu.name == "pair"
        assert mu.total_mass == 2.5

    def test_explicit_name_wins(self):
        text = json.dumps({"name": "pair", "atoms": []})

        assert parse_measure_json(text, name="other").name == "other"

    def test_invalid_json(self):
        """Test syntax errors carry the JSON line number."""
        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_json('{\n"atoms": [\n}')

        assert exc_info.value.line_number == 3

    @pytest.mark.parametrize("text", ["[]", '{"name": "x"}', '{"atoms": {}}'])
    def test_wrong_shape(self, text):
        """Test documents without an atoms list are rejected."""
        with pytest.raises(MeasureParseError):
            parse_measure_json(text)

    def test_missing_key(self):
        """Test an atom without mass reports its 1-based index."""
        text = json.dumps({"atoms": [{"x": 0, "y": 0, "mass": 1}, {"x": 0, "y": 0}]})

        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_json(text)

        assert exc_info.value.line_number == 2

    def test_non_numeric_field(self):
        """Test strings and booleans are not numbers."""
        for bad in ("1", True):
            text = json.dumps({"atoms": [{"x": bad, "y": 0, "mass": 1}]})
            with pytest.raises(MeasureParseError):
                parse_measure_json(text)

    def test_invalid_mass(self):
        text = json.dumps({"atoms": [{"x": 0, "y": 0, "mass": -2}]})

        with pytest.raises(MeasureParseError) as exc_info:
            parse_measure_json(text)

        assert exc_info.value.line_number == 1


class TestLoadMeasureFile:
    """Test cases for load_measure_file."""

    def test_text_file_named_after_stem(self, tmp_path):
        """Test text files take their name from the file stem."""
        path = tmp_path / "cluster.txt"
        path.write_text("0 0 1\n1 1 2\n", encoding="utf-8")

        mu = load_measure_file(path)

        assert mu.name == "cluster"
        assert mu.total_mass == 3.0

    def test_json_file_without_name(self, tmp_path):
        """Test unnamed JSON measures fall back to the stem."""
        path = tmp_path / "blob.json"
        path.write_text(json.dumps({"atoms": [{"x": 0, "y": 0, "mass": 1}]}), encoding="utf-8")

        assert load_measure_file(path).name == "blob"

    def test_explicit_format(self, tmp_path):
        """Test the format overrides the suffix."""
        path = tmp_path / "atoms.data"
        path.write_text("0 0 4\n", encoding="utf-8")

        assert load_measure_file(path, format="text").total_mass == 4.0

    def test_unknown_suffix(self, tmp_path):
        """Test an unknown suffix without a format is rejected."""
        path = tmp_path / "atoms.data"
        path.write_text("0 0 4\n", encoding="utf-8")

        with pytest.raises(MeasureParseError):
            load_measure_file(path)

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "atoms.txt"
        path.write_text("0 0 4\n", encoding="utf-8")

        with pytest.raises(MeasureParseError):
            load_measure_file(path, format="csv")

    def test_missing_file(self, tmp_path):
        """Test a missing file raises ResourceNotFoundError."""
        with pytest.raises(ResourceNotFoundError):
            load_measure_file(tmp_path / "absent.txt")

    def test_parse_error_names_path(self, tmp_path):
        """Test parse errors carry the file path."""
        path = tmp_path / "bad.txt"
        path.write_text("0 0 1\n0 0\n", encoding="utf-8")

        with pytest.raises(MeasureParseError) as exc_info:
            load_measure_file(path)

        assert exc_info.value.context["path"] == str(path)
        assert exc_info.value.line_number == 2

    def test_shipped_measures(self):
        """Test the measures shipped with the repository load."""
        atom = load_measure_file(REPO_MEASURES / "atom.txt")
        lattice = load_measure_file(REPO_MEASURES / "lattice.txt")
        exponential = load_measure_file(REPO_MEASURES / "exponential.json")

        assert atom.positions.tolist() == [0j]
        assert len(lattice) == 317
        assert exponential.name == "exponential"
        assert len(exponential) == 8


class TestDumpMeasure:
    """Test cases for dump_measure."""

    def test_text_round_trip(self, sample_measure):
        """Test the text form reproduces every float exactly."""
        text = dump_measure(sample_measure, "text")

        assert text.startswith("# sample\n")
        restored = parse_measure_text(text, name="sample")
        assert restored.model_dump() == sample_measure.model_dump()

    def test_json_is_sorted(self, sample_measure):
        """Test JSON output is deterministic and parses back."""
        text = dump_measure(sample_measure)

        assert text == dump_measure(sample_measure)
        assert list(json.loads(text)) == ["atoms", "name"]
        assert parse_measure_json(text).model_dump() == sample_measure.model_dump()

    def test_unknown_format(self, sample_measure):
        with pytest.raises(MeasureParseError):
            dump_measure(sample_measure, "yaml")


class TestMeasureStore:
    """Test cases for MeasureStore class."""

    @pytest.fixture
    def store(self, tmp_path):
        """Store rooted in a temporary directory."""
        return MeasureStore(tmp_path / "store")

    def test_initialization_creates_directory(self, tmp_path):
        """Test the directory is created on demand."""
        store = MeasureStore(tmp_path / "nested" / "store")

        assert store.directory.is_dir()
        assert store.list_measures() == []

    def test_save_and_load(self, store, sample_measure):
        """Test a saved measure loads back equal."""
        path = store.save(sample_measure)

        assert path.name == "sample.json"
        assert store.exists("sample")
        assert store.load("sample").model_dump() == sample_measure.model_dump()

    def test_save_under_other_name(self, store, sample_measure):
        store.save(sample_measure, name="copy")

        assert store.list_measures() == ["copy"]

    def test_list_is_sorted(self, store, sample_measure):
        """Test names come back sorted."""
        for name in ("zeta", "alpha", "mid"):
            store.save(sample_measure, name=name)

        assert store.list_measures() == ["alpha", "mid", "zeta"]

    def test_load_missing(self, store):
        """Test loading an unknown name raises ResourceNotFoundError."""
        assert not store.exists("ghost")
        with pytest.raises(ResourceNotFoundError) as exc_info:
            store.load("ghost")
        assert exc_info.value.context["name"] == "ghost"

    def test_load_unnamed_file(self, store):
        """Test a stored file without a name takes the store key."""
        (store.directory / "raw.json").write_text(
            json.dumps({"atoms": [{"x": 0, "y": 0, "mass": 1}]}), encoding="utf-8"
        )

        assert store.load("raw").name == "raw"

    def test_save_unnamed_measure(self, store):
        """Test a measure without a name cannot be stored."""
        with pytest.raises(FockLabError):
            store.save(DiscreteMeasure())

    def test_save_write_failure(self, store, sample_measure):
        """Test write errors are wrapped."""
        with patch.object(Path, "write_text", side_effect=OSError("disk full")):
            with pytest.raises(FockLabError) as exc_info:
                store.save(sample_measure)

        assert isinstance(exc_info.value.cause, OSError)
        assert exc_info.value.context["name"] == "sample"
