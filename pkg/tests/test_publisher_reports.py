"""
Tests for the report publishers.

This module tests the JSON and text publishers and the publish_report
helper defined in focklab/publisher.
"""

import json
import math
from pathlib import Path
from unittest.mock import patch

import pytest

from focklab.models import (
    BoundReport,
    CarlesonReport,
    CarlesonVerdict,
    CheckRecord,
    ShellProfile,
    SuiteReport,
    VanishingProfile,
)
from focklab.publisher import (
    JsonReportPublisher,
    TextReportPublisher,
    format_number,
    publish_report,
)
from focklab.utils.exceptions import FockLabError


@pytest.fixture
def carleson_report():
    """Geometric and embedding results for a point mass."""
    return CarlesonReport(
        measure_name="atom",
        p=2.0,
        m=1,
        sup_ratio=1.0,
        argmax_center=(0.0, 0.0),
        lattice_spacing=0.5,
        radius=1.0,
        window=8.0,
        centers_swept=797,
        verdict=CarlesonVerdict.VANISHING,
        growth_factor=1.05,
        vanishing_fraction=0.5,
        shells=[
            ShellProfile(inner=0.0, outer=1.0, max_value=1.0, centers=5),
            ShellProfile(inner=1.0, outer=2.0, max_value=None, centers=0),
        ],
        embedding_estimate=1.0,
        embedding_verdict=CarlesonVerdict.VANISHING,
        test_centers=1,
        kernel_decay=[(0.0, 1.0), (2.0, 0.0183)],
    )


@pytest.fixture
def suite_report(carleson_report):
    """Suite with one failing check and one overflowing bound."""
    return SuiteReport(
        suite="kernel",
        seed=20100917,
        resolution={"radial_degree": 60, "angular_count": 128},
        checks=[
            CheckRecord(name="kernel_at_origin", observed=0.0, expected=0.0, tolerance=1e-12, passed=True),
            CheckRecord(name="series_agreement", observed=0.5, expected=0.0, tolerance=1e-10, passed=False,
                        detail="m=3"),
        ],
        bounds=[
            BoundReport(inequality_id="theorem3", ratio_min=1.0, ratio_max=math.inf, passed=False,
                        extras={"note": math.nan}),
        ],
        carleson=[carleson_report],
    )


class TestFormatNumber:
    """Test cases for format_number."""

    @pytest.mark.parametrize(
        "value, expected",
        [
            (None, "-"),
            (math.nan, "nan"),
            (math.inf, "inf"),
            (1.0, "1"),
            (0.1234567, "0.123457"),
            (1234567.0, "1.23457e+06"),
            (3, "3"),
        ],
    )
    def test_format(self, value, expected):
        assert format_number(value) == expected


class TestJsonReportPublisher:
    """Test cases for JsonReportPublisher class."""

    def test_render_is_strict_json(self, suite_report):
        """Test non-finite floats become strings."""
        data = json.loads(JsonReportPublisher().render(suite_report))

        assert data["passed"] is False
        assert data["bounds"][0]["ratio_max"] == "inf"
        assert data["bounds"][0]["pass"] is False
        assert data["bounds"][0]["extras"]["note"] == "nan"

    def test_render_is_deterministic(self, suite_report):
        """Test two renders are identical and keys are sorted."""
        publisher = JsonReportPublisher()
        first = publisher.render(suite_report)

        assert first == publisher.render(suite_report)
        assert list(json.loads(first)) == sorted(json.loads(first))

    def test_carleson_fields(self, carleson_report):
        """Test verdicts are written by value and computed fields are kept."""
        data = json.loads(JsonReportPublisher().render(carleson_report))

        assert data["verdict"] == "vanishing"
        assert data["comparability"] == 1.0
        assert data["verdicts_agree"] is True
        assert data["argmax_center"] == [0.0, 0.0]
        assert data["shells"][1]["max_value"] is None

    def test_publish_creates_parent(self, suite_report, tmp_path):
        path = JsonReportPublisher().publish(suite_report, tmp_path / "reports" / "run.json")

        assert path.exists()
        assert json.loads(path.read_text(encoding="utf-8"))["suite"] == "kernel"

    def test_publish_write_failure(self, suite_report, tmp_path):
        """Test OSError is wrapped in FockLabError."""
        with patch.object(Path, "write_text", side_effect=OSError("read-only")):
            with pytest.raises(FockLabError) as exc_info:
                JsonReportPublisher().publish(suite_report, tmp_path / "run.json")

        assert exc_info.value.context["path"].endswith("run.json")


class TestTextReportPublisher:
    """Test cases for TextReportPublisher class."""

    def test_suite_rendering(self, suite_report):
        """Test header, tables and failure list."""
        text = TextReportPublisher().render(suite_report)

        assert "Suite: kernel" in text
        assert "result: FAIL" in text
        assert "Resolution: angular_count=128, radial_degree=60" in text
        assert "Checks" in text
        assert "kernel_at_origin" in text
        assert "Bounds" in text
        assert "theorem3" in text
        assert "Failures: series_agreement, theorem3" in text

    def test_carleson_rendering(self, carleson_report):
        """Test the summary, shells and decay tables."""
        text = TextReportPublisher().render(carleson_report)

        assert "Carleson test: atom" in text
        assert "vanishing" in text
        assert "Geometric shells" in text
        assert "Kernel sequence decay" in text
        assert "Embedding shells" not in text
        assert "\x1b[" not in text

    def test_vanishing_profile_row(self, carleson_report):
        """Test the vanishing profile verdict appears once attached."""
        profile = VanishingProfile(
            shells=carleson_report.shells,
            verdict=CarlesonVerdict.CARLESON,
            growth_factor=1.05,
            vanishing_fraction=0.5,
        )
        text = TextReportPublisher().render(carleson_report.model_copy(update={"vanishing": profile}))

        row = next(line for line in text.splitlines() if "vanishing profile" in line)
        assert "carleson" in row

    def test_rendering_is_deterministic(self, carleson_report):
        publisher = TextReportPublisher()

        assert publisher.render(carleson_report) == publisher.render(carleson_report)

    def test_publish(self, carleson_report, tmp_path):
        path = TextReportPublisher().publish(carleson_report, tmp_path / "atom.txt")

        assert "Carleson test: atom" in path.read_text(encoding="utf-8")


class TestPublishReport:
    """Test cases for publish_report."""

    def test_writes_both_files(self, suite_report, tmp_path):
        """Test the shared stem gets both suffixes."""
        json_path, text_path = publish_report(suite_report, tmp_path / "out" / "verify-kernel")

        assert json_path == tmp_path / "out" / "verify-kernel.json"
        assert text_path == tmp_path / "out" / "verify-kernel.txt"
        assert json_path.exists()
        assert text_path.exists()
