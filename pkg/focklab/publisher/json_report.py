"""
Machine-readable reports.

Output is a pure function of the report: keys are sorted, no timestamps are
added and non-finite floats are written as the strings "inf", "-inf" and
"nan" so the document stays strict JSON.
"""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Union

import numpy as np

from focklab.models import CarlesonReport, SuiteReport
from focklab.utils import LoggerMixin, FockLabError

Report = Union[SuiteReport, CarlesonReport]


def _strict(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (np.generic, np.ndarray)):
        return _strict(value.tolist())
    if isinstance(value, float) and not math.isfinite(value):
        if math.isnan(value):
            return "nan"
        return "inf" if value > 0 else "-inf"
    if isinstance(value, dict):
        return {key: _strict(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_strict(item) for item in value]
    return value


class JsonReportPublisher(LoggerMixin):
    """Writes suite and Carleson reports as sorted, indented JSON."""

    suffix = ".json"

    def render(self, report: Report) -> str:
        data = _strict(report.model_dump(mode="python", by_alias=True))
        return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"

    def publish(self, report: Report, path: Union[str, Path]) -> Path:
        """
        Write the rendered report to ``path``.

        Raises:
            FockLabError: If the file cannot be written
        """
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(self.render(report), encoding="utf-8")
        except OSError as e:
            error = FockLabError(
                f"Failed to write report: {e}", context={"path": str(path)}, cause=e
            )
            self.logger.error("Report write failed", error=error)
            raise error
        self.logger.info("JSON report written", path=str(path))
        return path
