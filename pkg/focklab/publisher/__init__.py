"""
Report publishers for the Fock-Sobolev laboratory.

Every run writes two files with the same stem: ``<stem>.json`` for machines
and ``<stem>.txt`` for people.
"""

from pathlib import Path
from typing import Tuple, Union

from focklab.publisher.json_report import JsonReportPublisher
from focklab.publisher.text_report import TextReportPublisher, format_number

__all__ = [
    "JsonReportPublisher",
    "TextReportPublisher",
    "format_number",
    "publish_report",
]


def publish_report(report, stem: Union[str, Path]) -> Tuple[Path, Path]:
    """Write ``<stem>.json`` and ``<stem>.txt``; returns both paths."""
    stem = Path(stem)
    json_path = JsonReportPublisher().publish(report, stem.with_name(stem.name + JsonReportPublisher.suffix))
    text_path = TextReportPublisher().publish(report, stem.with_name(stem.name + TextReportPublisher.suffix))
    return json_path, text_path
