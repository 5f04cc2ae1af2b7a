"""
Human-readable reports rendered with rich tables and exported as plain text.
"""

import math
from io import StringIO
from pathlib import Path
from typing import Iterable, Optional, Union

from rich.console import Console
from rich.table import Table

from focklab.models import CarlesonReport, ShellProfile, SuiteReport
from focklab.utils import LoggerMixin, FockLabError

Report = Union[SuiteReport, CarlesonReport]

REPORT_WIDTH = 120


def format_number(value: Optional[float]) -> str:
    """Six significant digits; '-' for a missing value."""
    if value is None:
        return "-"
    if isinstance(value, float) and math.isnan(value):
        return "nan"
    return f"{value:.6g}"


def _mark(passed: Optional[bool]) -> str:
    if passed is None:
        return "-"
    return "PASS" if passed else "FAIL"


def _shell_table(title: str, shells: Iterable[ShellProfile]) -> Table:
    table = Table(title=title, title_justify="left")
    table.add_column("inner", justify="right")
    table.add_column("outer", justify="right")
    table.add_column("centers", justify="right")
    table.add_column("max", justify="right")
    for shell in shells:
        table.add_row(
            format_number(shell.inner),
            format_number(shell.outer),
            str(shell.centers),
            format_number(shell.max_value),
        )
    return table


class TextReportPublisher(LoggerMixin):
    """Aligned-text rendering of suite and Carleson reports."""

    suffix = ".txt"

    def _console(self) -> Console:
        return Console(
            record=True, width=REPORT_WIDTH, file=StringIO(),
            color_system=None, force_terminal=False
        )

    def _render_suite(self, console: Console, report: SuiteReport) -> None:
        console.print(f"Suite: {report.suite}    seed: {report.seed}    result: {_mark(report.passed)}")
        if report.resolution:
            settings = ", ".join(f"{k}={v}" for k, v in sorted(report.resolution.items()))
            console.print(f"Resolution: {settings}")

        if report.checks:
            checks = Table(title="Checks", title_justify="left")
            for column in ("check", "observed", "expected", "tolerance", "result", "detail"):
                checks.add_column(column, justify="right" if column in ("observed", "expected", "tolerance") else "left")
            for record in report.checks:
                checks.add_row(
                    record.name,
                    format_number(record.observed),
                    format_number(record.expected),
                    format_number(record.tolerance),
                    _mark(record.passed),
                    record.detail,
                )
            console.print(checks)

        if report.bounds:
            bounds = Table(title="Bounds", title_justify="left")
            for column in ("inequality", "ratio_min", "ratio_max", "evaluated", "excluded", "result"):
                bounds.add_column(column, justify="left" if column in ("inequality", "result") else "right")
            for bound in report.bounds:
                bounds.add_row(
                    bound.inequality_id,
                    format_number(bound.ratio_min),
                    format_number(bound.ratio_max),
                    str(bound.evaluated),
                    str(bound.excluded),
                    _mark(bound.passed),
                )
            console.print(bounds)

        for carleson in report.carleson:
            self._render_carleson(console, carleson)

        failures = report.failures()
        if failures:
            console.print(f"Failures: {', '.join(failures)}")

    def _render_carleson(self, console: Console, report: CarlesonReport) -> None:
        summary = Table(title=f"Carleson test: {report.measure_name or 'measure'}", title_justify="left")
        summary.add_column("quantity")
        summary.add_column("value", justify="right")
        x, y = report.argmax_center
        rows = [
            ("p", format_number(report.p)),
            ("m", str(report.m)),
            ("r", format_number(report.radius)),
            ("window", format_number(report.window)),
            ("spacing", format_number(report.lattice_spacing)),
            ("centers swept", str(report.centers_swept)),
            ("sup ratio", format_number(report.sup_ratio)),
            ("argmax center", f"{format_number(x)} {format_number(y)}"),
            ("verdict", report.verdict.value),
            ("embedding estimate", format_number(report.embedding_estimate)),
            ("embedding verdict", report.embedding_verdict.value if report.embedding_verdict else "-"),
            ("vanishing profile", report.vanishing.verdict.value if report.vanishing else "-"),
            ("comparability", format_number(report.comparability)),
            ("verdicts agree", _mark(report.verdicts_agree)),
            ("test centers", str(report.test_centers)),
            ("skipped centers", str(report.skipped_centers)),
        ]
        for name, value in rows:
            summary.add_row(name, value)
        console.print(summary)
        console.print(_shell_table("Geometric shells", report.shells))
        if report.embedding_shells:
            console.print(_shell_table("Embedding shells", report.embedding_shells))
        if report.kernel_decay:
            decay = Table(title="Kernel sequence decay", title_justify="left")
            decay.add_column("|a|", justify="right")
            decay.add_column("value", justify="right")
            for radius, value in report.kernel_decay:
                decay.add_row(format_number(radius), format_number(value))
            console.print(decay)

    def render(self, report: Report) -> str:
        console = self._console()
        if isinstance(report, SuiteReport):
            self._render_suite(console, report)
        else:
            self._render_carleson(console, report)
        return console.export_text()

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
        self.logger.info("Text report written", path=str(path))
        return path
