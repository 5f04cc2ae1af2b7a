"""
Command Line Interface for the Fock-Sobolev laboratory.

This module provides the ``verify`` command, which runs verification suites,
and the ``carleson`` command, which tests a measure file. Both write
``<out>.json`` and ``<out>.txt``.

Exit codes: 0 success, 1 failed assertions or unexpected errors,
2 usage errors (unknown suite, unreadable measure, bad configuration,
unsupported exponent).
"""

from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError as PydanticValidationError
from rich.console import Console

from focklab.carleson import analyze_measure
from focklab.config import LabConfig
from focklab.db import load_measure_file
from focklab.models import SpaceParams
from focklab.publisher import format_number, publish_report
from focklab.suites import ALL_SUITES, VerificationRunner
from focklab.utils.exceptions import (
    FockLabError,
    ConfigurationError,
    DomainError,
    MeasureParseError,
    ResourceNotFoundError,
    UnknownSuiteError,
    ValidationError,
)
from focklab.utils.logging import get_logger, LoggerMixin

USAGE_EXIT = 2
FAILURE_EXIT = 1

# Initialize CLI app and logger
app = typer.Typer(help="focklab - Fock-Sobolev space laboratory")
console = Console()
logger = get_logger(__name__)


class CLIHandler(LoggerMixin):
    """CLI command handler with logging and error handling."""

    def __init__(self):
        """Initialize CLI handler."""
        super().__init__()
        self.logger.debug("CLI handler initialized")

    def handle_error(self, error: Exception, context: str = "") -> int:
        """Report an error to the user and return the exit code it maps to."""
        if isinstance(error, UnknownSuiteError):
            console.print(f"❌ {error.message}", style="red")
            self.logger.error("Unknown suite", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, MeasureParseError):
            line = f" (line {error.line_number})" if error.line_number is not None else ""
            console.print(f"❌ Measure file error{line}: {error.message}", style="red")
            self.logger.error("Measure parse error", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, ResourceNotFoundError):
            console.print(f"❌ {error.message}", style="red")
            self.logger.error("Resource not found", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, ConfigurationError):
            console.print(f"❌ Configuration error: {error.message}", style="red")
            self.logger.error("Configuration error", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, DomainError):
            console.print(f"❌ Unsupported parameters: {error.message}", style="red")
            self.logger.error("Domain error", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, (ValidationError, PydanticValidationError)):
            console.print(f"❌ Invalid input: {error}", style="red")
            self.logger.error("Validation error", error=error, command=context)
            return USAGE_EXIT
        if isinstance(error, FockLabError):
            console.print(f"❌ Error: {error.message}", style="red")
            self.logger.error("Laboratory error", error=error, command=context)
            return FAILURE_EXIT
        console.print(f"❌ Unexpected error: {str(error)}", style="red")
        self.logger.error("Unexpected error", error=error, command=context)
        return FAILURE_EXIT


# Global CLI handler instance
cli_handler = CLIHandler()


def _load_config(config_path: Optional[Path], **overrides) -> LabConfig:
    if config_path is not None:
        return LabConfig.from_file(config_path, **overrides)
    return LabConfig(**{k: v for k, v in overrides.items() if v is not None})


@app.command()
def verify(
    suite_name: Optional[str] = typer.Argument(None, metavar="SUITE", help="kernel, norms, projection, inequalities or all"),
    suite: Optional[str] = typer.Option(None, "--suite", help="Suite to run (same as the SUITE argument)"),
    config_path: Optional[Path] = typer.Option(None, "--config", help="JSON configuration file"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report stem; defaults to verify-<suite>"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Seed for random polynomial families"),
    radial_degree: Optional[int] = typer.Option(None, "--radial-degree", help="Gauss nodes in |z|^2"),
    angular_count: Optional[int] = typer.Option(None, "--angular-count", help="Angular nodes"),
    tolerance: Optional[float] = typer.Option(None, "--tolerance", help="Default relative tolerance"),
) -> None:
    """Run a verification suite and write its report."""
    try:
        if suite and suite_name and suite != suite_name:
            raise typer.BadParameter(f"conflicting suites '{suite_name}' and '{suite}'")
        chosen = suite or suite_name or ALL_SUITES
        cli_handler.logger.info("Starting verification", suite=chosen)

        config = _load_config(
            config_path,
            seed=seed,
            radial_degree=radial_degree,
            angular_count=angular_count,
            tolerance=tolerance,
        )
        report = VerificationRunner(config).run(chosen)
        json_path, text_path = publish_report(report, out or Path(f"verify-{chosen}"))

    except typer.BadParameter:
        raise
    except Exception as e:
        raise typer.Exit(cli_handler.handle_error(e, f"verify {suite or suite_name}"))

    console.print(f"Reports: {json_path} {text_path}")
    if report.passed:
        console.print(f"✅ Suite '{report.suite}' passed ({len(report.checks)} checks, {len(report.bounds)} bounds)")
        cli_handler.logger.info("Verification passed", suite=report.suite)
        return

    failures = report.failures()
    console.print(f"❌ Suite '{report.suite}' failed: {', '.join(failures)}", style="red")
    cli_handler.logger.warning("Verification failed", suite=report.suite, failures=failures)
    raise typer.Exit(FAILURE_EXIT)


@app.command()
def carleson(
    measure: Path = typer.Option(..., "--measure", help="Measure file (text 'x y mass' lines or JSON)"),
    m: int = typer.Option(1, "--m", min=0, help="Sobolev order"),
    p: float = typer.Option(2.0, "--p", help="Integrability exponent"),
    r: Optional[float] = typer.Option(None, "--r", help="Disk radius"),
    window: Optional[float] = typer.Option(None, "--window", help="Largest |a| swept"),
    spacing: Optional[float] = typer.Option(None, "--spacing", help="Lattice spacing, at most r"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report stem; defaults to carleson-<measure>"),
    radial_degree: Optional[int] = typer.Option(None, "--radial-degree", help="Gauss nodes for test-function norms"),
    angular_count: Optional[int] = typer.Option(None, "--angular-count", help="Angular nodes for test-function norms"),
    measure_format: Optional[str] = typer.Option(None, "--format", help="text or json; inferred from the suffix"),
    config_path: Optional[Path] = typer.Option(None, "--config", help="JSON configuration file"),
) -> None:
    """Test whether a measure is (vanishing) Carleson for F^{p,m}."""
    try:
        cli_handler.logger.info("Starting Carleson analysis", measure=str(measure), p=p, m=m)

        config = _load_config(
            config_path,
            carleson_radius=r,
            window=window,
            spacing=spacing,
            radial_degree=radial_degree,
            angular_count=angular_count,
        )
        mu = load_measure_file(measure, measure_format)
        params = SpaceParams(p=p, m=m)
        report = analyze_measure(
            mu,
            params,
            r=config.carleson_radius,
            window=config.window,
            spacing=config.spacing,
            shell_count=config.shell_count,
            growth_factor=config.growth_factor,
            vanishing_fraction=config.vanishing_fraction,
            radial_degree=config.radial_degree,
            angular_count=config.angular_count,
            n_jobs=config.n_jobs,
        )
        json_path, text_path = publish_report(report, out or Path(f"carleson-{measure.stem}"))

    except Exception as e:
        raise typer.Exit(cli_handler.handle_error(e, f"carleson {measure}"))

    console.print(f"Verdict: {report.verdict.value}")
    console.print(f"sup ratio: {format_number(report.sup_ratio)}")
    if report.embedding_verdict is not None:
        console.print(f"Embedding verdict: {report.embedding_verdict.value}")
    console.print(f"Reports: {json_path} {text_path}")
    cli_handler.logger.info(
        "Carleson analysis completed",
        verdict=report.verdict.value,
        sup_ratio=report.sup_ratio,
    )


@app.command()
def version() -> None:
    """Show version information."""
    from focklab import __version__
    console.print(f"focklab version {__version__}")
    cli_handler.logger.info("Version command executed", version=__version__)


if __name__ == "__main__":
    app()
