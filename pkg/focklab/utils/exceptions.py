"""
Exception hierarchy of the Fock-Sobolev laboratory.

Numerical modules raise domain, quadrature and degree errors; the measure
store raises parse and lookup errors; the command line maps all of them to
exit codes. Each error has a code, a context mapping and an optional cause.
"""

from typing import Any, Dict, Optional, Sequence
import traceback
from datetime import datetime, timezone

# Longest stringified value kept in an error context.
MAX_CONTEXT_VALUE = 100


def _clip(value: Any) -> Optional[str]:
    return None if value is None else str(value)[:MAX_CONTEXT_VALUE]


class FockLabError(Exception):
    """
    Root of all laboratory errors.

    ``str(error)`` reads ``[Code] message (Context: k=v, ...) (Caused by: ...)``
    and ``to_dict`` gives the same information for structured logs.
    """

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        context: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None,
        **fields: Any
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or type(self).__name__
        self.context = dict(context or {})
        # subclasses pass their named fields here; unset ones are omitted
        self.context.update((k, v) for k, v in fields.items() if v is not None)
        self.cause = cause
        self.timestamp = datetime.now(timezone.utc)
        self.traceback_str = (
            "".join(traceback.format_exception(type(cause), cause, cause.__traceback__))
            if cause is not None else None
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error_type": type(self).__name__,
            "error_code": self.error_code,
            "message": self.message,
            "context": self.context,
            "timestamp": self.timestamp.isoformat(),
            "cause": None if self.cause is None else str(self.cause),
            "traceback": self.traceback_str,
        }

    def __str__(self) -> str:
        parts = [f"[{self.error_code}] {self.message}"]
        if self.context:
            pairs = ", ".join(f"{key}={value}" for key, value in self.context.items())
            parts.append(f"(Context: {pairs})")
        if self.cause is not None:
            parts.append(f"(Caused by: {self.cause})")
        return " ".join(parts)


class ConfigurationError(FockLabError):
    """Bad configuration, mismatched quadrature rules or too-short truncations."""

    def __init__(self, message: str, config_key: Optional[str] = None, **kwargs):
        super().__init__(message, config_key=config_key or None, **kwargs)


class ValidationError(FockLabError):
    """Input data rejected by a validation rule."""

    def __init__(
        self,
        message: str,
        field_name: Optional[str] = None,
        field_value: Optional[Any] = None,
        validation_rule: Optional[str] = None,
        **kwargs
    ):
        super().__init__(
            message,
            field_name=field_name or None,
            field_value=_clip(field_value),
            validation_rule=validation_rule or None,
            **kwargs
        )


class DomainError(FockLabError):
    """An argument outside the mathematical domain of an operation."""

    def __init__(
        self,
        message: str,
        parameter: Optional[str] = None,
        value: Optional[Any] = None,
        rule: Optional[str] = None,
        **kwargs
    ):
        super().__init__(
            message,
            parameter=parameter or None,
            value=_clip(value),
            rule=rule or None,
            **kwargs
        )


class HypothesisViolationError(DomainError):
    """Parameters that violate the hypothesis of an estimate."""


class DegreeRangeError(FockLabError):
    """A polynomial degree above the configured cap."""

    def __init__(self, message: str, limit: Optional[int] = None, requested: Optional[int] = None, **kwargs):
        super().__init__(message, limit=limit, requested=requested, **kwargs)


class QuadratureError(FockLabError):
    """A non-finite integrand value at a quadrature node."""

    def __init__(
        self,
        message: str,
        node_index: Optional[int] = None,
        node: Optional[complex] = None,
        **kwargs
    ):
        node_text = None if node is None else f"{node.real:.17g}{node.imag:+.17g}j"
        super().__init__(message, node_index=node_index, node=node_text, **kwargs)
        self.node_index = node_index
        self.node = node


class MeasureParseError(FockLabError):
    """A measure file that cannot be parsed; ``line_number`` is 1-based."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None, **kwargs):
        super().__init__(message, path=path or None, line=line_number, **kwargs)
        self.line_number = line_number


class ResourceNotFoundError(FockLabError):
    """A missing file or named resource."""


class UnknownSuiteError(ValidationError):
    """A verification suite name outside the known set."""

    def __init__(self, suite: str, known: Optional[Sequence[str]] = None):
        self.suite = suite
        super().__init__(
            f"Unknown suite '{suite}'",
            field_name="suite",
            field_value=suite,
            validation_rule=f"one of {', '.join(known or ())}"
        )
