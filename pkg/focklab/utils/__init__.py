"""
Utility modules for the Fock-Sobolev laboratory.

This package contains:
- The exception hierarchy shared by every module
- Structured logging helpers
"""

from .exceptions import (
    FockLabError,
    ConfigurationError,
    ValidationError,
    DomainError,
    HypothesisViolationError,
    DegreeRangeError,
    QuadratureError,
    MeasureParseError,
    ResourceNotFoundError,
    UnknownSuiteError,
)
from .logging import (
    get_logger,
    setup_logging,
    log_execution_time,
    LoggerMixin,
    StructuredLogger,
    StructuredFormatter,
)

__all__ = [
    # Exceptions
    'FockLabError',
    'ConfigurationError',
    'ValidationError',
    'DomainError',
    'HypothesisViolationError',
    'DegreeRangeError',
    'QuadratureError',
    'MeasureParseError',
    'ResourceNotFoundError',
    'UnknownSuiteError',

    # Logging
    'get_logger',
    'setup_logging',
    'log_execution_time',
    'LoggerMixin',
    'StructuredLogger',
    'StructuredFormatter',
]
