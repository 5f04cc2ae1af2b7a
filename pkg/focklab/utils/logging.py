"""
Structured logging for the Fock-Sobolev laboratory.

Sweeps, suites and the command line log through this module:
- JSON records with contextual fields (suite, inequality, grid sizes)
- Persistent and temporary logging context
- Timing of long computations
"""

import logging
import json
import sys
import time
from typing import Any, Dict, Iterator, Optional
from datetime import datetime, timezone
from pathlib import Path
from contextlib import contextmanager
from functools import lru_cache, partialmethod, wraps

import numpy as np

# Attributes every LogRecord carries; anything else is caller context.
_RECORD_FIELDS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}

SIMPLE_FORMAT = "%(asctime)s %(levelname)-8s %(name)s: %(message)s"
QUIET_LOGGERS = ("joblib",)


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    return str(value)


class StructuredFormatter(logging.Formatter):
    """
    Formatter that renders each record as a single JSON object.

    Numerical context (parameters, grid sizes, extrema) travels in the
    record's extra fields and ends up under the ``extra`` key.
    """

    def _exception_block(self, record: logging.LogRecord) -> Optional[Dict[str, Any]]:
        if not record.exc_info or record.exc_info == (None, None, None):
            return None
        exc_type, exc_value, _ = record.exc_info
        return {
            "type": exc_type.__name__ if exc_type else None,
            "message": str(exc_value) if exc_value else None,
            "traceback": self.formatException(record.exc_info),
        }

    def format(self, record: logging.LogRecord) -> str:
        entry: Dict[str, Any] = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }
        exception = self._exception_block(record)
        if exception:
            entry["exception"] = exception

        extra = {k: v for k, v in vars(record).items() if k not in _RECORD_FIELDS}
        if extra:
            entry["extra"] = extra
        return json.dumps(entry, default=_json_default, ensure_ascii=False)


class ContextFilter(logging.Filter):
    """Stamps persistent context fields onto every record of its logger."""

    def __init__(self):
        super().__init__()
        self.context: Dict[str, Any] = {}

    def filter(self, record: logging.LogRecord) -> bool:
        record.__dict__.update(self.context)
        return True

    def set_context(self, **kwargs):
        self.context.update(kwargs)

    def clear_context(self):
        self.context.clear()


class StructuredLogger:
    """
    Logger with keyword-field methods and context management.

    ``logger.info("Sweep finished", inequality_id="lemma1", points=560)``
    emits one record whose extra fields are the keywords. Keywords whose
    value is None are dropped.
    """

    def __init__(self, name: str):
        self.logger = logging.getLogger(name)
        self.context_filter = ContextFilter()
        self.logger.addFilter(self.context_filter)

    def _emit(self, level: int, message: str, **fields):
        if not self.logger.isEnabledFor(level):
            return
        extra = {k: v for k, v in fields.items() if v is not None}
        self.logger.log(level, message, extra=extra)

    @staticmethod
    def _error_fields(error: Optional[Exception], fields: Dict[str, Any]) -> Dict[str, Any]:
        if error is not None:
            fields["error_type"] = type(error).__name__
            fields["error_message"] = str(error)
            to_dict = getattr(error, "to_dict", None)
            if callable(to_dict):
                fields["error_details"] = to_dict()
        return fields

    debug = partialmethod(_emit, logging.DEBUG)
    info = partialmethod(_emit, logging.INFO)
    warning = partialmethod(_emit, logging.WARNING)

    def error(self, message: str, error: Optional[Exception] = None, **fields):
        """Log once at ERROR, attaching the structured form of ``error``."""
        self._emit(logging.ERROR, message, **self._error_fields(error, fields))

    def critical(self, message: str, error: Optional[Exception] = None, **fields):
        self._emit(logging.CRITICAL, message, **self._error_fields(error, fields))

    def set_context(self, **kwargs):
        self.context_filter.set_context(**kwargs)

    def clear_context(self):
        self.context_filter.clear_context()

    @contextmanager
    def context(self, **kwargs) -> Iterator["StructuredLogger"]:
        """Temporary context for all records emitted inside the block."""
        saved = dict(self.context_filter.context)
        self.context_filter.set_context(**kwargs)
        try:
            yield self
        finally:
            self.context_filter.context = saved

    def log_performance(self, operation: str, duration: float, **fields):
        self.info(
            f"Performance: {operation}",
            operation=operation,
            duration_ms=round(duration * 1000, 2),
            **fields
        )

    def log_check(self, name: str, passed: bool, observed: Any = None, **fields):
        """Log one verification check: INFO when it passes, WARNING when it fails."""
        self._emit(
            logging.INFO if passed else logging.WARNING,
            f"Check {'passed' if passed else 'failed'}: {name}",
            check=name,
            passed=passed,
            observed=observed,
            **fields
        )


class LoggerMixin:
    """Gives a class a ``logger`` named after its module and class, created on first use."""

    @property
    def logger(self) -> StructuredLogger:
        logger = self.__dict__.get("_structured_logger")
        if logger is None:
            cls = type(self)
            logger = get_logger(f"{cls.__module__}.{cls.__qualname__}")
            self.__dict__["_structured_logger"] = logger
        return logger


@lru_cache(maxsize=None)
def get_logger(name: str) -> StructuredLogger:
    """
    Get the structured logger for ``name``.

    One instance exists per name, so context filters do not pile up on the
    underlying ``logging.Logger``.
    """
    return StructuredLogger(name)


def setup_logging(
    level: Optional[str] = None,
    format_type: str = "structured",
    log_file: Optional[Path] = None
) -> None:
    """
    Configure the root logger.

    Args:
        level: Log level name; WARNING when omitted
        format_type: "structured" (JSON lines) or "simple"
        log_file: Optional file receiving structured records as well
    """
    root = logging.getLogger()
    root.setLevel(getattr(logging, (level or "WARNING").upper()))
    root.handlers.clear()

    # stderr keeps stdout free for verdicts and report paths
    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(
        StructuredFormatter() if format_type == "structured"
        else logging.Formatter(SIMPLE_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    )
    root.addHandler(console)

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding="utf-8")
        file_handler.setFormatter(StructuredFormatter())
        root.addHandler(file_handler)

    for name in QUIET_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


@contextmanager
def timed(logger: StructuredLogger, operation: str, **fields) -> Iterator[None]:
    """Log the wall time of the enclosed block, with its outcome."""
    start = time.perf_counter()
    try:
        yield
    except Exception as e:
        logger.log_performance(
            operation=operation,
            duration=time.perf_counter() - start,
            status="error",
            error_type=type(e).__name__,
            **fields
        )
        raise
    logger.log_performance(
        operation=operation,
        duration=time.perf_counter() - start,
        status="success",
        **fields
    )


def log_execution_time(func=None, *, logger: Optional[StructuredLogger] = None):
    """
    Decorator logging the wall time of a computation.

    Usable as ``@log_execution_time`` or ``@log_execution_time(logger=...)``.
    """
    def decorator(f):
        func_logger = logger or get_logger(f"{f.__module__}.{f.__qualname__}")

        @wraps(f)
        def wrapper(*args, **kwargs):
            with timed(func_logger, f.__name__):
                return f(*args, **kwargs)
        return wrapper

    if func is None:
        return decorator
    return decorator(func)
