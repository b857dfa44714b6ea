"""Logging configuration for multiplex_graphlets.

Logging is scoped to the ``multiplex_graphlets.*`` logger tree only, with run ID
support so every record of a pipeline run can be tied to its config hash.

Environment Variables:
    MULTIPLEX_GRAPHLETS_JSON_LOGGING: Set to 'true' for JSON logging (default: 'false')
    MULTIPLEX_GRAPHLETS_LOG_LEVEL: Logging level name (default: 'INFO')
"""

import logging
import os
import uuid
from contextvars import ContextVar
from datetime import datetime

from pythonjsonlogger.json import JsonFormatter

from multiplex_graphlets.helpers.common.constants import EnvVars

PACKAGE_LOGGER = "multiplex_graphlets"

# Context variable for the current run (config hash or generated id)
run_id_var: ContextVar[str] = ContextVar("run_id", default="")

_logging_configured = False


class RunIdFilter(logging.Filter):
    """Logging filter that adds run_id to all log records."""

    def filter(self, record: logging.LogRecord) -> bool:
        """Add run_id to the log record."""
        record.run_id = run_id_var.get() or "-"
        return True


class ConciseFormatter(logging.Formatter):
    """One line per record: time, level, origin, short run id and message."""

    def format(self, record: logging.LogRecord) -> str:
        """Render ``record`` on one line, followed by its traceback if any."""
        stamp = datetime.fromtimestamp(record.created).strftime("%Y%m%d-%H:%M:%S")
        origin = f"{getattr(record, 'module', '?')}.{getattr(record, 'funcName', '?')}"
        run_id = str(getattr(record, "run_id", "-"))[:12]
        text = f"[{stamp} {record.levelname}] {origin} run={run_id} {record.getMessage()}"
        if record.exc_info:
            text = f"{text}\n{self.formatException(record.exc_info)}"
        return text


def _is_truthy(value: str) -> bool:
    return value.strip().lower() in {"1", "true", "yes", "on"}


def setup_logging(level: str | int | None = None, json_format: bool | None = None) -> logging.Logger:
    """Configure logging for the multiplex_graphlets.* loggers only.

    Subsequent calls only adjust the level, so library code and the CLI can both call it.

    Args:
        level: Logging level; defaults to MULTIPLEX_GRAPHLETS_LOG_LEVEL or INFO.
        json_format: Force JSON (True) or text (False); defaults to MULTIPLEX_GRAPHLETS_JSON_LOGGING.

    Returns:
        The configured package logger.
    """
    global _logging_configured

    package_logger = logging.getLogger(PACKAGE_LOGGER)
    if level is None:
        level = os.environ.get(EnvVars.LOG_LEVEL, "INFO").upper()
    package_logger.setLevel(level)

    if _logging_configured:
        return package_logger

    if json_format is None:
        json_format = _is_truthy(os.environ.get(EnvVars.JSON_LOGGING, "false"))

    handler = logging.StreamHandler()
    if json_format:
        handler.setFormatter(
            JsonFormatter("{asctime}{levelname}{name}{funcName}{run_id}{message}", style="{")
        )
    else:
        handler.setFormatter(ConciseFormatter())
    handler.addFilter(RunIdFilter())
    package_logger.addHandler(handler)
    package_logger.propagate = False

    _logging_configured = True
    package_logger.debug("multiplex_graphlets logging configured: %s format", "json" if json_format else "concise")
    return package_logger


def reset_logging() -> None:
    """Remove handlers installed by setup_logging (used by tests)."""
    global _logging_configured
    package_logger = logging.getLogger(PACKAGE_LOGGER)
    for handler in list(package_logger.handlers):
        package_logger.removeHandler(handler)
    package_logger.propagate = True
    _logging_configured = False


def get_run_id() -> str:
    """Get the current run ID; if none is set, generate a new one and store it in the context."""
    rid = run_id_var.get()
    if not rid:
        rid = generate_run_id()
    return rid


def set_run_id(rid: str) -> None:
    """Set the run ID for the current context."""
    run_id_var.set(rid)


def generate_run_id() -> str:
    """Generate a new run ID and set it in context."""
    rid = uuid.uuid4().hex
    run_id_var.set(rid)
    return rid
