"""
Structured Logging
==================

JSON-structured logging with run context, run IDs,
and per-module logger factory.

Uses structlog for structured, machine-readable log output. Without
structlog, stdlib loggers take the same keyword fields and render them
through python-json-logger.

Author: wavepath Team
Version: 1.0.0
"""

import logging
import sys
import uuid
from contextvars import ContextVar
from typing import Any, Dict, Optional

try:
    import structlog
    HAS_STRUCTLOG = True
except ImportError:
    HAS_STRUCTLOG = False

try:
    from pythonjsonlogger.json import JsonFormatter
except ImportError:
    from pythonjsonlogger.jsonlogger import JsonFormatter  # type: ignore[no-redef]

# Context variables for the active CLI run
_run_id: ContextVar[str] = ContextVar("run_id", default="")
_command: ContextVar[str] = ContextVar("command", default="")


def set_run_id(run_id: Optional[str] = None) -> str:
    """Set run ID for current context. Returns the ID."""
    rid = run_id or str(uuid.uuid4())[:12]
    _run_id.set(rid)
    return rid


def get_run_id() -> str:
    """Get current run ID."""
    return _run_id.get()


def set_command(command: str) -> None:
    """Set the command being executed for logging context."""
    _command.set(command)


def _add_run_id(logger: Any, method_name: str, event_dict: Dict) -> Dict:
    """Structlog processor to inject run ID."""
    rid = _run_id.get()
    if rid:
        event_dict["run_id"] = rid
    return event_dict


def _add_command(logger: Any, method_name: str, event_dict: Dict) -> Dict:
    """Structlog processor to inject the active command."""
    command = _command.get()
    if command:
        event_dict["command"] = command
    return event_dict


def _add_service_info(logger: Any, method_name: str, event_dict: Dict) -> Dict:
    """Structlog processor to inject service metadata."""
    event_dict["service"] = "wavepath"
    return event_dict


class _KeywordAdapter(logging.LoggerAdapter):
    """stdlib logger that takes structlog-style keyword fields as extra."""

    _RESERVED = ("exc_info", "stack_info", "stacklevel", "extra")

    def process(self, msg: Any, kwargs: Any) -> Any:
        fields = {k: kwargs.pop(k) for k in list(kwargs) if k not in self._RESERVED}
        fields.update({"run_id": _run_id.get(), "command": _command.get(), "service": "wavepath"})
        kwargs["extra"] = {**(kwargs.get("extra") or {}), **fields}
        return msg, kwargs


def setup_logging(
    level: str = "INFO",
    json_output: bool = True,
    log_file: Optional[str] = None,
) -> None:
    """
    Configure structured logging for wavepath.

    Logs go to stderr so that stdout stays free for command output.

    Args:
        level: Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        json_output: If True, output JSON; otherwise human-readable
        log_file: Optional path to write logs to a file
    """
    log_level = getattr(logging, level.upper(), logging.INFO)

    if HAS_STRUCTLOG:
        shared_processors = [
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            _add_run_id,
            _add_command,
            _add_service_info,
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
        ]

        if json_output:
            renderer = structlog.processors.JSONRenderer()
        else:
            renderer = structlog.dev.ConsoleRenderer(colors=False)

        structlog.configure(
            processors=shared_processors + [
                structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
            ],
            context_class=dict,
            logger_factory=structlog.stdlib.LoggerFactory(),
            wrapper_class=structlog.stdlib.BoundLogger,
            cache_logger_on_first_use=True,
        )

        formatter = structlog.stdlib.ProcessorFormatter(
            processor=renderer,
            foreign_pre_chain=shared_processors,
        )

        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(formatter)

        root_logger = logging.getLogger()
        root_logger.handlers.clear()
        root_logger.addHandler(handler)
        root_logger.setLevel(log_level)

        if log_file:
            file_handler = logging.FileHandler(log_file)
            file_handler.setFormatter(formatter)
            root_logger.addHandler(file_handler)

    else:
        # stdlib loggers with keyword fields rendered by python-json-logger
        if json_output:
            formatter = JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        else:
            formatter = logging.Formatter("%(asctime)s %(levelname)s %(name)s %(message)s")
        handlers: list = [logging.StreamHandler(sys.stderr)]
        if log_file:
            handlers.append(logging.FileHandler(log_file))
        for handler in handlers:
            handler.setFormatter(formatter)

        root_logger = logging.getLogger()
        root_logger.handlers.clear()
        for handler in handlers:
            root_logger.addHandler(handler)
        root_logger.setLevel(log_level)


def get_logger(name: str) -> Any:
    """
    Get a structured logger for a module.

    Args:
        name: Module name (typically __name__)

    Returns:
        Structured logger instance
    """
    if HAS_STRUCTLOG:
        return structlog.get_logger(name)
    return _KeywordAdapter(logging.getLogger(name), {})
