"""Structured logging for the CLI: structlog rendered through stdlib logging.

Engine modules log with ``logging.getLogger(__name__)`` and event-style
messages carrying ``extra={...}`` payloads. A ``ProcessorFormatter`` with a
``foreign_pre_chain`` turns those records into structlog events (level,
logger name, timestamp, contextvars, extras) before rendering. Output goes to
stderr; stdout and the data files written by the CLI never contain log lines.
"""

import logging
import sys
from typing import Any

import structlog

# Third-party loggers that are chatty at INFO/DEBUG.
NOISY_LOGGERS = ("matplotlib", "matplotlib.font_manager", "PIL")

_PRE_CHAIN: list[structlog.types.Processor] = [
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_log_level,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.ExtraAdder(),
    structlog.processors.TimeStamper(fmt="iso"),
]


def build_formatter(use_json: bool) -> structlog.stdlib.ProcessorFormatter:
    renderer: structlog.types.Processor
    if use_json:
        renderer = structlog.processors.JSONRenderer()
    else:
        renderer = structlog.dev.ConsoleRenderer(colors=False)
    return structlog.stdlib.ProcessorFormatter(
        foreign_pre_chain=_PRE_CHAIN,
        processors=[structlog.stdlib.ProcessorFormatter.remove_processors_meta, renderer],
    )


def configure_logging(level: str | None = None) -> None:
    """Install one stderr handler on the root logger.

    - Local runs (``LOG_JSON`` unset, ``ENVIRONMENT=local``): console output.
    - CI / production: one JSON object per line.

    ``level`` overrides ``LOG_LEVEL`` (used by the ``--log-level`` CLI flag);
    unknown names fall back to INFO. Safe to call repeatedly.
    """
    from app.core.config import settings

    log_level = getattr(logging, (level or settings.LOG_LEVEL).upper(), logging.INFO)
    if not isinstance(log_level, int):
        log_level = logging.INFO

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(build_formatter(settings.log_json))

    root = logging.getLogger()
    root.handlers.clear()
    root.addHandler(handler)
    root.setLevel(log_level)
    for name in NOISY_LOGGERS:
        logging.getLogger(name).setLevel(logging.WARNING)


def bind_run_context(**fields: Any) -> None:
    """Start a fresh log context for one command (e.g. ``command``, ``config_hash``)."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**fields)
