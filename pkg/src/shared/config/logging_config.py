import logging
import sys

import structlog


def configure_logging(level: str = "INFO", structured: bool = False) -> None:
    """Route structlog output to stderr, as JSON lines or human-readable console text."""
    log_level = getattr(logging, str(level).upper(), logging.INFO)

    renderer = (structlog.processors.JSONRenderer() if structured
                else structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            renderer,
        ],
        wrapper_class=structlog.make_filtering_bound_logger(log_level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=False,
    )
