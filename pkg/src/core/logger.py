"""Logging configuration using Loguru."""

import os
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from .config import settings


# Global flag to disable logging (set by the test suite)
_LOGGING_DISABLED = os.environ.get("TUBER_DISABLE_LOGGING", "").lower() == "true"

# Plain console output (no ANSI codes) for piped / CI use
_PLAIN_LOGS = os.environ.get("TUBER_PLAIN_LOGS", "").lower() == "true"

# Test mode disables file rotation
_IS_TEST_MODE = os.environ.get("TUBER_TEST_MODE", "").lower() == "true"

PLAIN_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
COLOR_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)

_console_handler_id: Optional[int] = None
_console_level: str = settings.log_level


def add_console_sink(level: Optional[str] = None) -> None:
    """Attach the stderr sink (no-op when logging is disabled or already attached)."""
    global _console_handler_id, _console_level
    if _LOGGING_DISABLED or _console_handler_id is not None:
        return
    _console_level = level or _console_level
    _console_handler_id = logger.add(
        sys.stderr,
        format=PLAIN_FORMAT if _PLAIN_LOGS else COLOR_FORMAT,
        level=_console_level,
        colorize=not _PLAIN_LOGS,
    )


def remove_console_sink() -> None:
    """Detach the stderr sink, keeping file sinks."""
    global _console_handler_id
    if _console_handler_id is not None:
        logger.remove(_console_handler_id)
        _console_handler_id = None


def setup_logging(log_file: Optional[Path] = None, level: Optional[str] = None) -> None:
    """
    Configure logging with Loguru.

    Args:
        log_file: Optional path to log file. Defaults to settings.log_file
        level: Console level override (e.g. from ``--verbose``)
    """
    global _console_handler_id
    logger.remove()
    _console_handler_id = None

    if _LOGGING_DISABLED:
        return

    add_console_sink(level or settings.log_level)

    log_file = log_file or settings.log_file
    log_file.parent.mkdir(parents=True, exist_ok=True)

    if _IS_TEST_MODE:
        logger.add(log_file, format=PLAIN_FORMAT, level="DEBUG", rotation=None, enqueue=True)
    else:
        logger.add(
            log_file,
            format=PLAIN_FORMAT,
            level="DEBUG",
            rotation="10 MB",
            retention="30 days",
            compression="zip",
            enqueue=True,
        )

    logger.debug(f"Logging initialized - Level: {_console_level}, Test Mode: {_IS_TEST_MODE}")


if not _LOGGING_DISABLED:
    setup_logging()
else:
    logger.remove()

__all__ = ["logger", "setup_logging", "add_console_sink", "remove_console_sink"]
