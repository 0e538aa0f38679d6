"""Tuber Grade - Core runtime (settings, logging, errors, console)."""

from .config import settings
from .errors import TuberError, UsageError, DataError, RuntimeFailure

__version__ = "1.0.0"
__all__ = ["settings", "TuberError", "UsageError", "DataError", "RuntimeFailure"]
