# -*- coding: utf-8 -*-
"""
Live dashboard helpers.

The loguru console sink is removed while a Rich Live view owns the terminal and restored
afterwards; the file sink keeps recording throughout.
"""

from contextlib import contextmanager
from typing import Iterator

from rich.console import Console, RenderableType
from rich.live import Live

from .logger import add_console_sink, remove_console_sink


@contextmanager
def silent_logs() -> Iterator[None]:
    """Drop console logs for the duration of the block."""
    remove_console_sink()
    try:
        yield
    finally:
        add_console_sink()


@contextmanager
def live_view(renderable: RenderableType, console: Console, refresh_per_second: int = 4) -> Iterator[Live]:
    """
    Live-render a dashboard with console logs silenced.

    Usage:
        with live_view(dashboard.render(), console) as live:
            live.update(dashboard.render())
    """
    with silent_logs(), Live(renderable, console=console, refresh_per_second=refresh_per_second) as live:
        yield live


__all__ = ["silent_logs", "live_view"]
