# -*- coding: utf-8 -*-
"""
CLI Dashboard for training runs.

Rich live dashboard showing fold and epoch progress, current learning rate and the
best validation loss so far. Fed through the trainer's progress callback.
"""

import threading
import time
from typing import Any, Dict, List, Optional

from rich.console import Console
from rich.layout import Layout
from rich.panel import Panel
from rich.progress import (
    BarColumn,
    Progress,
    SpinnerColumn,
    TextColumn,
    TimeElapsedColumn,
    TimeRemainingColumn,
)
from rich.table import Table
from rich.text import Text


# Dashboards render on stderr so stdout stays machine-consumable
console = Console(stderr=True)


class TrainingDashboard:
    """
    Live dashboard for cross-validation / grid-search training.

    Shows:
    - Overall job progress (folds x grid points)
    - Epoch progress of the job reporting most recently
    - Per-job best validation loss and learning rate
    """

    def __init__(self, total_jobs: int, max_epochs: int, title: str = "Training"):
        self.total_jobs = total_jobs
        self.max_epochs = max_epochs
        self.title = title
        self.start_time = time.time()

        self.completed_jobs = 0
        self.job_stats: Dict[str, Dict[str, Any]] = {}
        self.job_times: List[float] = []
        self._lock = threading.Lock()

        self.progress = Progress(
            SpinnerColumn(),
            TextColumn("[progress.description]{task.description}"),
            BarColumn(bar_width=40),
            TextColumn("[progress.percentage]{task.percentage:>3.0f}%"),
            TimeElapsedColumn(),
            TimeRemainingColumn(),
            console=console,
        )
        self.overall_task = self.progress.add_task("[cyan]Jobs", total=total_jobs)
        self.epoch_task = self.progress.add_task("[green]Epochs", total=max_epochs)

    def _create_header(self) -> Panel:
        header_text = Text()
        header_text.append(f"{self.title}\n", style="bold magenta")
        header_text.append(
            f"Jobs: {self.total_jobs} | Max epochs: {self.max_epochs}", style="yellow"
        )
        return Panel(header_text, style="bold blue")

    def _create_jobs_table(self) -> Table:
        table = Table(title="Jobs", show_header=True, header_style="bold magenta")
        table.add_column("Job", style="cyan")
        table.add_column("Epoch", style="yellow")
        table.add_column("Val loss", style="green")
        table.add_column("Val acc", style="green")
        table.add_column("LR", style="magenta")
        table.add_column("Status")

        with self._lock:
            for job, stats in list(self.job_stats.items())[-8:]:
                table.add_row(
                    job,
                    str(stats.get("epoch", 0)),
                    f"{stats.get('best_val_loss', float('nan')):.4f}",
                    f"{stats.get('val_acc', 0.0):.3f}",
                    f"{stats.get('lr', 0.0):.2e}",
                    stats.get("status", "running"),
                )
        return table

    def _format_time(self, seconds: float) -> str:
        """Format seconds as HH:MM:SS"""
        hours = int(seconds // 3600)
        minutes = int((seconds % 3600) // 60)
        secs = int(seconds % 60)

        if hours > 0:
            return f"{hours:02d}h {minutes:02d}m {secs:02d}s"
        elif minutes > 0:
            return f"{minutes:02d}m {secs:02d}s"
        return f"{secs}s"

    def update_epoch(self, job: str, epoch: int, stats: Dict[str, Any]) -> None:
        """Progress callback target: one finished epoch of one job."""
        with self._lock:
            entry = self.job_stats.setdefault(job, {"best_val_loss": float("inf")})
            entry.update(
                epoch=epoch,
                val_acc=stats.get("val_acc", 0.0),
                lr=stats.get("lr", 0.0),
                best_val_loss=min(entry["best_val_loss"], stats.get("val_loss", float("inf"))),
            )
        self.progress.update(self.epoch_task, completed=epoch, description=f"[green]{job}")

    def complete_job(self, job: str, seconds: float, stop_reason: str) -> None:
        with self._lock:
            self.job_stats.setdefault(job, {})["status"] = stop_reason
            self.completed_jobs += 1
            self.job_times.append(seconds)
        self.progress.update(self.overall_task, completed=self.completed_jobs)

    def render(self) -> Layout:
        """Render current dashboard state"""
        elapsed = self._format_time(time.time() - self.start_time)
        with self._lock:
            times = list(self.job_times)
        footer = f"Elapsed: {elapsed}"
        if times:
            footer += f" | Mean job: {self._format_time(sum(times) / len(times))}"
        layout = Layout()
        layout.split_column(
            Layout(self._create_header(), size=4),
            Layout(self.progress, size=4),
            Layout(self._create_jobs_table(), size=13),
            Layout(Panel(footer, style="bold blue"), size=3),
        )
        return layout


def print_table(title: str, columns: List[str], rows: List[List[Any]],
                out: Optional[Console] = None) -> None:
    """Print a simple Rich table of already-formatted rows."""
    table = Table(title=title, show_header=True, header_style="bold magenta")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[str(cell) for cell in row])
    (out or console).print(table)


__all__ = ["TrainingDashboard", "print_table", "console"]
