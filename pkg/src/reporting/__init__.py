"""Experiment configuration, run directories, evaluation, plots and reports."""

from .evaluate import RunEvaluation, evaluate_run
from .experiment import ExperimentConfig, ExperimentPresets
from .plots import plot_class_count_sweep, render_plots
from .report import build_report, write_report
from .run_dir import create_run_dir, fold_dirs, load_run_config, make_run_id, write_run_config

__all__ = [
    "RunEvaluation",
    "evaluate_run",
    "ExperimentConfig",
    "ExperimentPresets",
    "plot_class_count_sweep",
    "render_plots",
    "build_report",
    "write_report",
    "create_run_dir",
    "fold_dirs",
    "load_run_config",
    "make_run_id",
    "write_run_config",
]
