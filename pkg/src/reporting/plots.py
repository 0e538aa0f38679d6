# -*- coding: utf-8 -*-
"""
Run plots.

- history_fold_<k>.png: loss and accuracy curves per fold
- accuracy_by_fold.png: per-fold accuracy bars with the mean ± std
- confusion_fold_<k>.png: confusion-matrix heat maps
- head_ablation.png: mean accuracy per head variant (grid runs)
- class_count_sweep.png: accuracy vs class count (sweep runs)

Figures are written without timestamps, so identical inputs give identical files.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import numpy as np  # noqa: E402
import pandas as pd  # noqa: E402

from ..core.errors import MissingArtifacts  # noqa: E402
from ..core.logger import logger  # noqa: E402
from ..evaluation.confusion import ConfusionMatrix  # noqa: E402
from ..training.history import History  # noqa: E402
from .run_dir import fold_dirs, fold_index, read_json  # noqa: E402

PNG_METADATA = {"Software": None}
DPI = 100


def _save(fig, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=DPI, metadata=PNG_METADATA)
    plt.close(fig)
    return path


def plot_history(history: History, path: Path, title: str = "") -> Path:
    frame = history.to_frame()
    fig, (ax_loss, ax_acc) = plt.subplots(1, 2, figsize=(10, 4))
    ax_loss.plot(frame["epoch"], frame["train_loss"], label="train")
    ax_loss.plot(frame["epoch"], frame["val_loss"], label="validation")
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("loss")
    ax_loss.legend()
    ax_acc.plot(frame["epoch"], frame["train_acc"], label="train")
    ax_acc.plot(frame["epoch"], frame["val_acc"], label="validation")
    ax_acc.set_xlabel("epoch")
    ax_acc.set_ylabel("accuracy")
    ax_acc.set_ylim(0, 1.05)
    ax_acc.legend()
    if history.best_epoch:
        for ax in (ax_loss, ax_acc):
            ax.axvline(history.best_epoch, color="grey", linestyle="--", linewidth=0.8)
    fig.suptitle(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_accuracy_bars(
    labels: Sequence[str],
    means: Sequence[float],
    stds: Sequence[float],
    path: Path,
    title: str = "",
    xlabel: str = "",
    reference: Optional[Sequence[Optional[float]]] = None,
) -> Path:
    """Bar chart with std error bars; optional published values as markers."""
    x = np.arange(len(labels))
    fig, ax = plt.subplots(figsize=(max(4, 1.2 * len(labels) + 2), 4))
    ax.bar(x, means, yerr=stds, capsize=4, color="tab:blue", label="measured")
    if reference is not None:
        ref_x = [i for i, r in enumerate(reference) if r is not None]
        ref_y = [reference[i] for i in ref_x]
        if ref_x:
            ax.scatter(ref_x, ref_y, color="tab:red", marker="D", zorder=3, label="published")
        ax.legend()
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("accuracy")
    ax.set_xlabel(xlabel)
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def plot_confusion(matrix: ConfusionMatrix, path: Path, title: str = "") -> Path:
    counts = matrix.counts
    n = matrix.n
    fig, ax = plt.subplots(figsize=(1.0 * n + 2.5, 1.0 * n + 2))
    ax.imshow(counts, cmap="Blues")
    threshold = counts.max() / 2 if counts.size and counts.max() > 0 else 0
    for i in range(n):
        for j in range(n):
            ax.text(j, i, str(int(counts[i, j])), ha="center", va="center",
                    color="white" if counts[i, j] > threshold else "black")
    ticks = [str(c) for c in range(1, n + 1)]
    ax.set_xticks(range(n))
    ax.set_xticklabels(ticks)
    ax.set_yticks(range(n))
    ax.set_yticklabels(ticks)
    ax.set_xlabel("predicted class")
    ax.set_ylabel("true class")
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def render_plots(run_dir: Path) -> List[Path]:
    """
    Render every plot the run's artifacts support.

    Raises:
        MissingArtifacts: no fold directories or no metrics.json
    """
    run_dir = Path(run_dir)
    folds = fold_dirs(run_dir)
    if not folds:
        raise MissingArtifacts(f"{run_dir} has no folds/fold_<k> directories")
    metrics = read_json(run_dir / "metrics.json")
    best_epochs = {int(f["fold"]): f.get("best_epoch") for f in metrics.get("per_fold", [])}
    plots = run_dir / "plots"
    written: List[Path] = []

    for fold in folds:
        k = fold_index(fold)
        history_csv = fold / "history.csv"
        if history_csv.exists():
            history = History.read_csv(history_csv, best_epochs.get(k))
            written.append(plot_history(history, plots / f"history_fold_{k}.png", f"Fold {k}"))
        confusion_csv = fold / "confusion.csv"
        if confusion_csv.exists():
            written.append(plot_confusion(ConfusionMatrix.read_csv(confusion_csv),
                                          plots / f"confusion_fold_{k}.png", f"Fold {k}"))

    per_fold = metrics.get("per_fold", [])
    if per_fold:
        summary = metrics["summary"]["accuracy"]
        labels = [f"fold {f['fold']}" for f in per_fold] + ["mean"]
        means = [f["accuracy"] for f in per_fold] + [summary["mean"]]
        stds = [0.0] * len(per_fold) + [summary["std"]]
        written.append(plot_accuracy_bars(labels, means, stds, plots / "accuracy_by_fold.png",
                                          "Accuracy by fold"))

    grid_csv = run_dir / "grid_results.csv"
    if grid_csv.exists():
        written.append(plot_head_ablation(pd.read_csv(grid_csv), plots / "head_ablation.png"))

    logger.info(f"Rendered {len(written)} plot(s) under {plots}")
    return written


def plot_head_ablation(grid: pd.DataFrame, path: Path) -> Path:
    """Best mean accuracy per head variant across the other grid axes."""
    if "head_label" not in grid.columns:
        raise MissingArtifacts("grid results have no head_label column")
    best: Dict[str, pd.Series] = {}
    for label, group in grid.groupby("head_label", sort=False):
        best[label] = group.sort_values(["mean_accuracy", "std_accuracy"], ascending=[False, True]).iloc[0]
    labels = list(best)
    return plot_accuracy_bars(
        labels,
        [float(best[name]["mean_accuracy"]) for name in labels],
        [float(best[name]["std_accuracy"]) for name in labels],
        path,
        "Head ablation",
        "head",
    )


def plot_class_count_sweep(sweep: pd.DataFrame, path: Path) -> Path:
    reference = [None if pd.isna(v) else float(v) for v in sweep["published_accuracy"]]
    return plot_accuracy_bars(
        [str(int(n)) for n in sweep["n_classes"]],
        sweep["mean_accuracy"].astype(float).tolist(),
        sweep["std_accuracy"].astype(float).tolist(),
        path,
        "Accuracy by number of classes",
        "classes",
        reference=reference,
    )


__all__ = [
    "plot_history",
    "plot_accuracy_bars",
    "plot_confusion",
    "plot_head_ablation",
    "plot_class_count_sweep",
    "render_plots",
]
