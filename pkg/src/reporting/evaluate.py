# -*- coding: utf-8 -*-
"""
Run evaluation.

Recomputes every fold's confusion matrix and metrics from its predictions.csv,
rewrites confusion.csv and metrics.json, and renders the run's plots. Training
bookkeeping already in metrics.json (train_seconds, epochs, stop reason) is kept.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List

from ..core.errors import MissingArtifacts
from ..core.logger import logger
from ..evaluation.aggregate import CVSummary, aggregate_folds
from ..evaluation.confusion import ConfusionMatrix, confusion_matrix
from ..evaluation.metrics import MetricsReport, metrics_from_confusion
from ..evaluation.predictions import FoldPredictions
from .plots import render_plots
from .run_dir import fold_dirs, fold_index

BOOKKEEPING_KEYS = (
    "n_train", "n_test", "n_val", "validation", "train_seconds", "epochs", "best_epoch", "stop_reason",
)


@dataclass
class RunEvaluation:
    reports: Dict[int, MetricsReport]
    confusions: Dict[int, ConfusionMatrix]
    summary: CVSummary
    plots: List[Path]

    def pooled_confusion(self) -> ConfusionMatrix:
        """Sum of the fold matrices."""
        matrices = list(self.confusions.values())
        total = matrices[0].counts.copy()
        for m in matrices[1:]:
            total = total + m.counts
        return ConfusionMatrix.from_counts(total)


def evaluate_run(run_dir: Path, plots: bool = True) -> RunEvaluation:
    """
    Re-evaluate a finished run from its stored predictions.

    Raises:
        MissingArtifacts: no fold directories or a fold without predictions.csv
    """
    run_dir = Path(run_dir)
    folds = fold_dirs(run_dir)
    if not folds:
        raise MissingArtifacts(f"{run_dir} has no folds/fold_<k> directories")

    previous: Dict[int, dict] = {}
    metrics_path = run_dir / "metrics.json"
    extra: Dict[str, object] = {}
    if metrics_path.exists():
        with open(metrics_path, "r", encoding="utf-8") as f:
            payload = json.load(f)
        previous = {int(entry["fold"]): entry for entry in payload.get("per_fold", [])}
        extra = {k: v for k, v in payload.items()
                 if k not in ("per_fold", "summary", "n_folds", "single_fold")}

    reports: Dict[int, MetricsReport] = {}
    confusions: Dict[int, ConfusionMatrix] = {}
    per_fold: List[dict] = []
    for fold in folds:
        k = fold_index(fold)
        predictions = FoldPredictions.read_csv(fold / "predictions.csv")
        matrix = confusion_matrix(predictions.true_classes, predictions.pred_classes, predictions.n_classes)
        matrix.to_csv(fold / "confusion.csv")
        report = metrics_from_confusion(matrix)
        reports[k], confusions[k] = report, matrix

        entry = {"fold": k}
        entry.update({key: previous[k][key] for key in BOOKKEEPING_KEYS if key in previous.get(k, {})})
        entry.update(report.to_dict())
        per_fold.append(entry)

    summary = aggregate_folds(list(reports.values()))
    with open(metrics_path, "w", encoding="utf-8") as f:
        json.dump(
            {
                **extra,
                "n_folds": summary.n_folds,
                "single_fold": summary.single_fold,
                "per_fold": per_fold,
                "summary": summary.to_dict(),
            },
            f,
            indent=2,
        )
    logger.info(
        f"Evaluated {summary.n_folds} fold(s) of {run_dir}: "
        f"accuracy {summary.mean():.4f} ± {summary.std():.4f}"
    )

    written = render_plots(run_dir) if plots else []
    return RunEvaluation(reports=reports, confusions=confusions, summary=summary, plots=written)


__all__ = ["RunEvaluation", "evaluate_run"]
