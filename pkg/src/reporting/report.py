# -*- coding: utf-8 -*-
"""
Consolidated Markdown report of a run.

Measured values and published reference values are always shown in separate,
labelled columns or sections.
"""

from pathlib import Path
from typing import List, Optional

import pandas as pd

from ..core.errors import MissingArtifacts
from ..core.logger import logger
from ..evaluation.confusion import ConfusionMatrix
from ..evaluation.reference import (
    CLASS_COUNT_ACCURACY,
    CLASS_COUNT_ACCURACY_N2_CHART,
    FIVE_CLASS_TABLE,
    HUMAN_BENCHMARK,
    HUMAN_BENCHMARK_CLASSES,
    SPROUT_CONFUSION,
    SPROUT_TABLE,
)
from ..labeling.class_scheme import build_class_scheme
from ..profiling.table import read_profile_csv, render_markdown
from .experiment import ExperimentConfig
from .run_dir import fold_dirs, fold_index, load_run_config, read_json

HEADLINE_METRICS = [
    ("accuracy", "Accuracy"),
    ("precision_weighted", "Precision (weighted)"),
    ("recall_weighted", "Recall (weighted)"),
    ("f1_weighted", "F1 (weighted)"),
    ("precision_macro", "Precision (macro)"),
    ("recall_macro", "Recall (macro)"),
    ("f1_macro", "F1 (macro)"),
    ("balanced_accuracy", "Balanced accuracy"),
    ("specificity", "Specificity"),
    ("mcc", "MCC"),
]

# Published tables use unqualified metric names
_REFERENCE_KEY = {
    "accuracy": "accuracy",
    "precision_weighted": "precision",
    "recall_weighted": "recall",
    "f1_weighted": "f1",
}


def _fmt_pair(mean: float, std: float) -> str:
    return f"{mean:.4f} ± {std:.4f}"


def confusion_markdown(matrix: ConfusionMatrix) -> str:
    n = matrix.n
    header = "| true \\ predicted | " + " | ".join(str(c) for c in range(1, n + 1)) + " |"
    rule = "|---|" + "---:|" * n
    rows = [
        f"| {i + 1} | " + " | ".join(str(int(v)) for v in matrix.counts[i]) + " |" for i in range(n)
    ]
    return "\n".join([header, rule, *rows])


def _reference_row(config: ExperimentConfig) -> Optional[dict]:
    name = config.backbone.value
    if config.task == "sprout":
        return SPROUT_TABLE.get(name)
    if config.n_classes == 5:
        return FIVE_CLASS_TABLE.get(name)
    return None


def _metrics_section(config: ExperimentConfig, metrics: dict) -> List[str]:
    summary = metrics.get("summary", {})
    reference = _reference_row(config)
    lines = [
        "## Cross-validation summary",
        "",
        f"Folds: {metrics.get('n_folds', 0)}"
        + (" (single fold: std reported as 0)" if metrics.get("single_fold") else ""),
        "",
        "| Metric | Measured (mean ± std) | Published (mean ± std) |",
        "|---|---:|---:|",
    ]
    for key, label in HEADLINE_METRICS:
        if key not in summary:
            continue
        published = ""
        ref_key = _REFERENCE_KEY.get(key)
        if reference and ref_key in reference:
            published = _fmt_pair(*reference[ref_key])
        lines.append(f"| {label} | {_fmt_pair(summary[key]['mean'], summary[key]['std'])} | {published} |")

    lines += ["", "| Fold | Train | Validation | Test | Accuracy | Epochs | Best epoch | Train seconds |",
              "|---:|---:|---:|---:|---:|---:|---:|---:|"]
    for fold in metrics.get("per_fold", []):
        validation = "test fold" if fold.get("validation") == "test_fold" else fold.get("n_val", "")
        lines.append(
            f"| {fold['fold']} | {fold.get('n_train', '')} | {validation} | {fold.get('n_test', '')} "
            f"| {fold['accuracy']:.4f} | {fold.get('epochs', '')} | {fold.get('best_epoch', '')} "
            f"| {fold.get('train_seconds', '')} |"
        )
    return lines + [""]


def _confusion_section(run_dir: Path, config: ExperimentConfig) -> List[str]:
    lines = ["## Confusion matrices", ""]
    folds = fold_dirs(run_dir)
    pooled = None
    for fold in folds:
        path = fold / "confusion.csv"
        if not path.exists():
            continue
        matrix = ConfusionMatrix.read_csv(path)
        pooled = matrix.counts.copy() if pooled is None else pooled + matrix.counts
        lines += [f"### Fold {fold_index(fold)}", "", confusion_markdown(matrix), ""]
    if pooled is not None:
        lines += ["### All folds", "", confusion_markdown(ConfusionMatrix.from_counts(pooled)), ""]
    if config.task == "sprout":
        lines += [
            "Published sprout confusion matrix (reference only):",
            "",
            confusion_markdown(ConfusionMatrix.from_counts(SPROUT_CONFUSION)),
            "",
        ]
    return lines


def _classes_section(config: ExperimentConfig) -> List[str]:
    if config.task == "sprout":
        return ["Classes: 1 = not sprouted, 2 = sprouted", ""]
    names = build_class_scheme(config.n_classes).class_names()
    lines = ["| Class | Weight loss (%) |", "|---:|---|"]
    lines += [f"| {i} | {name} |" for i, name in enumerate(names, start=1)]
    return lines + [""]


def _reference_section(config: ExperimentConfig, measured_accuracy: Optional[float]) -> List[str]:
    lines = ["## Published reference values", "",
             "Reference only; the published dataset is private and hardware unstated.", ""]
    human = HUMAN_BENCHMARK
    lines.append(
        f"- Human experts ({HUMAN_BENCHMARK_CLASSES} classes): accuracy {human['accuracy']:.4f}, "
        f"precision {human['precision']:.4f}, recall {human['recall']:.4f}, F1 {human['f1']:.4f}"
    )
    if measured_accuracy is not None:
        lines.append(
            f"- This run ({config.n_classes} classes): accuracy {measured_accuracy:.4f} "
            f"({measured_accuracy - human['accuracy']:+.4f} vs human experts)"
        )
    if config.n_classes in CLASS_COUNT_ACCURACY:
        lines.append(
            f"- Published accuracy at {config.n_classes} classes: "
            f"{CLASS_COUNT_ACCURACY[config.n_classes]:.4f}"
            + (f" (chart value {CLASS_COUNT_ACCURACY_N2_CHART:.4f})" if config.n_classes == 2 else "")
        )
    return lines + [""]


def _plots_section(run_dir: Path) -> List[str]:
    plots = sorted((run_dir / "plots").glob("*.png")) if (run_dir / "plots").is_dir() else []
    if not plots:
        return []
    lines = ["## Plots", ""]
    lines += [f"![{p.stem}](plots/{p.name})" for p in plots]
    return lines + [""]


def _grid_section(run_dir: Path) -> List[str]:
    path = run_dir / "grid_results.csv"
    if not path.exists():
        return []
    frame = pd.read_csv(path)
    columns = [c for c in frame.columns if c not in ("mean_accuracy", "std_accuracy")]
    lines = ["## Grid search", "",
             "| " + " | ".join(columns) + " | Accuracy |",
             "|" + "---|" * (len(columns) + 1)]
    for rec in frame.to_dict("records"):
        cells = [str(rec[c]) for c in columns]
        lines.append("| " + " | ".join(cells) + f" | {_fmt_pair(rec['mean_accuracy'], rec['std_accuracy'])} |")
    return lines + [""]


def build_report(run_dir: Path) -> str:
    """
    Markdown report of a finished run.

    Raises:
        MissingArtifacts: config.json or metrics.json missing
    """
    run_dir = Path(run_dir)
    config = load_run_config(run_dir)
    metrics = read_json(run_dir / "metrics.json")
    accuracy = metrics.get("summary", {}).get("accuracy", {}).get("mean")

    lines = [
        f"# Run {config.run_id or run_dir.name}",
        "",
        f"- Task: {config.task}",
        f"- Classes: {config.n_classes}",
        f"- Backbone: {config.backbone.value}",
        f"- Head: {config.model_spec().head.label}",
        f"- Seed: {config.seed}",
        f"- Mode: {metrics.get('mode', 'cv')}",
        "",
    ]
    lines += _classes_section(config)
    lines += _metrics_section(config, metrics)
    lines += _confusion_section(run_dir, config)
    lines += _grid_section(run_dir)
    profile = run_dir / "profile.csv"
    if profile.exists():
        lines += ["## Cost profile", "", render_markdown(read_profile_csv(profile))]
    lines += _reference_section(config, accuracy)
    lines += _plots_section(run_dir)
    return "\n".join(lines).rstrip() + "\n"


def write_report(run_dir: Path, out: Optional[Path] = None) -> Path:
    run_dir = Path(run_dir)
    out = Path(out) if out else run_dir / "report.md"
    if not (run_dir / "metrics.json").exists():
        raise MissingArtifacts(f"{run_dir / 'metrics.json'} not found; run train or evaluate first")
    text = build_report(run_dir)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info(f"Report written to {out}")
    return out


__all__ = ["HEADLINE_METRICS", "confusion_markdown", "build_report", "write_report"]
