# -*- coding: utf-8 -*-
"""
Cross-validation and holdout runs.

A fresh model is trained per fold and evaluated on its held-out fold. Early stopping and
the LR schedule watch a stratified validation share of the training folds, never the
held-out fold unless validation_fraction is 0. Every fold writes
its artifacts under ``<run_dir>/folds/fold_<k>/``; metrics.json is written once all
folds have finished.
"""

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import ClassTooSmall, MissingArtifacts, OutputDirNotWritable
from ..core.logger import logger
from ..data.manifest import DatasetManifest, SampleKey
from ..data.splits import DatasetSplit, holdout_split, stratified_holdout
from ..evaluation.aggregate import CVSummary, aggregate_folds
from ..evaluation.confusion import ConfusionMatrix, confusion_matrix
from ..evaluation.metrics import MetricsReport, metrics_from_confusion
from ..evaluation.predictions import FoldPredictions, build_predictions
from ..models.spec import ModelSpec
from ..models.zoo import ModelHandle, save_model
from .config import TrainConfig
from .data import ImageCache, TrainingSample
from .folds import FoldPlan, stratified_kfold
from .history import History
from .trainer import ProgressCallback, predict_samples, train_model

JobDoneCallback = Callable[[str, float, str], None]

METRICS_FILE = "metrics.json"


def fold_dir(run_dir: Path, fold: int) -> Path:
    return Path(run_dir) / "folds" / f"fold_{fold}"


@dataclass
class FoldResult:
    """Outcome of one fold."""

    fold: int
    report: MetricsReport
    confusion: ConfusionMatrix
    history: History
    predictions: FoldPredictions
    train_seconds: float
    n_train: int
    n_test: int
    n_val: int = 0
    validation: str = "inner_split"  # "inner_split" | "test_fold"
    handle: Optional[ModelHandle] = None

    def to_dict(self) -> dict:
        return {
            "fold": self.fold,
            "n_train": self.n_train,
            "n_test": self.n_test,
            "n_val": self.n_val,
            "validation": self.validation,
            "train_seconds": round(self.train_seconds, 3),
            "epochs": self.history.epochs,
            "best_epoch": self.history.best_epoch,
            "stop_reason": self.history.stop_reason,
            **self.report.to_dict(),
        }


@dataclass
class CVResult:
    """All folds of a run plus their aggregate."""

    folds: List[FoldResult]
    summary: CVSummary
    mode: str = "cv"  # "cv" | "holdout"
    plan: Optional[FoldPlan] = None
    split: Optional[DatasetSplit] = None
    extra: Dict[str, object] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "n_folds": self.summary.n_folds,
            "single_fold": self.summary.single_fold,
            "per_fold": [f.to_dict() for f in self.folds],
            "summary": self.summary.to_dict(),
            **self.extra,
        }

    def write_metrics(self, run_dir: Path) -> Path:
        path = Path(run_dir) / METRICS_FILE
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path


def _ensure_writable(run_dir: Path) -> Path:
    run_dir = Path(run_dir)
    try:
        (run_dir / "folds").mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OutputDirNotWritable(f"{run_dir}: {e}") from e
    return run_dir


def split_validation(
    train_samples: Sequence[TrainingSample],
    test_samples: Sequence[TrainingSample],
    config: TrainConfig,
    job: str = "",
) -> Tuple[List[TrainingSample], List[TrainingSample], str]:
    """
    Carve the validation set out of the training fold.

    Returns:
        (fit_samples, val_samples, source); source is "inner_split", or "test_fold" when
        validation_fraction is 0 or a training class is too small to split
    """
    if config.validation_fraction > 0:
        by_key = {s.key: s for s in train_samples}
        try:
            split = stratified_holdout(
                {key: s.class_index for key, s in by_key.items()},
                config.validation_fraction,
                config.seed,
            )
        except ClassTooSmall as e:
            logger.warning(f"[{job}] no inner validation split ({e}); monitoring the test fold")
        else:
            if split.test_ids:
                return (
                    [by_key[k] for k in sorted(split.train_ids)],
                    [by_key[k] for k in sorted(split.test_ids)],
                    "inner_split",
                )
            logger.warning(f"[{job}] inner validation split is empty; monitoring the test fold")
    return list(train_samples), list(test_samples), "test_fold"


def run_fold(
    fold: int,
    spec: ModelSpec,
    train_samples: Sequence[TrainingSample],
    test_samples: Sequence[TrainingSample],
    config: TrainConfig,
    run_dir: Path,
    progress_callback: Optional[ProgressCallback] = None,
    job_done: Optional[JobDoneCallback] = None,
    cache: Optional[ImageCache] = None,
    keep_model: bool = True,
    job_prefix: str = "",
) -> FoldResult:
    """Train on train_samples, evaluate on test_samples and persist the fold's artifacts."""
    job = f"{job_prefix}fold {fold}"
    out = fold_dir(run_dir, fold)
    out.mkdir(parents=True, exist_ok=True)
    fit_samples, val_samples, validation = split_validation(train_samples, test_samples, config, job)
    logger.info(
        f"[{job}] start: {len(fit_samples)} train / {len(val_samples)} validation ({validation}) "
        f"/ {len(test_samples)} test"
    )

    start = time.time()
    handle, history = train_model(
        spec, fit_samples, val_samples, config,
        job_name=job, progress_callback=progress_callback, cache=cache,
    )
    train_seconds = time.time() - start

    proba = predict_samples(handle, test_samples, config.input_size, cache=cache)
    predictions = build_predictions(
        [s.key for s in test_samples], [s.class_index for s in test_samples], proba
    )
    matrix = confusion_matrix(predictions.true_classes, predictions.pred_classes, spec.n_classes)
    report = metrics_from_confusion(matrix)

    handle.metadata["fold"] = fold
    save_model(handle, out / "checkpoint.bin")
    history.write_csv(out / "history.csv")
    matrix.to_csv(out / "confusion.csv")
    predictions.write_csv(out / "predictions.csv")
    logger.info(
        f"[{job}] done in {train_seconds:.1f}s: accuracy={report.accuracy:.4f}, "
        f"checkpoint written to {out / 'checkpoint.bin'}"
    )

    if job_done:
        try:
            job_done(job, train_seconds, history.stop_reason or "")
        except Exception as e:
            logger.warning(f"Job callback failed: {e}")

    return FoldResult(
        fold=fold,
        report=report,
        confusion=matrix,
        history=history,
        predictions=predictions,
        train_seconds=train_seconds,
        n_train=len(fit_samples),
        n_test=len(test_samples),
        n_val=len(val_samples) if validation == "inner_split" else 0,
        validation=validation,
        handle=handle if keep_model else None,
    )


def cross_validate(
    spec: ModelSpec,
    samples: Sequence[TrainingSample],
    config: TrainConfig,
    run_dir: Path,
    k: Optional[int] = None,
    progress_callback: Optional[ProgressCallback] = None,
    job_done: Optional[JobDoneCallback] = None,
    max_workers: Optional[int] = None,
    keep_models: bool = True,
    job_prefix: str = "",
) -> CVResult:
    """
    Stratified k-fold cross-validation.

    Args:
        spec: Model specification, rebuilt fresh for every fold
        samples: Labeled samples (row order is irrelevant)
        config: Training protocol
        run_dir: Run directory; receives folds/plan.json, per-fold artifacts and metrics.json
        k: Fold count (defaults to config.k_folds)
        progress_callback: Per-epoch callback forwarded to the trainer
        job_done: Called as job_done(job, seconds, stop_reason) after each fold
        max_workers: Concurrent folds (defaults to settings.max_parallel_jobs)
        keep_models: Keep trained handles in the result

    Returns:
        CVResult with folds sorted by index

    Raises:
        ClassTooSmall: a class has fewer than k samples
    """
    k = k or config.k_folds
    run_dir = _ensure_writable(run_dir)
    by_key: Dict[SampleKey, TrainingSample] = {s.key: s for s in samples}
    plan = stratified_kfold({key: s.class_index for key, s in by_key.items()}, k=k, seed=config.seed)
    plan.save(run_dir / "folds" / "plan.json")

    cache = ImageCache()
    workers = max(1, min(max_workers or settings.max_parallel_jobs, k))
    logger.info(
        f"{job_prefix}{k}-fold CV of {spec.backbone.value} [{spec.head.label}] on "
        f"{len(by_key)} samples, fold sizes {plan.fold_sizes()}, {workers} worker(s)"
    )

    def _job(fold: int) -> FoldResult:
        return run_fold(
            fold,
            spec,
            [by_key[key] for key in plan.train_keys(fold)],
            [by_key[key] for key in plan.test_keys(fold)],
            config,
            run_dir,
            progress_callback=progress_callback,
            job_done=job_done,
            cache=cache,
            keep_model=keep_models,
            job_prefix=job_prefix,
        )

    folds = range(1, k + 1)
    if workers == 1:
        results = [_job(f) for f in folds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_job, folds))

    summary = aggregate_folds([r.report for r in results])
    result = CVResult(folds=sorted(results, key=lambda r: r.fold), summary=summary, plan=plan)
    result.write_metrics(run_dir)
    logger.info(
        f"{job_prefix}CV finished: accuracy {summary.mean():.4f} ± {summary.std():.4f} "
        f"over {summary.n_folds} folds"
    )
    return result


def holdout_validate(
    spec: ModelSpec,
    samples: Sequence[TrainingSample],
    manifest: DatasetManifest,
    config: TrainConfig,
    run_dir: Path,
    test_fraction: float = 0.2,
    progress_callback: Optional[ProgressCallback] = None,
    job_done: Optional[JobDoneCallback] = None,
) -> CVResult:
    """
    Single stratified train/test split, written as a one-fold run directory.

    The split itself is stored in folds/split.json.
    """
    run_dir = _ensure_writable(run_dir)
    by_key: Dict[SampleKey, TrainingSample] = {s.key: s for s in samples}
    split = holdout_split(
        manifest.subset(by_key),
        test_fraction,
        config.seed,
        {key: s.class_index for key, s in by_key.items()},
    )
    with open(run_dir / "folds" / "split.json", "w", encoding="utf-8") as f:
        json.dump(split.to_dict(), f, indent=2)

    fold = run_fold(
        1,
        spec,
        [by_key[key] for key in sorted(split.train_ids)],
        [by_key[key] for key in sorted(split.test_ids)],
        config,
        run_dir,
        progress_callback=progress_callback,
        job_done=job_done,
    )
    result = CVResult(
        folds=[fold],
        summary=aggregate_folds([fold.report]),
        mode="holdout",
        split=split,
        extra={"test_fraction": test_fraction},
    )
    result.write_metrics(run_dir)
    logger.info(f"Holdout finished: accuracy {fold.report.accuracy:.4f}")
    return result


def load_metrics(run_dir: Path) -> dict:
    """Parsed metrics.json of a finished run."""
    path = Path(run_dir) / METRICS_FILE
    if not path.exists():
        raise MissingArtifacts(f"{path} not found")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


__all__ = [
    "METRICS_FILE",
    "JobDoneCallback",
    "FoldResult",
    "CVResult",
    "fold_dir",
    "split_validation",
    "run_fold",
    "cross_validate",
    "holdout_validate",
    "load_metrics",
]
