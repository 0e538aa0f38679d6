# -*- coding: utf-8 -*-
"""
Class-count sweep.

One full cross-validation per class count n, same backbone and protocol, each in
``<out_dir>/n_<n>/``. The combined table is written to ``<out_dir>/sweep.csv``.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

import pandas as pd

from ..core.errors import UnsupportedClassCount
from ..core.logger import logger
from ..data.manifest import DatasetManifest
from ..labeling.class_scheme import MAX_CLASSES, MIN_CLASSES, build_class_scheme
from ..labeling.labeler import label_dataset
from ..models.spec import ModelSpec
from ..training.config import TrainConfig
from ..training.cross_validation import JobDoneCallback, cross_validate
from ..training.data import samples_from_labels
from ..training.trainer import ProgressCallback
from .aggregate import CVSummary
from .reference import CLASS_COUNT_ACCURACY

SWEEP_COLUMNS = ["n_classes", "n_samples", "mean_accuracy", "std_accuracy", "published_accuracy"]


@dataclass
class SweepRow:
    n_classes: int
    n_samples: int
    summary: CVSummary

    def to_row(self) -> dict:
        return {
            "n_classes": self.n_classes,
            "n_samples": self.n_samples,
            "mean_accuracy": self.summary.mean(),
            "std_accuracy": self.summary.std(),
            "published_accuracy": CLASS_COUNT_ACCURACY.get(self.n_classes),
        }


def sweep_frame(rows: Sequence[SweepRow]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in rows], columns=SWEEP_COLUMNS)


def read_sweep(path: Path) -> pd.DataFrame:
    return pd.read_csv(path)


def class_count_sweep(
    manifest: DatasetManifest,
    spec: ModelSpec,
    config: TrainConfig,
    out_dir: Path,
    n_range: Sequence[int] = range(MIN_CLASSES, MAX_CLASSES + 1),
    progress_callback: Optional[ProgressCallback] = None,
    job_done: Optional[JobDoneCallback] = None,
) -> List[SweepRow]:
    """
    Cross-validate one model per class count.

    Args:
        manifest: Dataset with weights (shelf-life labels are derived per n)
        spec: Model specification; its head is resized to each n
        config: TrainConfig shared by every n
        out_dir: Sweep directory
        n_range: Class counts to evaluate

    Returns:
        One SweepRow per n, in n_range order
    """
    for n in n_range:
        if not MIN_CLASSES <= n <= MAX_CLASSES:
            raise UnsupportedClassCount(n)

    out_dir = Path(out_dir)
    rows: List[SweepRow] = []
    for n in n_range:
        labels = [s for s in label_dataset(manifest, build_class_scheme(n)) if not s.censored]
        samples = samples_from_labels(labels, manifest.root_dir)
        n_spec = spec.with_head(spec.head.model_copy(update={"n_classes": n}))
        logger.info(f"Class-count sweep: n={n} on {len(samples)} samples")
        cv = cross_validate(
            n_spec,
            samples,
            config,
            out_dir / f"n_{n}",
            progress_callback=progress_callback,
            job_done=job_done,
            keep_models=False,
            job_prefix=f"n={n} ",
        )
        rows.append(SweepRow(n_classes=n, n_samples=len(samples), summary=cv.summary))

    out_dir.mkdir(parents=True, exist_ok=True)
    sweep_frame(rows).to_csv(out_dir / "sweep.csv", index=False, lineterminator="\n", float_format="%.8g")
    logger.info(f"Class-count sweep written to {out_dir / 'sweep.csv'}")
    return rows


__all__ = ["SWEEP_COLUMNS", "SweepRow", "sweep_frame", "read_sweep", "class_count_sweep"]
