# -*- coding: utf-8 -*-
"""
Fold aggregation.

Mean and sample standard deviation (denominator k-1) of each scalar metric across
folds. A single fold gets std 0 and is flagged.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence

import numpy as np

from ..core.logger import logger
from .metrics import MetricsReport


@dataclass
class MetricSummary:
    mean: float
    std: float

    def to_dict(self) -> Dict[str, float]:
        return {"mean": self.mean, "std": self.std}


@dataclass
class CVSummary:
    """Per-metric mean/std over folds."""

    n_folds: int
    metrics: Dict[str, MetricSummary] = field(default_factory=dict)
    single_fold: bool = False

    def mean(self, metric: str = "accuracy") -> float:
        return self.metrics[metric].mean

    def std(self, metric: str = "accuracy") -> float:
        return self.metrics[metric].std

    def to_dict(self) -> Dict[str, Dict[str, float]]:
        return {name: s.to_dict() for name, s in self.metrics.items()}

    @classmethod
    def from_dict(cls, payload: Dict[str, Dict[str, float]], n_folds: int) -> "CVSummary":
        return cls(
            n_folds=n_folds,
            metrics={k: MetricSummary(float(v["mean"]), float(v["std"])) for k, v in payload.items()},
            single_fold=n_folds == 1,
        )


def aggregate_values(values: Sequence[float]) -> MetricSummary:
    arr = np.asarray(values, dtype=np.float64)
    if arr.size == 1 or np.ptp(arr) == 0:
        return MetricSummary(mean=float(arr[0]), std=0.0)
    return MetricSummary(mean=float(arr.mean()), std=float(arr.std(ddof=1)))


def aggregate_folds(reports: Sequence[MetricsReport]) -> CVSummary:
    """
    Aggregate fold reports.

    Metrics missing from any fold (e.g. MCC on a multi-class run) are skipped.
    """
    if not reports:
        raise ValueError("aggregate_folds needs at least one report")

    per_fold: List[Dict[str, float]] = [r.scalar_metrics() for r in reports]
    shared = [name for name in per_fold[0] if all(name in m for m in per_fold)]

    summary = CVSummary(
        n_folds=len(reports),
        metrics={name: aggregate_values([m[name] for m in per_fold]) for name in shared},
        single_fold=len(reports) == 1,
    )
    if summary.single_fold:
        logger.warning("Single fold: standard deviations reported as 0")
    return summary


__all__ = ["MetricSummary", "CVSummary", "aggregate_values", "aggregate_folds"]
