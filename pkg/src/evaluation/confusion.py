# -*- coding: utf-8 -*-
"""
Confusion matrices.

Rows are true classes, columns predicted classes; classes are labelled 1..n.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Tuple

import numpy as np
import pandas as pd
from sklearn.metrics import confusion_matrix as sk_confusion_matrix

from ..core.errors import LabelOutOfRange, LengthMismatch


@dataclass(frozen=True)
class ConfusionMatrix:
    counts: np.ndarray
    degenerate: bool = False

    @property
    def n(self) -> int:
        return int(self.counts.shape[0])

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def tp(self) -> np.ndarray:
        return np.diag(self.counts).astype(np.int64)

    @property
    def fp(self) -> np.ndarray:
        return self.counts.sum(axis=0) - self.tp

    @property
    def fn(self) -> np.ndarray:
        return self.counts.sum(axis=1) - self.tp

    @property
    def tn(self) -> np.ndarray:
        return self.total - self.tp - self.fp - self.fn

    @property
    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def label_vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        """(true, predicted) 1-based label vectors that reproduce these counts."""
        rows, cols = np.indices(self.counts.shape)
        weights = self.counts.ravel()
        return np.repeat(rows.ravel() + 1, weights), np.repeat(cols.ravel() + 1, weights)

    def to_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(self.counts, columns=[f"pred_{k}" for k in range(1, self.n + 1)])
        frame.to_csv(path, index=False, lineterminator="\n")
        return path

    @classmethod
    def read_csv(cls, path: Path) -> "ConfusionMatrix":
        counts = pd.read_csv(path).to_numpy(dtype=np.int64)
        return cls(counts=counts, degenerate=int(counts.sum()) == 0)

    @classmethod
    def from_counts(cls, counts) -> "ConfusionMatrix":
        arr = np.asarray(counts, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or (arr < 0).any():
            raise ValueError("counts must be a square non-negative integer matrix")
        return cls(counts=arr, degenerate=int(arr.sum()) == 0)


def confusion_matrix(
    true_labels: Sequence[int],
    predicted_labels: Sequence[int],
    n: int,
) -> ConfusionMatrix:
    """
    Count (true, predicted) pairs.

    Raises:
        LengthMismatch, LabelOutOfRange
    """
    y_true = np.asarray(true_labels, dtype=np.int64)
    y_pred = np.asarray(predicted_labels, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise LengthMismatch(f"{y_true.size} true labels vs {y_pred.size} predictions")
    if y_true.size == 0:
        return ConfusionMatrix(counts=np.zeros((n, n), dtype=np.int64), degenerate=True)

    for name, arr in (("true", y_true), ("predicted", y_pred)):
        bad = arr[(arr < 1) | (arr > n)]
        if bad.size:
            raise LabelOutOfRange(f"{name} label {int(bad[0])} outside 1..{n}")

    counts = sk_confusion_matrix(y_true, y_pred, labels=list(range(1, n + 1)))
    return ConfusionMatrix(counts=counts.astype(np.int64))


__all__ = ["ConfusionMatrix", "confusion_matrix"]
