# -*- coding: utf-8 -*-
"""
Classification metrics from a confusion matrix.

Per class (one-vs-rest): precision TP/(TP+FP), recall TP/(TP+FN), F1 their harmonic
mean, all computed by scikit-learn from label vectors rebuilt from the counts. Zero
denominators give 0 and put the metric name on the degenerate list. Support-weighted
averages are the headline; macro averages are always reported too.
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from sklearn.metrics import (
    balanced_accuracy_score,
    matthews_corrcoef,
    precision_recall_fscore_support,
    recall_score,
)

from ..core.errors import EmptyMatrix, NotBinary
from ..core.logger import logger
from .confusion import ConfusionMatrix

# Positive class of binary tasks (sprout = 2)
POSITIVE_CLASS = 2


@dataclass
class BinaryDiagnostics:
    sensitivity: float
    specificity: float
    balanced_accuracy: float
    mcc: float
    degenerate: List[str] = field(default_factory=list)


@dataclass
class MetricsReport:
    """Metrics of one evaluated confusion matrix."""

    n_classes: int
    total: int
    accuracy: float
    support: List[int]
    precision: List[float]
    recall: List[float]
    f1: List[float]
    precision_macro: float
    recall_macro: float
    f1_macro: float
    precision_weighted: float
    recall_weighted: float
    f1_weighted: float
    balanced_accuracy: Optional[float] = None
    specificity: Optional[float] = None
    mcc: Optional[float] = None
    degenerate: List[str] = field(default_factory=list)

    def scalar_metrics(self) -> Dict[str, float]:
        """Every scalar metric present in this report."""
        values = {
            "accuracy": self.accuracy,
            "precision_weighted": self.precision_weighted,
            "recall_weighted": self.recall_weighted,
            "f1_weighted": self.f1_weighted,
            "precision_macro": self.precision_macro,
            "recall_macro": self.recall_macro,
            "f1_macro": self.f1_macro,
        }
        for name in ("balanced_accuracy", "specificity", "mcc"):
            value = getattr(self, name)
            if value is not None:
                values[name] = value
        return values

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: dict) -> "MetricsReport":
        return cls(**payload)


def binary_diagnostics(matrix: ConfusionMatrix) -> BinaryDiagnostics:
    """
    Sensitivity, specificity, balanced accuracy and MCC of a 2x2 matrix.

    Class 2 is positive. A class with no samples gets recall 0 (flagged); MCC is 0
    (flagged) when any marginal is 0.

    Raises:
        NotBinary: matrix is not 2x2
    """
    if matrix.n != 2:
        raise NotBinary(f"expected a 2x2 matrix, got {matrix.n}x{matrix.n}")

    y_true, y_pred = matrix.label_vectors()
    specificity, sensitivity = recall_score(
        y_true, y_pred, labels=[1, POSITIVE_CLASS], average=None, zero_division=0
    )
    degenerate = []
    support = matrix.support
    if support[1] == 0:
        degenerate.append("sensitivity")
    if support[0] == 0:
        degenerate.append("specificity")

    if degenerate:
        balanced = (sensitivity + specificity) / 2
    else:
        balanced = balanced_accuracy_score(y_true, y_pred)

    counts = matrix.counts
    if (counts.sum(axis=0) == 0).any() or (counts.sum(axis=1) == 0).any():
        mcc = 0.0
        degenerate.append("mcc")
    else:
        mcc = matthews_corrcoef(y_true, y_pred)

    return BinaryDiagnostics(
        sensitivity=float(sensitivity),
        specificity=float(specificity),
        balanced_accuracy=float(balanced),
        mcc=float(mcc),
        degenerate=degenerate,
    )


def metrics_from_confusion(matrix: ConfusionMatrix) -> MetricsReport:
    """
    Accuracy and per-class / averaged precision, recall and F1.

    Binary matrices also get balanced accuracy, specificity and MCC.

    Raises:
        EmptyMatrix: matrix total is 0
    """
    if matrix.total == 0:
        raise EmptyMatrix("confusion matrix has no samples")

    y_true, y_pred = matrix.label_vectors()
    labels = list(range(1, matrix.n + 1))
    precision, recall, f1, _ = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, average=None, zero_division=0
    )
    averages = {
        avg: precision_recall_fscore_support(y_true, y_pred, labels=labels, average=avg, zero_division=0)
        for avg in ("macro", "weighted")
    }

    tp, support = matrix.tp, matrix.support
    degenerate = []
    for k in range(matrix.n):
        if tp[k] + matrix.fp[k] == 0:
            degenerate.append(f"precision_{k + 1}")
        if support[k] == 0:
            degenerate.append(f"recall_{k + 1}")
        if precision[k] + recall[k] == 0:
            degenerate.append(f"f1_{k + 1}")

    report = MetricsReport(
        n_classes=matrix.n,
        total=matrix.total,
        accuracy=float(tp.sum() / matrix.total),
        support=[int(s) for s in support],
        precision=[float(v) for v in precision],
        recall=[float(v) for v in recall],
        f1=[float(v) for v in f1],
        precision_macro=float(averages["macro"][0]),
        recall_macro=float(averages["macro"][1]),
        f1_macro=float(averages["macro"][2]),
        precision_weighted=float(averages["weighted"][0]),
        recall_weighted=float(averages["weighted"][1]),
        f1_weighted=float(averages["weighted"][2]),
        degenerate=degenerate,
    )

    if matrix.n == 2:
        diag = binary_diagnostics(matrix)
        report.balanced_accuracy = diag.balanced_accuracy
        report.specificity = diag.specificity
        report.mcc = diag.mcc
        report.degenerate.extend(d for d in diag.degenerate if d not in report.degenerate)

    if report.degenerate:
        logger.warning(f"Degenerate metrics set to 0: {', '.join(report.degenerate)}")
    return report


__all__ = [
    "POSITIVE_CLASS",
    "BinaryDiagnostics",
    "MetricsReport",
    "binary_diagnostics",
    "metrics_from_confusion",
]
