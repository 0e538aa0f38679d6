"""Confusion matrices, metrics and fold aggregation."""

from .aggregate import CVSummary, MetricSummary, aggregate_folds, aggregate_values
from .confusion import ConfusionMatrix, confusion_matrix
from .metrics import (
    POSITIVE_CLASS,
    BinaryDiagnostics,
    MetricsReport,
    binary_diagnostics,
    metrics_from_confusion,
)

__all__ = [
    "CVSummary",
    "MetricSummary",
    "aggregate_folds",
    "aggregate_values",
    "ConfusionMatrix",
    "confusion_matrix",
    "POSITIVE_CLASS",
    "BinaryDiagnostics",
    "MetricsReport",
    "binary_diagnostics",
    "metrics_from_confusion",
]
