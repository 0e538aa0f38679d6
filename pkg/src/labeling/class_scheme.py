# -*- coding: utf-8 -*-
"""
Shelf-life class scheme.

The 0-10% loss range is divided into n-1 equal half-open bins; everything at or above
10% is the final class. Edges are exact: 10 * k / (n - 1), k = 1..n-1.
"""

from bisect import bisect_right
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import UnsupportedClassCount
from .weight_loss import SHELF_LIFE_THRESHOLD_PCT

MIN_CLASSES = 2
MAX_CLASSES = 8


class ClassScheme(BaseModel):
    """Loss-percentage bins for n classes, labelled 1..n."""

    model_config = ConfigDict(frozen=True)

    n_classes: int = Field(description="Number of classes, 2..8")
    threshold_pct: float = Field(default=SHELF_LIFE_THRESHOLD_PCT, gt=0)
    edges: Tuple[float, ...] = Field(description="n-1 ascending upper bin edges")

    @model_validator(mode="after")
    def _check_edges(self) -> "ClassScheme":
        if len(self.edges) != self.n_classes - 1:
            raise ValueError("edges must have n_classes - 1 entries")
        if any(b <= a for a, b in zip(self.edges, self.edges[1:])):
            raise ValueError("edges must be strictly ascending")
        if self.edges[-1] != self.threshold_pct:
            raise ValueError("last edge must equal threshold_pct")
        return self

    def class_range(self, class_index: int) -> Tuple[float, float]:
        """[lo, hi) loss range of a class; the final class is [threshold, inf)."""
        lows = (0.0,) + self.edges
        highs = self.edges + (float("inf"),)
        return lows[class_index - 1], highs[class_index - 1]

    def class_names(self) -> List[str]:
        names = []
        for k in range(1, self.n_classes + 1):
            lo, hi = self.class_range(k)
            names.append(f">={lo:g}" if hi == float("inf") else f"{lo:.4g}-{hi:.4g}")
        return names


def build_class_scheme(n_classes: int, threshold_pct: float = SHELF_LIFE_THRESHOLD_PCT) -> ClassScheme:
    """
    Build the equal-width scheme for n_classes.

    Raises:
        UnsupportedClassCount: n_classes outside [2, 8]
    """
    if not MIN_CLASSES <= n_classes <= MAX_CLASSES:
        raise UnsupportedClassCount(n_classes)
    edges = tuple(threshold_pct * k / (n_classes - 1) for k in range(1, n_classes))
    return ClassScheme(n_classes=n_classes, threshold_pct=threshold_pct, edges=edges)


def assign_class(scheme: ClassScheme, weight_loss_pct: float) -> int:
    """Class index (1-based) of a loss value; negatives are clamped to 0."""
    return bisect_right(scheme.edges, max(0.0, weight_loss_pct)) + 1


__all__ = ["MIN_CLASSES", "MAX_CLASSES", "ClassScheme", "build_class_scheme", "assign_class"]
