# -*- coding: utf-8 -*-
"""
Stratified k-fold plans.

Keys are ordered by a hash of the key itself before splitting, so the plan depends on
the sample keys and the seed only, never on input row order.
"""

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Mapping

import numpy as np
from sklearn.model_selection import StratifiedKFold

from ..core.errors import ClassTooSmall
from ..core.logger import logger
from ..data.manifest import SampleKey


@dataclass(frozen=True)
class FoldPlan:
    """Fold index (1..k) of every sample key."""

    k: int
    seed: int
    fold_assignments: Dict[SampleKey, int]

    def test_keys(self, fold: int) -> List[SampleKey]:
        return sorted(key for key, f in self.fold_assignments.items() if f == fold)

    def train_keys(self, fold: int) -> List[SampleKey]:
        return sorted(key for key, f in self.fold_assignments.items() if f != fold)

    def fold_sizes(self) -> List[int]:
        counts = Counter(self.fold_assignments.values())
        return [counts.get(f, 0) for f in range(1, self.k + 1)]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "folds": {
                str(f): [list(key) for key in self.test_keys(f)] for f in range(1, self.k + 1)
            },
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "FoldPlan":
        assignments = {
            (str(pid), int(day)): int(fold)
            for fold, keys in payload["folds"].items()
            for pid, day in keys
        }
        return cls(k=int(payload["k"]), seed=int(payload["seed"]), fold_assignments=assignments)

    def save(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
        return path

    @classmethod
    def load(cls, path: Path) -> "FoldPlan":
        with open(path, "r", encoding="utf-8") as f:
            return cls.from_dict(json.load(f))


def _key_hash(key: SampleKey) -> str:
    return hashlib.sha256(f"{key[0]}\x00{key[1]}".encode()).hexdigest()


def stratified_kfold(labels: Mapping[SampleKey, int], k: int = 5, seed: int = 42) -> FoldPlan:
    """
    Assign every key to one of k stratified folds.

    Args:
        labels: Class index per sample key
        k: Number of folds
        seed: Random seed

    Raises:
        ClassTooSmall: a class has fewer than k samples
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")

    counts = Counter(labels.values())
    for cls, count in sorted(counts.items()):
        if count < k:
            raise ClassTooSmall(cls, count, k)

    keys = sorted(labels, key=_key_hash)
    y = np.array([labels[key] for key in keys])
    splitter = StratifiedKFold(n_splits=k, shuffle=True, random_state=seed)

    assignments: Dict[SampleKey, int] = {}
    for fold, (_, test_idx) in enumerate(splitter.split(np.zeros(len(keys)), y), start=1):
        for i in test_idx:
            assignments[keys[i]] = fold

    plan = FoldPlan(k=k, seed=seed, fold_assignments=assignments)
    logger.debug(f"Fold plan k={k} seed={seed}: sizes {plan.fold_sizes()}")
    return plan


__all__ = ["FoldPlan", "stratified_kfold"]
