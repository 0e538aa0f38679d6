# -*- coding: utf-8 -*-
"""
Stratified holdout split.

Per-class test counts are round(class_size * test_fraction), nudged one sample at a
time so the total equals round(N * test_fraction).
"""

import math
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping

import numpy as np

from ..core.errors import ClassTooSmall, DataError, UsageError
from ..core.logger import logger
from .manifest import DatasetManifest, SampleKey


@dataclass(frozen=True)
class DatasetSplit:
    """Disjoint train/test key sets."""

    train_ids: FrozenSet[SampleKey]
    test_ids: FrozenSet[SampleKey]
    seed: int

    def to_dict(self) -> Dict[str, List[List]]:
        return {
            "seed": self.seed,
            "train": [list(k) for k in sorted(self.train_ids)],
            "test": [list(k) for k in sorted(self.test_ids)],
        }


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _class_test_counts(sizes: Dict[int, int], test_fraction: float) -> Dict[int, int]:
    total = sum(sizes.values())
    target = _round_half_up(total * test_fraction)
    exact = {cls: n * test_fraction for cls, n in sizes.items()}
    counts = {cls: min(max(_round_half_up(v), 0), sizes[cls] - 1) for cls, v in exact.items()}

    # Largest shortfall gets the extra sample first; ties by class index
    while sum(counts.values()) < target:
        candidates = [c for c in sorted(sizes) if counts[c] < sizes[c] - 1]
        if not candidates:
            break
        best = max(candidates, key=lambda c: (exact[c] - counts[c], -c))
        counts[best] += 1
    while sum(counts.values()) > target:
        candidates = [c for c in sorted(sizes) if counts[c] > 0]
        if not candidates:
            break
        best = max(candidates, key=lambda c: (counts[c] - exact[c], -c))
        counts[best] -= 1
    return counts


def stratified_holdout(
    stratify_by: Mapping[SampleKey, int],
    test_fraction: float,
    seed: int,
) -> DatasetSplit:
    """
    Stratified split of labeled keys.

    Raises:
        ClassTooSmall: a class has fewer than 2 samples
    """
    if not 0.0 < test_fraction < 1.0:
        raise UsageError(f"test_fraction must be in (0, 1), got {test_fraction}")

    by_class: Dict[int, List[SampleKey]] = {}
    for key, cls in stratify_by.items():
        by_class.setdefault(int(cls), []).append(key)

    for cls, keys in sorted(by_class.items()):
        if len(keys) < 2:
            raise ClassTooSmall(cls, len(keys), 2)

    counts = _class_test_counts({c: len(k) for c, k in by_class.items()}, test_fraction)

    rng = np.random.default_rng(seed)
    test: List[SampleKey] = []
    train: List[SampleKey] = []
    for cls in sorted(by_class):
        keys = sorted(by_class[cls])
        order = rng.permutation(len(keys))
        chosen = {keys[i] for i in order[: counts[cls]]}
        test.extend(k for k in keys if k in chosen)
        train.extend(k for k in keys if k not in chosen)

    logger.info(
        f"Holdout split (seed={seed}): {len(train)} train / {len(test)} test, "
        f"per-class test counts {dict(sorted(counts.items()))}"
    )
    return DatasetSplit(train_ids=frozenset(train), test_ids=frozenset(test), seed=seed)


def holdout_split(
    manifest: DatasetManifest,
    test_fraction: float,
    seed: int,
    stratify_by: Mapping[SampleKey, int],
) -> DatasetSplit:
    """
    Stratified train/test split over the manifest's observation keys.

    Args:
        manifest: Dataset to split
        test_fraction: Share of samples held out, 0 < f < 1
        seed: Random seed; the same seed always yields the same split
        stratify_by: Class index of every manifest key

    Raises:
        ClassTooSmall: a class has fewer than 2 samples
    """
    labels: Dict[SampleKey, int] = {}
    for key in manifest.keys():
        if key not in stratify_by:
            raise DataError(f"no class label for (potato_id={key[0]}, day={key[1]})")
        labels[key] = int(stratify_by[key])
    return stratified_holdout(labels, test_fraction, seed)


__all__ = ["DatasetSplit", "stratified_holdout", "holdout_split"]
