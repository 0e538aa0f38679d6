# -*- coding: utf-8 -*-
"""
Per-fold prediction tables.

predictions.csv holds one row per held-out sample:
potato_id,day,true_class,pred_class,p_1..p_n (classes 1-based).
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence

import numpy as np
import pandas as pd

from ..core.errors import MissingArtifacts
from ..data.manifest import SampleKey

BASE_COLUMNS = ["potato_id", "day", "true_class", "pred_class"]


@dataclass
class FoldPredictions:
    keys: List[SampleKey]
    true_classes: np.ndarray
    probabilities: np.ndarray

    @property
    def n_classes(self) -> int:
        return int(self.probabilities.shape[1])

    @property
    def pred_classes(self) -> np.ndarray:
        """argmax + 1; ties resolve to the lowest class index."""
        if len(self.keys) == 0:
            return np.zeros(0, dtype=int)
        return self.probabilities.argmax(axis=1) + 1

    def to_frame(self) -> pd.DataFrame:
        frame = pd.DataFrame(
            {
                "potato_id": [k[0] for k in self.keys],
                "day": [k[1] for k in self.keys],
                "true_class": self.true_classes.astype(int),
                "pred_class": self.pred_classes.astype(int),
            }
        )
        for c in range(self.n_classes):
            frame[f"p_{c + 1}"] = self.probabilities[:, c]
        return frame

    def write_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n", float_format="%.8g")
        return path

    @classmethod
    def read_csv(cls, path: Path) -> "FoldPredictions":
        path = Path(path)
        if not path.exists():
            raise MissingArtifacts(f"{path} not found")
        frame = pd.read_csv(path, dtype={"potato_id": str})
        prob_cols = [c for c in frame.columns if c.startswith("p_")]
        if list(frame.columns[:4]) != BASE_COLUMNS or not prob_cols:
            raise MissingArtifacts(f"{path}: unexpected header {list(frame.columns)}")
        return cls(
            keys=[(str(p), int(d)) for p, d in zip(frame["potato_id"], frame["day"])],
            true_classes=frame["true_class"].to_numpy(dtype=int),
            probabilities=frame[prob_cols].to_numpy(dtype=float).reshape(len(frame), len(prob_cols)),
        )


def build_predictions(
    keys: Sequence[SampleKey], true_classes: Sequence[int], probabilities: np.ndarray
) -> FoldPredictions:
    return FoldPredictions(
        keys=list(keys),
        true_classes=np.asarray(true_classes, dtype=int),
        probabilities=np.asarray(probabilities, dtype=float),
    )


__all__ = ["BASE_COLUMNS", "FoldPredictions", "build_predictions"]
