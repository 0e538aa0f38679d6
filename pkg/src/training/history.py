# -*- coding: utf-8 -*-
"""Per-epoch training record."""

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .schedulers import is_improvement

HISTORY_COLUMNS = ["epoch", "train_loss", "train_acc", "val_loss", "val_acc", "lr"]


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    train_acc: float
    val_loss: float
    val_acc: float
    lr: float


@dataclass
class History:
    """Epoch records plus the retained epoch and why training stopped."""

    records: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    stop_reason: Optional[str] = None  # "early_stop" | "max_epochs"

    def append(self, record: EpochRecord) -> None:
        self.records.append(record)

    @property
    def epochs(self) -> int:
        return len(self.records)

    @property
    def lrs(self) -> List[float]:
        return [r.lr for r in self.records]

    def best_record(self) -> Optional[EpochRecord]:
        for r in self.records:
            if r.epoch == self.best_epoch:
                return r
        return None

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(r) for r in self.records], columns=HISTORY_COLUMNS)

    def write_csv(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, lineterminator="\n", float_format="%.8g")
        return path

    @classmethod
    def read_csv(cls, path: Path, best_epoch: Optional[int] = None, threshold: float = 1e-8) -> "History":
        """
        Load history.csv.

        best_epoch comes from metrics.json when known; otherwise it is replayed with the
        trainer's improvement rule.
        """
        frame = pd.read_csv(path)
        records = [
            EpochRecord(
                epoch=int(row.epoch),
                train_loss=float(row.train_loss),
                train_acc=float(row.train_acc),
                val_loss=float(row.val_loss),
                val_acc=float(row.val_acc),
                lr=float(row.lr),
            )
            for row in frame.itertuples(index=False)
        ]
        history = cls(records=records)
        if best_epoch is not None:
            history.best_epoch = int(best_epoch)
        else:
            best = float("inf")
            for r in records:
                if is_improvement(r.val_loss, best, threshold):
                    best, history.best_epoch = r.val_loss, r.epoch
        return history


__all__ = ["HISTORY_COLUMNS", "EpochRecord", "History"]
