# -*- coding: utf-8 -*-
"""
Dataset labeling.

Every manifest observation becomes one LabeledSample carrying its cumulative loss,
remaining shelf life and class index. labels.json is a JSON array of these records.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import MissingArtifacts, MissingSproutLabel
from ..core.logger import logger
from ..data.manifest import DatasetManifest, SampleKey, build_trajectories
from .class_scheme import ClassScheme, assign_class
from .weight_loss import cumulative_weight_loss, estimate_shelf_life, remaining_shelf_life

NON_SPROUT_CLASS = 1
SPROUT_CLASS = 2


class LabeledSample(BaseModel):
    """One labeled observation."""

    model_config = ConfigDict(frozen=True)

    potato_id: str
    day: int = Field(ge=0)
    image_path: str = Field(description="Image path relative to the manifest directory")
    weight_loss_pct: float
    remaining_days: Optional[int] = Field(default=None, ge=0, description="None = censored")
    class_index: int = Field(ge=1)
    scheme_n: int = Field(ge=2)

    @property
    def key(self) -> SampleKey:
        return (self.potato_id, self.day)

    @property
    def censored(self) -> bool:
        return self.remaining_days is None


def label_dataset(
    manifest: DatasetManifest,
    scheme: ClassScheme,
    sprout_mode: bool = False,
) -> List[LabeledSample]:
    """
    Label every observation of a manifest.

    Args:
        manifest: Dataset with at least two observations per potato
        scheme: Loss class scheme (ignored for classes in sprout mode)
        sprout_mode: Classes come from sprout labels (1 = non-sprout, 2 = sprout)

    Returns:
        One LabeledSample per observation, in manifest order

    Raises:
        SinglePointTrajectory, MissingSproutLabel
    """
    trajectories = {t.potato_id: t for t in build_trajectories(manifest)}
    estimates = {pid: estimate_shelf_life(t, scheme.threshold_pct) for pid, t in trajectories.items()}

    censored = sorted(pid for pid, est in estimates.items() if est.censored)
    if censored and not sprout_mode:
        logger.warning(
            f"{len(censored)} potato(es) never reach {scheme.threshold_pct:g}% loss "
            f"(censored): {', '.join(censored[:10])}"
        )

    samples = []
    for obs in manifest.observations:
        loss = cumulative_weight_loss(trajectories[obs.potato_id].w0, obs.weight_g)
        if sprout_mode:
            if obs.sprout_label is None:
                raise MissingSproutLabel(obs.potato_id, obs.day)
            class_index = SPROUT_CLASS if obs.sprout_label else NON_SPROUT_CLASS
        else:
            class_index = assign_class(scheme, loss)

        samples.append(
            LabeledSample(
                potato_id=obs.potato_id,
                day=obs.day,
                image_path=obs.image_ref,
                weight_loss_pct=loss,
                remaining_days=remaining_shelf_life(estimates[obs.potato_id], obs.day),
                class_index=class_index,
                scheme_n=2 if sprout_mode else scheme.n_classes,
            )
        )

    logger.info(
        f"Labeled {len(samples)} samples "
        f"({'sprout' if sprout_mode else f'{scheme.n_classes}-class shelf life'})"
    )
    return samples


def class_summary(samples: List[LabeledSample], n_classes: int) -> List[Dict[str, Any]]:
    """
    Per-class counts with the observed loss and remaining-day ranges.

    Remaining-day ranges are derived from the data, not fixed constants.
    """
    rows = []
    for k in range(1, n_classes + 1):
        members = [s for s in samples if s.class_index == k]
        losses = [s.weight_loss_pct for s in members]
        remaining = [s.remaining_days for s in members if s.remaining_days is not None]
        rows.append({
            "class_index": k,
            "count": len(members),
            "loss_min": min(losses) if losses else None,
            "loss_max": max(losses) if losses else None,
            "remaining_min": min(remaining) if remaining else None,
            "remaining_max": max(remaining) if remaining else None,
            "censored": sum(1 for s in members if s.censored),
        })
    return rows


def write_labels(samples: List[LabeledSample], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump([s.model_dump() for s in samples], f, indent=2)
    logger.info(f"Wrote {len(samples)} labels to {path}")
    return path


def load_labels(path: Path) -> List[LabeledSample]:
    path = Path(path)
    if not path.exists():
        raise MissingArtifacts(f"{path} not found")
    with open(path, "r", encoding="utf-8") as f:
        records = json.load(f)
    return [LabeledSample.model_validate(r) for r in records]


__all__ = [
    "NON_SPROUT_CLASS",
    "SPROUT_CLASS",
    "LabeledSample",
    "label_dataset",
    "class_summary",
    "write_labels",
    "load_labels",
]
