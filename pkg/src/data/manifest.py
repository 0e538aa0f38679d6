# -*- coding: utf-8 -*-
"""
Dataset Manifest

CSV manifest ingestion for per-potato image/weight observations, and the
per-potato weight trajectories built from it.

manifest.csv header (exact): potato_id,tray_id,day,image_path,weight_g,sprout
"""

import math
import re
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Set, Tuple

import pandas as pd
from PIL import Image, UnidentifiedImageError
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.errors import (
    DuplicateKey,
    ImageTooSmall,
    MalformedRow,
    MissingArtifacts,
    MissingImage,
    SinglePointTrajectory,
)
from ..core.logger import logger

MANIFEST_COLUMNS = ["potato_id", "tray_id", "day", "image_path", "weight_g", "sprout"]
MIN_IMAGE_SIDE = 64

_DAY = re.compile(r"[0-9]+")

# (potato_id, day) identifies one observation everywhere in the pipeline
SampleKey = Tuple[str, int]


class PotatoObservation(BaseModel):
    """One dated image + weight of a single potato."""

    model_config = ConfigDict(frozen=True)

    potato_id: str = Field(min_length=1)
    tray_id: str = Field(default="")
    day: int = Field(ge=0, description="Days since storage start")
    image_ref: str = Field(description="Image path relative to the manifest directory")
    weight_g: float = Field(gt=0, description="Weight in grams")
    sprout_label: Optional[bool] = Field(default=None, description="True = sprouted")

    @property
    def key(self) -> SampleKey:
        return (self.potato_id, self.day)


class WeightTrajectory(BaseModel):
    """Dated weights of one potato, ascending by day."""

    model_config = ConfigDict(frozen=True)

    potato_id: str
    points: Tuple[Tuple[int, float], ...]

    @model_validator(mode="after")
    def _check_points(self) -> "WeightTrajectory":
        if len(self.points) < 2:
            raise SinglePointTrajectory(self.potato_id)
        days = [d for d, _ in self.points]
        if any(b <= a for a, b in zip(days, days[1:])):
            raise ValueError(f"days of {self.potato_id} must be strictly increasing")
        return self

    @property
    def w0(self) -> float:
        """Weight at the earliest recorded day."""
        return self.points[0][1]

    @property
    def days(self) -> List[int]:
        return [d for d, _ in self.points]

    @property
    def weights(self) -> List[float]:
        return [w for _, w in self.points]


class DatasetManifest(BaseModel):
    """All observations of a dataset, with image paths relative to root_dir."""

    root_dir: Path
    observations: List[PotatoObservation] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_unique(self) -> "DatasetManifest":
        seen: Set[SampleKey] = set()
        for obs in self.observations:
            if obs.key in seen:
                raise DuplicateKey(obs.potato_id, obs.day)
            seen.add(obs.key)
        return self

    def image_path(self, obs: PotatoObservation) -> Path:
        return self.root_dir / obs.image_ref

    def keys(self) -> List[SampleKey]:
        return [obs.key for obs in self.observations]

    def by_key(self) -> Dict[SampleKey, PotatoObservation]:
        return {obs.key: obs for obs in self.observations}

    def potato_ids(self) -> List[str]:
        """Potato ids in order of first appearance."""
        return list(dict.fromkeys(obs.potato_id for obs in self.observations))

    def subset(self, keys: Iterable[SampleKey]) -> "DatasetManifest":
        wanted = set(keys)
        return DatasetManifest(
            root_dir=self.root_dir,
            observations=[obs for obs in self.observations if obs.key in wanted],
        )


def _parse_row(line: int, row: Dict[str, str]) -> PotatoObservation:
    potato_id = row["potato_id"].strip()
    if not potato_id:
        raise MalformedRow(line, "empty potato_id")

    day_text = row["day"].strip()
    if not _DAY.fullmatch(day_text):
        raise MalformedRow(line, f"day must be a non-negative integer, got {day_text!r}")

    try:
        weight = float(row["weight_g"].strip())
    except ValueError:
        raise MalformedRow(line, f"weight_g is not a decimal: {row['weight_g']!r}")
    if not (math.isfinite(weight) and weight > 0):
        raise MalformedRow(line, f"weight_g must be a positive finite number, got {weight}")

    sprout_text = row["sprout"].strip()
    if sprout_text not in ("", "0", "1"):
        raise MalformedRow(line, f"sprout must be 0, 1 or empty, got {sprout_text!r}")

    image_ref = row["image_path"].strip()
    if not image_ref:
        raise MalformedRow(line, "empty image_path")

    return PotatoObservation(
        potato_id=potato_id,
        tray_id=row["tray_id"].strip(),
        day=int(day_text),
        image_ref=image_ref,
        weight_g=weight,
        sprout_label=None if sprout_text == "" else sprout_text == "1",
    )


def _check_image(path: Path) -> None:
    try:
        with Image.open(path) as img:
            size = img.size
            img.verify()
    except (OSError, UnidentifiedImageError) as e:
        raise MissingImage(path) from e
    if min(size) < MIN_IMAGE_SIDE:
        raise ImageTooSmall(path, size, MIN_IMAGE_SIDE)


def load_manifest(path: Path, check_images: bool = True) -> DatasetManifest:
    """
    Load and validate a manifest CSV.

    Args:
        path: manifest.csv location; image paths resolve relative to its directory
        check_images: Open every referenced image to confirm it is readable

    Returns:
        Validated DatasetManifest

    Raises:
        MalformedRow, DuplicateKey, MissingImage, ImageTooSmall, MissingArtifacts
    """
    path = Path(path)
    if not path.exists():
        raise MissingArtifacts(f"manifest {path} not found")
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except pd.errors.ParserError as e:
        raise MalformedRow(0, f"unparsable CSV: {e}") from e
    except pd.errors.EmptyDataError as e:
        raise MalformedRow(1, "missing header row") from e

    if list(frame.columns) != MANIFEST_COLUMNS:
        raise MalformedRow(1, f"header must be {','.join(MANIFEST_COLUMNS)}")

    observations: List[PotatoObservation] = []
    seen: Set[SampleKey] = set()
    # line 1 is the header
    for offset, row in enumerate(frame.to_dict(orient="records")):
        obs = _parse_row(offset + 2, row)
        if obs.key in seen:
            raise DuplicateKey(obs.potato_id, obs.day)
        seen.add(obs.key)
        observations.append(obs)

    manifest = DatasetManifest(root_dir=path.parent, observations=observations)

    if check_images:
        for obs in observations:
            _check_image(manifest.image_path(obs))

    logger.info(
        f"Loaded manifest {path}: {len(observations)} observations, "
        f"{len(manifest.potato_ids())} potatoes"
    )
    return manifest


def write_manifest(manifest: DatasetManifest, path: Path) -> Path:
    """Write a manifest CSV in the canonical column order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    rows = [
        {
            "potato_id": obs.potato_id,
            "tray_id": obs.tray_id,
            "day": str(obs.day),
            "image_path": Path(obs.image_ref).as_posix(),
            "weight_g": repr(obs.weight_g),
            "sprout": "" if obs.sprout_label is None else str(int(obs.sprout_label)),
        }
        for obs in manifest.observations
    ]
    pd.DataFrame(rows, columns=MANIFEST_COLUMNS).to_csv(
        path, index=False, encoding="utf-8", lineterminator="\n"
    )
    logger.debug(f"Wrote manifest {path} ({len(rows)} rows)")
    return path


def build_trajectories(manifest: DatasetManifest) -> List[WeightTrajectory]:
    """
    Group observations into one weight trajectory per potato.

    Raises:
        SinglePointTrajectory: a potato has fewer than two observations
    """
    grouped: Dict[str, List[Tuple[int, float]]] = {}
    for obs in manifest.observations:
        grouped.setdefault(obs.potato_id, []).append((obs.day, obs.weight_g))

    return [
        WeightTrajectory(potato_id=potato_id, points=tuple(sorted(points)))
        for potato_id, points in grouped.items()
    ]


__all__ = [
    "MANIFEST_COLUMNS",
    "SampleKey",
    "PotatoObservation",
    "WeightTrajectory",
    "DatasetManifest",
    "load_manifest",
    "write_manifest",
    "build_trajectories",
]
