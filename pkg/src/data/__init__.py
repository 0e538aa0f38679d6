"""Dataset ingestion, tray cropping and holdout splits."""

from .manifest import (
    MANIFEST_COLUMNS,
    DatasetManifest,
    PotatoObservation,
    SampleKey,
    WeightTrajectory,
    build_trajectories,
    load_manifest,
    write_manifest,
)
from .splits import DatasetSplit, holdout_split, stratified_holdout
from .tray import crop_tray_file, crop_tray_grid

__all__ = [
    "MANIFEST_COLUMNS",
    "DatasetManifest",
    "PotatoObservation",
    "SampleKey",
    "WeightTrajectory",
    "build_trajectories",
    "load_manifest",
    "write_manifest",
    "DatasetSplit",
    "holdout_split",
    "stratified_holdout",
    "crop_tray_file",
    "crop_tray_grid",
]
