# -*- coding: utf-8 -*-
"""
Run directory layout.

    runs/<run_id>/config.json
    runs/<run_id>/folds/fold_<k>/{checkpoint.bin,history.csv,confusion.csv,predictions.csv}
    runs/<run_id>/metrics.json
    runs/<run_id>/plots/*.png
    runs/<run_id>/heatmaps/*.png
    runs/<run_id>/report.md
"""

import hashlib
import json
import re
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Optional

from ..core.errors import MissingArtifacts, OutputDirNotWritable
from ..core.logger import logger
from .experiment import ExperimentConfig

CONFIG_FILE = "config.json"
_FOLD_RE = re.compile(r"^fold_(\d+)$")


def make_run_id(seed: int, now: Optional[datetime] = None) -> str:
    """UTC timestamp plus a short hash of the seed, e.g. 20261018T093000Z-3f2a1c."""
    now = now or datetime.now(timezone.utc)
    digest = hashlib.sha256(str(seed).encode()).hexdigest()[:6]
    return f"{now.astimezone(timezone.utc):%Y%m%dT%H%M%SZ}-{digest}"


def create_run_dir(path: Path) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write_test"
        probe.touch()
        probe.unlink()
    except OSError as e:
        raise OutputDirNotWritable(f"{path}: {e}") from e
    logger.info(f"Run directory: {path}")
    return path


def write_run_config(run_dir: Path, config: ExperimentConfig) -> Path:
    return config.save_to_file(Path(run_dir) / CONFIG_FILE)


def load_run_config(run_dir: Path) -> ExperimentConfig:
    path = Path(run_dir) / CONFIG_FILE
    if not path.exists():
        raise MissingArtifacts(f"{path} not found")
    return ExperimentConfig.load_from_file(path)


def fold_dirs(run_dir: Path) -> List[Path]:
    """fold_<k> directories sorted by k."""
    root = Path(run_dir) / "folds"
    if not root.is_dir():
        return []
    found = [(int(m.group(1)), p) for p in root.iterdir() if p.is_dir() and (m := _FOLD_RE.match(p.name))]
    return [p for _, p in sorted(found)]


def fold_index(path: Path) -> int:
    match = _FOLD_RE.match(Path(path).name)
    if not match:
        raise MissingArtifacts(f"{path} is not a fold directory")
    return int(match.group(1))


def read_json(path: Path) -> dict:
    path = Path(path)
    if not path.exists():
        raise MissingArtifacts(f"{path} not found")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


__all__ = [
    "CONFIG_FILE",
    "make_run_id",
    "create_run_dir",
    "write_run_config",
    "load_run_config",
    "fold_dirs",
    "fold_index",
    "read_json",
]
