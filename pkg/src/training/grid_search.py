# -*- coding: utf-8 -*-
"""
Exhaustive hyperparameter grid search.

Every point of the Cartesian grid is cross-validated. The best point has the highest
mean accuracy; ties go to the lower std, then to the earlier grid point.
"""

import itertools
import json
import shutil
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from ..core.config import settings
from ..core.errors import GridTooLarge, UsageError
from ..core.logger import logger
from ..evaluation.aggregate import CVSummary
from ..models.spec import HEAD_VARIANTS, HeadConfig, ModelSpec
from .config import TrainConfig
from .cross_validation import METRICS_FILE, JobDoneCallback, cross_validate
from .data import TrainingSample
from .trainer import ProgressCallback

DEFAULT_GRID: Dict[str, List[Any]] = {
    "head": list(HEAD_VARIANTS),
    "learning_rate": [1e-3, 1e-4],
}


@dataclass
class GridPointResult:
    """CV outcome of one grid point."""

    index: int
    params: Dict[str, Any]
    summary: CVSummary
    head_label: str

    @property
    def mean_accuracy(self) -> float:
        return self.summary.mean("accuracy")

    @property
    def std_accuracy(self) -> float:
        return self.summary.std("accuracy")

    def to_row(self) -> Dict[str, Any]:
        return {
            "point": self.index,
            **self.params,
            "head_label": self.head_label,
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
        }


@dataclass
class GridSearchResult:
    best: GridPointResult
    best_spec: ModelSpec
    best_config: TrainConfig
    points: List[GridPointResult]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([p.to_row() for p in self.points])

    def save(self, run_dir: Path) -> Tuple[Path, Path]:
        run_dir = Path(run_dir)
        csv_path = run_dir / "grid_results.csv"
        self.to_frame().to_csv(csv_path, index=False, lineterminator="\n", float_format="%.8g")
        json_path = run_dir / "grid_results.json"
        with open(json_path, "w", encoding="utf-8") as f:
            json.dump(
                {
                    "best_point": self.best.index,
                    "best_params": self.best.params,
                    "points": [
                        {**p.to_row(), "summary": p.summary.to_dict()} for p in self.points
                    ],
                },
                f,
                indent=2,
            )
        return csv_path, json_path


def expand_grid(grid: Mapping[str, Sequence[Any]], cap: Optional[int] = None) -> List[Dict[str, Any]]:
    """
    Cartesian product of the grid, in key order then candidate order.

    Raises:
        UsageError: empty grid or empty candidate list
        GridTooLarge: more points than the cap
    """
    if not grid:
        raise UsageError("grid is empty")
    for name, candidates in grid.items():
        if not candidates:
            raise UsageError(f"grid key {name!r} has no candidates")

    cap = settings.grid_cap if cap is None else cap
    size = 1
    for candidates in grid.values():
        size *= len(candidates)
    if size > cap:
        raise GridTooLarge(size, cap)

    names = list(grid)
    return [dict(zip(names, values)) for values in itertools.product(*(grid[n] for n in names))]


def apply_grid_point(
    spec: ModelSpec, config: TrainConfig, point: Mapping[str, Any]
) -> Tuple[ModelSpec, TrainConfig]:
    """Spec and config with one grid point's values substituted."""
    head_updates: Dict[str, Any] = {}
    spec_updates: Dict[str, Any] = {}
    config_updates: Dict[str, Any] = {}

    for name, value in point.items():
        if name == "head":
            head_updates["hidden_widths"] = HeadConfig.from_name(str(value), spec.n_classes).hidden_widths
        elif name == "dropout_rate":
            head_updates["dropout_rate"] = value
        elif name == "finetune":
            spec_updates["finetune"] = value
        elif name in TrainConfig.model_fields:
            config_updates[name] = value
        else:
            raise UsageError(f"unknown grid key {name!r}")

    if head_updates:
        head = HeadConfig.model_validate({**spec.head.model_dump(), **head_updates})
        spec_updates["head"] = head
    new_spec = ModelSpec.model_validate({**spec.model_dump(), **spec_updates}) if spec_updates else spec
    new_config = (
        TrainConfig.model_validate({**config.model_dump(), **config_updates})
        if config_updates
        else config
    )
    return new_spec, new_config


def select_best(points: Sequence[GridPointResult]) -> GridPointResult:
    return min(points, key=lambda p: (-p.mean_accuracy, p.std_accuracy, p.index))


def grid_search(
    spec: ModelSpec,
    grid: Optional[Mapping[str, Sequence[Any]]],
    samples: Sequence[TrainingSample],
    config: TrainConfig,
    run_dir: Path,
    progress_callback: Optional[ProgressCallback] = None,
    job_done: Optional[JobDoneCallback] = None,
) -> GridSearchResult:
    """
    Cross-validate every grid point and keep the best.

    Each point runs under ``<run_dir>/grid/point_<i>/``; the best point's folds and
    metrics.json are copied to the run directory root.

    Args:
        spec: Template model specification
        grid: Hyperparameter -> candidates (None = heads x {1e-3, 1e-4})
        samples: Labeled samples
        config: Template training protocol
        run_dir: Run directory

    Returns:
        GridSearchResult
    """
    grid = dict(grid) if grid else dict(DEFAULT_GRID)
    points = expand_grid(grid)
    run_dir = Path(run_dir)
    logger.info(
        f"Grid search: {len(points)} points x {config.k_folds} folds "
        f"over {', '.join(grid)}"
    )

    results: List[GridPointResult] = []
    resolved: List[Tuple[ModelSpec, TrainConfig]] = []
    for index, point in enumerate(points, start=1):
        point_spec, point_config = apply_grid_point(spec, config, point)
        resolved.append((point_spec, point_config))
        cv = cross_validate(
            point_spec,
            samples,
            point_config,
            run_dir / "grid" / f"point_{index}",
            progress_callback=progress_callback,
            job_done=job_done,
            keep_models=False,
            job_prefix=f"point {index} ",
        )
        results.append(
            GridPointResult(index=index, params=dict(point), summary=cv.summary,
                            head_label=point_spec.head.label)
        )
        logger.info(
            f"Grid point {index}/{len(points)} {point}: "
            f"{cv.summary.mean():.4f} ± {cv.summary.std():.4f}"
        )

    best = select_best(results)
    best_spec, best_config = resolved[best.index - 1]
    result = GridSearchResult(best=best, best_spec=best_spec, best_config=best_config, points=results)
    result.save(run_dir)

    best_dir = run_dir / "grid" / f"point_{best.index}"
    shutil.copytree(best_dir / "folds", run_dir / "folds", dirs_exist_ok=True)
    shutil.copy2(best_dir / METRICS_FILE, run_dir / METRICS_FILE)
    logger.info(f"Best grid point {best.index}: {best.params} ({best.mean_accuracy:.4f})")
    return result


__all__ = [
    "DEFAULT_GRID",
    "GridPointResult",
    "GridSearchResult",
    "expand_grid",
    "apply_grid_point",
    "select_best",
    "grid_search",
]
