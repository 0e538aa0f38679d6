# -*- coding: utf-8 -*-
"""
Synthetic dataset generator.

Output layout:
    <out>/images/<potato_id>_<day>.png
    <out>/masks/<potato_id>_<day>.png     (8-bit, 0/255)
    <out>/manifest.csv
    <out>/ground_truth.json
"""

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
from PIL import Image
from pydantic import BaseModel, Field

from ..core.config import settings
from ..core.errors import OutputDirNotWritable
from ..core.logger import logger
from ..data.manifest import DatasetManifest, PotatoObservation, write_manifest
from ..labeling.weight_loss import cumulative_weight_loss
from .config import SynthConfig
from .render import AgeState, render_potato_image
from .trajectory import PotatoParams, draw_potato_params, simulate_weight_trajectory


class GroundTruthRecord(BaseModel):
    """What the generator drew for one observation."""

    potato_id: str
    day: int
    weight_loss_pct: float
    sprouted: bool
    sprout_count: int = Field(ge=0)
    sprout_length: float = Field(ge=0)
    shelf_life_day: float = Field(description="Noise-free day of 10% loss")
    image_path: str
    mask_path: str


def sprout_state(config: SynthConfig, params: PotatoParams, day: int) -> Tuple[int, float]:
    """(count, length) of sprouts at a day; both non-decreasing in day."""
    if day < params.sprout_onset:
        return 0, 0.0
    age = day - params.sprout_onset
    count = min(config.max_sprouts, 1 + int(age // config.sprout_spacing_days))
    length = min(0.14 * config.image_size, 6.0 + config.sprout_growth_px_per_day * age)
    return count, float(length)


def _generate_potato(
    config: SynthConfig, potato_index: int, out_dir: Path
) -> Tuple[List[PotatoObservation], List[GroundTruthRecord]]:
    params = draw_potato_params(config, potato_index)
    trajectory = simulate_weight_trajectory(config, potato_index)
    tray_id = f"T{potato_index // config.potatoes_per_tray + 1:02d}"

    observations, truths = [], []
    for day, weight in trajectory.points:
        loss = cumulative_weight_loss(trajectory.w0, weight)
        count, length = sprout_state(config, params, day)
        image, mask = render_potato_image(
            AgeState(weight_loss_pct=max(0.0, loss), sprout_count=count, sprout_length=length),
            seed=params.render_seed,
            size=config.image_size,
            wrinkles_per_pct=config.wrinkles_per_pct,
        )

        name = f"{params.potato_id}_{day}.png"
        image.save(out_dir / "images" / name)
        Image.fromarray((mask * 255).astype(np.uint8)).save(out_dir / "masks" / name)

        observations.append(
            PotatoObservation(
                potato_id=params.potato_id,
                tray_id=tray_id,
                day=day,
                image_ref=f"images/{name}",
                weight_g=weight,
                sprout_label=count > 0,
            )
        )
        truths.append(
            GroundTruthRecord(
                potato_id=params.potato_id,
                day=day,
                weight_loss_pct=loss,
                sprouted=bool(mask.any()),
                sprout_count=count,
                sprout_length=length,
                shelf_life_day=params.shelf_life_day,
                image_path=f"images/{name}",
                mask_path=f"masks/{name}",
            )
        )
    return observations, truths


def generate_synthetic_dataset(
    config: SynthConfig,
    out_dir: Path,
    max_workers: Optional[int] = None,
) -> Tuple[DatasetManifest, List[GroundTruthRecord]]:
    """
    Generate images, masks, manifest.csv and ground_truth.json under out_dir.

    Args:
        config: Generator configuration
        out_dir: Output directory (created if missing)
        max_workers: Parallel potato workers (defaults to settings.max_parallel_jobs)

    Returns:
        (manifest, ground-truth records), both in potato then day order

    Raises:
        OutputDirNotWritable: out_dir cannot be created or written
    """
    out_dir = Path(out_dir)
    try:
        (out_dir / "images").mkdir(parents=True, exist_ok=True)
        (out_dir / "masks").mkdir(parents=True, exist_ok=True)
        probe = out_dir / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as e:
        raise OutputDirNotWritable(f"{out_dir}: {e}") from e

    logger.info(
        f"Generating {config.n_potatoes} synthetic potatoes x {len(config.days)} days "
        f"(seed={config.seed}) into {out_dir}"
    )

    workers = max_workers or settings.max_parallel_jobs
    with ThreadPoolExecutor(max_workers=workers) as executor:
        results = list(
            executor.map(lambda i: _generate_potato(config, i, out_dir), range(config.n_potatoes))
        )

    observations = [obs for obs_list, _ in results for obs in obs_list]
    truths = [t for _, t_list in results for t in t_list]

    manifest = DatasetManifest(root_dir=out_dir, observations=observations)
    write_manifest(manifest, out_dir / "manifest.csv")
    with open(out_dir / "ground_truth.json", "w", encoding="utf-8") as f:
        json.dump(
            {"config": config.model_dump(), "samples": [t.model_dump() for t in truths]},
            f,
            indent=2,
        )

    sprouted = sum(t.sprouted for t in truths)
    logger.info(f"Synthetic dataset ready: {len(observations)} observations, {sprouted} sprouted")
    return manifest, truths


def load_ground_truth(path: Path) -> List[GroundTruthRecord]:
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    return [GroundTruthRecord.model_validate(r) for r in payload["samples"]]


__all__ = [
    "GroundTruthRecord",
    "sprout_state",
    "generate_synthetic_dataset",
    "load_ground_truth",
]
