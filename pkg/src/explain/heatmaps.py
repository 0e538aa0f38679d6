# -*- coding: utf-8 -*-
"""
Heat-map artifacts.

Writes ``heatmaps/<sample>_<class>.png`` (8-bit RGB overlay) and a JSON sidecar with
the layer, target class, degenerate flag and, when a mask is given, the
localization score.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from PIL import Image

from ..core.logger import logger
from ..models.zoo import ModelHandle
from ..training.augment import build_eval_transform, load_image_tensor
from .gradcam import Saliency, grad_cam
from .overlay import load_mask, localization_score, overlay


@dataclass
class HeatmapResult:
    saliency: Saliency
    png_path: Path
    json_path: Path
    localization_score: Optional[float] = None


def explain_image(
    handle: ModelHandle,
    image_path: Path,
    out_dir: Path,
    target_class: Optional[int] = None,
    layer_id: Optional[str] = None,
    mask_path: Optional[Path] = None,
    alpha: float = 0.4,
    top_fraction: float = 0.1,
) -> HeatmapResult:
    """Grad-CAM one image file and write its overlay and sidecar."""
    image_path = Path(image_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tensor = build_eval_transform(handle.spec.input_size)(load_image_tensor(image_path))
    saliency = grad_cam(handle, tensor, target_class, layer_id)

    score = None
    if mask_path is not None:
        mask = load_mask(mask_path, saliency.upsampled_map.shape)
        score = localization_score(saliency.upsampled_map, mask, top_fraction)

    stem = f"{image_path.stem}_{saliency.target_class}"
    with Image.open(image_path) as img:
        blended = overlay(saliency.upsampled_map, img.convert("RGB"), alpha)
    png_path = out_dir / f"{stem}.png"
    blended.save(png_path)

    sidecar = saliency.to_dict()
    if score is not None:
        sidecar["localization_score"] = score
    json_path = out_dir / f"{stem}.json"
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(sidecar, f, indent=2)

    logger.info(
        f"Heat map for {image_path.name} (class {saliency.target_class}, layer {saliency.layer_id}) "
        f"written to {png_path}"
    )
    return HeatmapResult(saliency=saliency, png_path=png_path, json_path=json_path, localization_score=score)


__all__ = ["HeatmapResult", "explain_image"]
