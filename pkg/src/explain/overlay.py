# -*- coding: utf-8 -*-
"""Heat-map overlays and saliency/mask agreement."""

import math
from typing import Union

import matplotlib

matplotlib.use("Agg")
from matplotlib import colormaps  # noqa: E402

import numpy as np  # noqa: E402
from PIL import Image  # noqa: E402

from ..core.errors import EmptyMask, ShapeMismatch, UsageError  # noqa: E402

COLORMAP = "jet"


def colorize(saliency: np.ndarray, cmap: str = COLORMAP) -> np.ndarray:
    """(H, W) values in [0, 1] -> (H, W, 3) uint8 colors."""
    rgba = colormaps[cmap](np.clip(saliency, 0.0, 1.0))
    return np.rint(rgba[..., :3] * 255).astype(np.uint8)


def resize_map(saliency: np.ndarray, size: tuple) -> np.ndarray:
    """Bilinear resize of a float map to (H, W)."""
    if saliency.shape == tuple(size):
        return saliency
    img = Image.fromarray(saliency.astype(np.float32))
    return np.asarray(img.resize((size[1], size[0]), Image.BILINEAR), dtype=np.float64)


def overlay(
    saliency: np.ndarray,
    image: Union[Image.Image, np.ndarray],
    alpha: float = 0.4,
) -> Image.Image:
    """
    Alpha-blend a color-mapped saliency map onto an RGB image.

    The map is resized to the image when their sizes differ; the output always has
    the image's dimensions. alpha=0 returns the image, alpha=1 the colormap.
    """
    if not 0.0 <= alpha <= 1.0:
        raise UsageError(f"alpha must be in [0, 1], got {alpha}")
    base = np.asarray(image.convert("RGB") if isinstance(image, Image.Image) else image)
    if base.ndim != 3 or base.shape[2] != 3:
        raise ShapeMismatch(f"expected an (H, W, 3) image, got {base.shape}")

    heat = colorize(resize_map(saliency, base.shape[:2])).astype(np.float64)
    blended = (1.0 - alpha) * base.astype(np.float64) + alpha * heat
    return Image.fromarray(np.clip(np.rint(blended), 0, 255).astype(np.uint8))


def localization_score(saliency: np.ndarray, mask: np.ndarray, top_fraction: float = 0.1) -> float:
    """
    Fraction of the top `top_fraction` saliency pixels that fall inside the mask.

    Pixels are ranked by descending saliency; equal values keep pixel-index order.

    Raises:
        EmptyMask: mask has no positive pixel
        ShapeMismatch: mask and saliency differ in shape
    """
    if not 0.0 < top_fraction <= 1.0:
        raise UsageError(f"top_fraction must be in (0, 1], got {top_fraction}")
    mask = np.asarray(mask).astype(bool)
    if mask.shape != saliency.shape:
        raise ShapeMismatch(f"mask {mask.shape} vs saliency {saliency.shape}")
    if not mask.any():
        raise EmptyMask("mask has no positive pixels")

    flat = np.asarray(saliency, dtype=np.float64).ravel()
    order = np.argsort(-flat, kind="stable")
    k = max(1, math.ceil(top_fraction * flat.size - 1e-9))
    return float(mask.ravel()[order[:k]].mean())


def load_mask(path, size: tuple) -> np.ndarray:
    """Binary mask resized (nearest) to (H, W)."""
    with Image.open(path) as img:
        resized = img.convert("L").resize((size[1], size[0]), Image.NEAREST)
    return np.asarray(resized) > 127


__all__ = ["COLORMAP", "colorize", "resize_map", "overlay", "localization_score", "load_mask"]
