# -*- coding: utf-8 -*-
"""
Synthetic potato renderer.

A speckled tinted ellipse on a dark background. Wrinkle lines increase with weight
loss; sprouts are bright curves growing outward from the tuber edge. All geometry is
drawn from the seed up front, so a later age state draws a superset of an earlier one.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from PIL import Image, ImageDraw

BACKGROUND = (18, 18, 22)
WRINKLE_COLOR = (70, 45, 25)
SPROUT_COLOR = (235, 230, 190)
MAX_WRINKLES = 60
MAX_SPROUT_SLOTS = 6
SPROUT_WIDTH = 3


@dataclass(frozen=True)
class AgeState:
    """Visual age of a potato at one observation."""

    weight_loss_pct: float
    sprout_count: int = 0
    sprout_length: float = 0.0


@dataclass(frozen=True)
class _Geometry:
    center: Tuple[float, float]
    axes: Tuple[float, float]
    tint: Tuple[int, int, int]
    speckles: List[Tuple[float, float, float]]
    wrinkles: List[List[Tuple[float, float]]]
    sprout_angles: List[float]
    sprout_bends: List[float]


def _draw_geometry(seed: int, size: int) -> _Geometry:
    rng = np.random.default_rng(seed)
    cx, cy = size / 2 + rng.uniform(-0.03, 0.03, size=2) * size
    a = size * rng.uniform(0.26, 0.32)
    b = size * rng.uniform(0.20, 0.25)
    tint = tuple(int(c) for c in np.array([200, 165, 110]) + rng.integers(-15, 16, size=3))

    speckles = []
    for _ in range(40):
        r, t = np.sqrt(rng.uniform(0, 0.85)), rng.uniform(0, 2 * np.pi)
        speckles.append((cx + r * a * np.cos(t), cy + r * b * np.sin(t), rng.uniform(1.0, 2.5)))

    wrinkles = []
    for _ in range(MAX_WRINKLES):
        r, t = np.sqrt(rng.uniform(0, 0.36)), rng.uniform(0, 2 * np.pi)
        x, y = cx + r * a * np.cos(t), cy + r * b * np.sin(t)
        heading = rng.uniform(0, np.pi)
        seg = size * 0.03
        bend = rng.uniform(-0.8, 0.8)
        points = [(x, y)]
        for step in range(2):
            x += seg * np.cos(heading + step * bend)
            y += seg * np.sin(heading + step * bend)
            points.append((x, y))
        wrinkles.append(points)

    start = rng.uniform(0, 2 * np.pi)
    slot = 2 * np.pi / MAX_SPROUT_SLOTS
    angles = [start + k * slot + rng.uniform(-0.12, 0.12) for k in range(MAX_SPROUT_SLOTS)]
    bends = list(rng.uniform(-0.6, 0.6, size=MAX_SPROUT_SLOTS))

    return _Geometry((cx, cy), (a, b), tint, speckles, wrinkles, angles, bends)


def wrinkle_count(weight_loss_pct: float, wrinkles_per_pct: float = 3.0) -> int:
    return min(MAX_WRINKLES, int(round(max(0.0, weight_loss_pct) * wrinkles_per_pct)))


def _sprout_polyline(geo: _Geometry, k: int, length: float, size: int) -> List[Tuple[float, float]]:
    (cx, cy), (a, b) = geo.center, geo.axes
    theta = geo.sprout_angles[k]
    x, y = cx + a * np.cos(theta), cy + b * np.sin(theta)
    normal = np.array([np.cos(theta) / a, np.sin(theta) / b])
    heading = float(np.arctan2(normal[1], normal[0]))
    curvature = geo.sprout_bends[k] / (0.15 * size)

    # Unit steps: a longer sprout extends the shorter one's polyline
    points = [(x, y)]
    for step in range(int(round(length))):
        angle = heading + curvature * step
        x += np.cos(angle)
        y += np.sin(angle)
        points.append((x, y))
    return points


def render_potato_image(
    age_state: AgeState,
    seed: int,
    size: int = 250,
    wrinkles_per_pct: float = 3.0,
) -> Tuple[Image.Image, np.ndarray]:
    """
    Render one potato image and its sprout mask.

    Args:
        age_state: Weight loss and sprout state to draw
        seed: Potato geometry seed (tuber shape, speckles, wrinkle and sprout sites)
        size: Square image side
        wrinkles_per_pct: Wrinkle lines per percent of weight loss

    Returns:
        (RGB image, boolean mask of sprout pixels)
    """
    if age_state.weight_loss_pct < 0:
        raise ValueError("weight_loss_pct must be >= 0")

    geo = _draw_geometry(seed, size)
    (cx, cy), (a, b) = geo.center, geo.axes
    shade = 1.0 - 0.015 * min(age_state.weight_loss_pct, 20.0)
    body = tuple(int(c * shade) for c in geo.tint)
    speck = tuple(int(c * 0.8 * shade) for c in geo.tint)

    image = Image.new("RGB", (size, size), BACKGROUND)
    draw = ImageDraw.Draw(image)
    draw.ellipse((cx - a, cy - b, cx + a, cy + b), fill=body)
    for x, y, r in geo.speckles:
        draw.ellipse((x - r, y - r, x + r, y + r), fill=speck)
    for points in geo.wrinkles[: wrinkle_count(age_state.weight_loss_pct, wrinkles_per_pct)]:
        draw.line(points, fill=WRINKLE_COLOR, width=1)

    mask_img = Image.new("L", (size, size), 0)
    if age_state.sprout_count > 0:
        # a sprouted potato always shows at least a one-pixel stub
        length = max(1.0, age_state.sprout_length)
        mask_draw = ImageDraw.Draw(mask_img)
        for k in range(min(age_state.sprout_count, MAX_SPROUT_SLOTS)):
            points = _sprout_polyline(geo, k, length, size)
            mask_draw.line(points, fill=255, width=SPROUT_WIDTH)

    mask = np.asarray(mask_img) > 0
    pixels = np.asarray(image).copy()
    pixels[mask] = SPROUT_COLOR
    return Image.fromarray(pixels), mask


__all__ = [
    "AgeState",
    "BACKGROUND",
    "WRINKLE_COLOR",
    "SPROUT_COLOR",
    "MAX_WRINKLES",
    "MAX_SPROUT_SLOTS",
    "wrinkle_count",
    "render_potato_image",
]
