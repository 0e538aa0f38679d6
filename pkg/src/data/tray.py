# -*- coding: utf-8 -*-
"""
Tray grid cropping.

Splits a tray photo into a uniform rows x cols grid of per-potato images. Tiles use
floor division; remainder pixels go to the last column and the last row.
"""

from pathlib import Path
from typing import List, Tuple

from PIL import Image

from ..core.errors import EmptyImage, MissingImage, UsageError
from ..core.logger import logger


def _edges(length: int, parts: int) -> List[Tuple[int, int]]:
    step = length // parts
    starts = [i * step for i in range(parts)]
    ends = starts[1:] + [length]
    return list(zip(starts, ends))


def crop_tray_grid(tray_image: Image.Image, rows: int, cols: int) -> List[Image.Image]:
    """
    Crop a tray image into rows x cols tiles in row-major order.

    Args:
        tray_image: Tray photo
        rows: Grid rows (>= 1)
        cols: Grid columns (>= 1)

    Returns:
        rows * cols tiles; last-column tiles are wider and last-row tiles taller by the
        division remainder

    Raises:
        EmptyImage: image has no pixels or is smaller than the grid
    """
    if rows < 1 or cols < 1:
        raise UsageError(f"rows and cols must be >= 1, got {rows}x{cols}")

    width, height = tray_image.size
    if width == 0 or height == 0:
        raise EmptyImage(f"image is {width}x{height}")
    if width < cols or height < rows:
        raise EmptyImage(f"image {width}x{height} too small for a {rows}x{cols} grid")

    tiles = []
    for top, bottom in _edges(height, rows):
        for left, right in _edges(width, cols):
            tiles.append(tray_image.crop((left, top, right, bottom)))
    return tiles


def crop_tray_file(image_path: Path, rows: int, cols: int, out_dir: Path) -> List[Path]:
    """Crop a tray image file and write tiles as <stem>_r<row>c<col>.png."""
    image_path = Path(image_path)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    try:
        with Image.open(image_path) as img:
            tray = img.convert("RGB")
    except OSError as e:
        raise MissingImage(image_path) from e
    tiles = crop_tray_grid(tray, rows, cols)

    written = []
    for index, tile in enumerate(tiles):
        row, col = divmod(index, cols)
        target = out_dir / f"{image_path.stem}_r{row + 1}c{col + 1}.png"
        tile.save(target)
        written.append(target)

    logger.info(f"Cropped {image_path} into {len(written)} tiles under {out_dir}")
    return written


__all__ = ["crop_tray_grid", "crop_tray_file"]
