"""Shared fixtures: small synthetic datasets generated on the fly."""

import os

os.environ.setdefault("TUBER_TEST_MODE", "true")
os.environ.setdefault("TUBER_DISABLE_LOGGING", "true")

from pathlib import Path  # noqa: E402

import numpy as np  # noqa: E402
import pytest  # noqa: E402
from PIL import Image  # noqa: E402

from src.data.manifest import MANIFEST_COLUMNS  # noqa: E402
from src.synth.config import SynthPresets  # noqa: E402
from src.synth.generator import generate_synthetic_dataset  # noqa: E402


def write_csv(path: Path, rows, header=MANIFEST_COLUMNS) -> Path:
    lines = [",".join(header)] + [",".join(str(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_image(path: Path, size=(64, 64), color=(120, 90, 60)) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    Image.new("RGB", size, color).save(path)
    return path


@pytest.fixture
def three_day_manifest(tmp_path):
    """One potato at days 0/10/20 weighing 100/96/89 g."""
    for day in (0, 10, 20):
        write_image(tmp_path / "images" / f"P1_{day}.png")
    return write_csv(
        tmp_path / "manifest.csv",
        [
            ["P1", "T1", 0, "images/P1_0.png", 100, 0],
            ["P1", "T1", 10, "images/P1_10.png", 96, 0],
            ["P1", "T1", 20, "images/P1_20.png", 89, 1],
        ],
    )


@pytest.fixture(scope="session")
def tiny_dataset(tmp_path_factory):
    """4 potatoes x 9 days of 64 px synthetic images."""
    out = tmp_path_factory.mktemp("tiny_synth")
    manifest, records = generate_synthetic_dataset(SynthPresets.tiny(seed=0), out, max_workers=1)
    return manifest, records


@pytest.fixture
def rng():
    return np.random.default_rng(0)
