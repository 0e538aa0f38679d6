# -*- coding: utf-8 -*-
"""
Image transforms.

Training: random resized crop, flips, rotation, color jitter and a small affine, then
normalize. Evaluation: resize + normalize only. Randomness is keyed by
(seed, epoch, sample key) so results do not depend on loader parallelism.
"""

import hashlib
from pathlib import Path
from typing import Tuple

import torch
from PIL import Image
from torchvision.transforms import v2
from torchvision.transforms.v2 import functional as TF

from ..core.errors import MissingImage
from .config import AugmentationConfig

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


def load_image_tensor(path: Path) -> torch.Tensor:
    """Decode an image as a (3, H, W) uint8 image tensor."""
    try:
        with Image.open(path) as img:
            return TF.to_image(img.convert("RGB"))
    except OSError as e:
        raise MissingImage(path) from e


def _normalize() -> list:
    return [v2.ToDtype(torch.float32, scale=True), v2.Normalize(IMAGENET_MEAN, IMAGENET_STD)]


def build_eval_transform(input_size: int) -> v2.Compose:
    return v2.Compose([v2.Resize((input_size, input_size), antialias=True), *_normalize()])


def build_train_transform(config: AugmentationConfig, input_size: int) -> v2.Compose:
    if config.is_identity:
        return build_eval_transform(input_size)
    return v2.Compose([
        v2.RandomResizedCrop(input_size, scale=config.crop_scale, ratio=config.crop_ratio, antialias=True),
        v2.RandomHorizontalFlip(config.hflip_p),
        v2.RandomVerticalFlip(config.vflip_p),
        v2.RandomRotation(config.rotation_deg),
        v2.ColorJitter(config.brightness, config.contrast, config.saturation),
        v2.RandomAffine(degrees=0, translate=(config.translate, config.translate),
                        shear=config.shear_deg),
        *_normalize(),
    ])


def sample_rng_state(seed: int, epoch: int, sample_key: Tuple[str, int]) -> int:
    """Stable 63-bit seed for one sample in one epoch."""
    digest = hashlib.sha256(f"{seed}:{epoch}:{sample_key[0]}:{sample_key[1]}".encode()).digest()
    return int.from_bytes(digest[:8], "big") & (2**63 - 1)


def augment(image: torch.Tensor, transform: v2.Compose, rng_state: int) -> torch.Tensor:
    """Apply a transform under a private RNG seeded with rng_state."""
    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(rng_state)
        return transform(image)


__all__ = [
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "load_image_tensor",
    "build_eval_transform",
    "build_train_transform",
    "sample_rng_state",
    "augment",
]
