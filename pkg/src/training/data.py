# -*- coding: utf-8 -*-
"""Training samples, datasets and per-epoch seeded ordering."""

import hashlib
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import torch
from torch.utils.data import DataLoader, Dataset, Sampler

from ..core.config import settings
from ..data.manifest import SampleKey
from ..labeling.labeler import LabeledSample
from .augment import (
    augment,
    build_eval_transform,
    build_train_transform,
    load_image_tensor,
    sample_rng_state,
)
from .config import AugmentationConfig


@dataclass(frozen=True)
class TrainingSample:
    """Image location and 1-based class index of one sample."""

    key: SampleKey
    image_path: Path
    class_index: int


def samples_from_labels(labels: Sequence[LabeledSample], root_dir: Path) -> List[TrainingSample]:
    """Training samples sorted by key, so input row order never matters."""
    samples = [
        TrainingSample(key=s.key, image_path=Path(root_dir) / s.image_path, class_index=s.class_index)
        for s in labels
    ]
    return sorted(samples, key=lambda s: s.key)


class ImageCache:
    """Decoded uint8 images shared by the datasets of one run."""

    def __init__(self):
        self._images: Dict[Path, torch.Tensor] = {}
        self._lock = threading.Lock()

    def get(self, path: Path) -> torch.Tensor:
        with self._lock:
            cached = self._images.get(path)
        if cached is None:
            cached = load_image_tensor(path)
            with self._lock:
                self._images[path] = cached
        return cached


class PotatoImageDataset(Dataset):
    """
    (image, 0-based label) pairs.

    In training mode each item is augmented with randomness keyed by
    (seed, epoch, sample key); call set_epoch before every epoch.
    """

    def __init__(
        self,
        samples: Sequence[TrainingSample],
        input_size: int,
        augmentation: Optional[AugmentationConfig] = None,
        seed: int = 0,
        cache: Optional[ImageCache] = None,
    ):
        self.samples = list(samples)
        self.seed = seed
        self.epoch = 0
        self.training = augmentation is not None and not augmentation.is_identity
        self.transform = (
            build_train_transform(augmentation, input_size)
            if self.training
            else build_eval_transform(input_size)
        )
        self.cache = cache or ImageCache()

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def __len__(self) -> int:
        return len(self.samples)

    def __getitem__(self, index: int) -> Tuple[torch.Tensor, int]:
        sample = self.samples[index]
        image = self.cache.get(sample.image_path)
        if self.training:
            image = augment(image, self.transform, sample_rng_state(self.seed, self.epoch, sample.key))
        else:
            image = self.transform(image)
        return image, sample.class_index - 1

    def stacked(self) -> Tuple[torch.Tensor, torch.Tensor]:
        """All items as one (N, 3, S, S) batch plus labels."""
        images, labels = zip(*(self[i] for i in range(len(self)))) if len(self) else ((), ())
        if not images:
            return torch.empty(0), torch.empty(0, dtype=torch.long)
        return torch.stack(images), torch.tensor(labels, dtype=torch.long)


class EpochShuffleSampler(Sampler[int]):
    """Permutation seeded by (seed, epoch)."""

    def __init__(self, n: int, seed: int):
        self.n = n
        self.seed = seed
        self.epoch = 0

    def set_epoch(self, epoch: int) -> None:
        self.epoch = epoch

    def __iter__(self) -> Iterator[int]:
        digest = hashlib.sha256(f"order:{self.seed}:{self.epoch}".encode()).digest()
        generator = torch.Generator().manual_seed(int.from_bytes(digest[:8], "big") & (2**63 - 1))
        return iter(torch.randperm(self.n, generator=generator).tolist())

    def __len__(self) -> int:
        return self.n


def make_loader(dataset: PotatoImageDataset, batch_size: int, sampler: Optional[Sampler] = None) -> DataLoader:
    # A trailing batch of one breaks batch-norm in training mode
    drop_last = sampler is not None and len(dataset) % batch_size == 1 and len(dataset) > 1
    return DataLoader(
        dataset,
        batch_size=batch_size,
        sampler=sampler,
        shuffle=False,
        num_workers=settings.num_workers,
        drop_last=drop_last,
    )


__all__ = [
    "TrainingSample",
    "samples_from_labels",
    "ImageCache",
    "PotatoImageDataset",
    "EpochShuffleSampler",
    "make_loader",
]
