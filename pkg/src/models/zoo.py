# -*- coding: utf-8 -*-
"""
Model Zoo

Builds classifiers (backbone + modified head), predicts class probabilities and
saves/loads checkpoints with readable metadata.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import torch
import torch.nn as nn

from ..core.errors import CorruptCheckpoint, ShapeMismatch
from ..core.logger import logger
from .heads import ClassifierHead
from .registry import registry
from .spec import BackboneId, HeadConfig, ModelSpec

CHECKPOINT_FORMAT = "tuber-checkpoint/1"


class Classifier(nn.Module):
    """Backbone feature vector -> ClassifierHead scores."""

    def __init__(self, backbone: nn.Module, head: ClassifierHead):
        super().__init__()
        self.backbone = backbone
        self.head = head

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.backbone(x))


@dataclass
class ModelHandle:
    """A built classifier with its spec and build metadata."""

    spec: ModelSpec
    model: Classifier
    seed: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def device(self) -> torch.device:
        return next(self.model.parameters()).device

    @property
    def backbone_frozen(self) -> bool:
        return self.spec.finetune_mode == "head"

    def to(self, device: Union[str, torch.device]) -> "ModelHandle":
        self.model.to(device)
        return self

    def train_mode(self) -> None:
        """Training mode; a frozen backbone keeps its normalization statistics."""
        self.model.train()
        if self.backbone_frozen:
            self.model.backbone.eval()

    def eval_mode(self) -> None:
        self.model.eval()


def count_parameters(module: nn.Module, trainable_only: bool = False) -> int:
    return sum(p.numel() for p in module.parameters() if p.requires_grad or not trainable_only)


def count_trainable_parameters(handle: ModelHandle) -> int:
    """Parameters updated by training under the handle's freezing policy."""
    return count_parameters(handle.model, trainable_only=True)


def _apply_freezing(model: Classifier, mode: str) -> None:
    for p in model.backbone.parameters():
        p.requires_grad = mode == "full"
    for p in model.head.parameters():
        p.requires_grad = True


def build_classifier(spec: ModelSpec, seed: int, load_pretrained: bool = True) -> ModelHandle:
    """
    Build a classifier for a spec.

    Args:
        spec: Backbone, head and input geometry
        seed: Seeds the head (and every tiny-backbone weight)
        load_pretrained: Fetch pretrained weights when the spec asks for them;
            False when a checkpoint will overwrite them anyway

    Returns:
        ModelHandle on CPU

    Raises:
        WeightsUnavailable, InvalidHead
    """
    meta = registry.get_metadata(spec.backbone)
    build_spec = spec if load_pretrained else spec.model_copy(update={"pretrained": False})

    with torch.random.fork_rng(devices=[]):
        torch.manual_seed(seed)
        backbone = registry.create(build_spec)
        head = ClassifierHead(meta.feature_width, spec.head)

    model = Classifier(backbone, head)
    _apply_freezing(model, spec.finetune_mode)

    handle = ModelHandle(spec=spec, model=model, seed=seed)
    total = count_parameters(model)
    handle.metadata = {
        "backbone": spec.backbone.value,
        "head": spec.head.label,
        "n_classes": spec.n_classes,
        "finetune": spec.finetune_mode,
        "pretrained": spec.use_pretrained,
        "trainable_params": count_trainable_parameters(handle),
        "total_params": total,
        "created_from_seed": seed,
    }

    if meta.published_params_m is not None:
        measured_m = total / 1e6
        if abs(measured_m - meta.published_params_m) / meta.published_params_m > 0.02:
            logger.warning(
                f"{meta.display_name}: {measured_m:.2f}M parameters "
                f"({handle.metadata['trainable_params'] / 1e6:.2f}M trainable) "
                f"vs {meta.published_params_m}M published"
            )

    logger.info(
        f"Built {meta.display_name} [{spec.head.label}] finetune={spec.finetune_mode} "
        f"trainable={handle.metadata['trainable_params']:,} seed={seed}"
    )
    return handle


def check_input_shape(spec: ModelSpec, images: torch.Tensor) -> None:
    expected = (3, spec.input_size, spec.input_size)
    if images.ndim != 4 or tuple(images.shape[1:]) != expected:
        raise ShapeMismatch(f"expected (B, {', '.join(map(str, expected))}), got {tuple(images.shape)}")


def predict_proba(handle: ModelHandle, images: torch.Tensor, batch_size: int = 64) -> np.ndarray:
    """
    Class probabilities in evaluation mode.

    Args:
        handle: Built classifier
        images: (B, 3, input_size, input_size) normalized tensor

    Returns:
        (B, n_classes) array; rows sum to 1
    """
    check_input_shape(handle.spec, images)
    handle.eval_mode()
    outputs = []
    with torch.no_grad():
        for start in range(0, images.shape[0], batch_size):
            batch = images[start:start + batch_size].to(handle.device)
            outputs.append(torch.softmax(handle.model(batch).double(), dim=1).cpu().numpy())
    if not outputs:
        return np.zeros((0, handle.spec.n_classes))
    return np.concatenate(outputs, axis=0)


def save_model(handle: ModelHandle, path: Path) -> Path:
    """Write weights plus readable metadata (backbone, head, n_classes, seed)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "format": CHECKPOINT_FORMAT,
        "spec": handle.spec.model_dump(mode="json"),
        "metadata": dict(handle.metadata, seed=handle.seed),
        "state_dict": {k: v.detach().cpu() for k, v in handle.model.state_dict().items()},
    }
    torch.save(payload, path)
    logger.debug(f"Checkpoint written: {path}")
    return path


def _read_payload(path: Path) -> Dict[str, Any]:
    try:
        payload = torch.load(Path(path), map_location="cpu", weights_only=True)
    except Exception as e:
        raise CorruptCheckpoint(f"{path}: unreadable ({type(e).__name__})") from e
    if not isinstance(payload, dict) or payload.get("format") != CHECKPOINT_FORMAT:
        raise CorruptCheckpoint(f"{path}: not a {CHECKPOINT_FORMAT} file")
    return payload


def read_checkpoint_metadata(path: Path) -> Dict[str, Any]:
    """Metadata of a checkpoint without building the model."""
    payload = _read_payload(path)
    return dict(payload["metadata"], spec=payload["spec"])


def load_model(path: Path, expected_backbone: Optional[BackboneId] = None) -> ModelHandle:
    """
    Rebuild a classifier from a checkpoint.

    Raises:
        CorruptCheckpoint: unreadable file, wrong backbone or mismatched weights
    """
    payload = _read_payload(path)
    try:
        spec = ModelSpec.model_validate(payload["spec"])
        seed = int(payload["metadata"]["seed"])
    except Exception as e:
        raise CorruptCheckpoint(f"{path}: invalid metadata ({e})") from e

    if expected_backbone is not None and spec.backbone != expected_backbone:
        raise CorruptCheckpoint(
            f"{path}: checkpoint holds {spec.backbone.value}, expected {expected_backbone.value}"
        )

    # Keep the stored freezing policy even though weights are not downloaded
    spec = spec.model_copy(update={"finetune": spec.finetune_mode})
    handle = build_classifier(spec, seed, load_pretrained=False)
    try:
        handle.model.load_state_dict(payload["state_dict"], strict=True)
    except RuntimeError as e:
        raise CorruptCheckpoint(f"{path}: weights do not match {spec.backbone.value}") from e

    handle.metadata.update(payload["metadata"])
    logger.info(f"Loaded checkpoint {path} ({spec.backbone.value}, {spec.head.label})")
    return handle


__all__ = [
    "CHECKPOINT_FORMAT",
    "Classifier",
    "ModelHandle",
    "HeadConfig",
    "count_parameters",
    "count_trainable_parameters",
    "build_classifier",
    "check_input_shape",
    "predict_proba",
    "save_model",
    "read_checkpoint_metadata",
    "load_model",
]
