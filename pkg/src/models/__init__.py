"""Backbones, classifier heads and checkpoints."""

from .heads import ClassifierHead
from .registry import BackboneMetadata, BackboneRegistry, registry
from .spec import HEAD_VARIANTS, BackboneId, HeadConfig, ModelSpec, ViTConfig
from .zoo import (
    Classifier,
    ModelHandle,
    build_classifier,
    count_parameters,
    count_trainable_parameters,
    load_model,
    predict_proba,
    read_checkpoint_metadata,
    save_model,
)

__all__ = [
    "ClassifierHead",
    "BackboneMetadata",
    "BackboneRegistry",
    "registry",
    "HEAD_VARIANTS",
    "BackboneId",
    "HeadConfig",
    "ModelSpec",
    "ViTConfig",
    "Classifier",
    "ModelHandle",
    "build_classifier",
    "count_parameters",
    "count_trainable_parameters",
    "load_model",
    "predict_proba",
    "read_checkpoint_metadata",
    "save_model",
]
