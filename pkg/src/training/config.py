# -*- coding: utf-8 -*-
"""
Training Configuration

Type-safe configuration for training runs using Pydantic.
"""

from typing import Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from ..models.registry import registry
from ..models.spec import BackboneId


class AugmentationConfig(BaseModel):
    """Training-only augmentation; evaluation is resize + normalize only"""

    enabled: bool = Field(default=True, description="Apply augmentation to training samples")

    crop_scale: Tuple[float, float] = Field(
        default=(0.8, 1.0),
        description="Random resized crop area range"
    )

    crop_ratio: Tuple[float, float] = Field(
        default=(0.9, 1.1),
        description="Random resized crop aspect-ratio range"
    )

    hflip_p: float = Field(default=0.5, ge=0.0, le=1.0, description="Horizontal flip probability")

    vflip_p: float = Field(default=0.5, ge=0.0, le=1.0, description="Vertical flip probability")

    rotation_deg: float = Field(default=20.0, ge=0.0, le=180.0, description="Rotation range (+/-)")

    brightness: float = Field(default=0.1, ge=0.0, le=1.0)

    contrast: float = Field(default=0.1, ge=0.0, le=1.0)

    saturation: float = Field(default=0.1, ge=0.0, le=1.0)

    translate: float = Field(default=0.05, ge=0.0, le=0.5, description="Affine translate fraction")

    shear_deg: float = Field(default=5.0, ge=0.0, le=45.0, description="Affine shear range (+/-)")

    @model_validator(mode="after")
    def _check_ranges(self) -> "AugmentationConfig":
        lo, hi = self.crop_scale
        if not 0 < lo <= hi <= 1:
            raise ValueError("crop_scale must satisfy 0 < lo <= hi <= 1")
        if not 0 < self.crop_ratio[0] <= self.crop_ratio[1]:
            raise ValueError("crop_ratio must satisfy 0 < lo <= hi")
        return self

    @property
    def is_identity(self) -> bool:
        return not self.enabled


class TrainConfig(BaseModel):
    """Configuration for one training protocol"""

    max_epochs: int = Field(default=500, ge=1, description="Maximum epochs")

    batch_size: int = Field(default=16, ge=1, le=1024, description="Mini-batch size")

    input_size: int = Field(default=224, ge=32, description="Square input side")

    learning_rate: Optional[float] = Field(
        default=None,
        gt=0,
        description="Adam learning rate (None = backbone default: 1e-3 CNN, 1e-4 ViT)"
    )

    beta1: float = Field(default=0.9, ge=0.0, lt=1.0)

    beta2: float = Field(default=0.999, ge=0.0, lt=1.0)

    label_smoothing: float = Field(default=0.1, ge=0.0, lt=1.0, description="Label smoothing epsilon")

    lrs_factor: float = Field(default=0.5, gt=0.0, lt=1.0, description="Plateau LR reduction factor")

    lrs_patience: int = Field(default=30, ge=1, description="Plateau patience in epochs")

    es_patience: int = Field(default=100, ge=1, description="Early stopping patience in epochs")

    improvement_threshold: float = Field(
        default=1e-8,
        ge=0.0,
        description="Absolute decrease in val loss that counts as improvement"
    )

    validation_fraction: float = Field(
        default=0.1,
        ge=0.0,
        lt=0.5,
        description="Stratified share of the training fold used for early stopping and the LR "
                    "schedule (0 = monitor the test fold)"
    )

    k_folds: int = Field(default=5, ge=2, le=20, description="Cross-validation folds")

    seed: int = Field(default=42, description="Random seed")

    augmentation: AugmentationConfig = Field(default_factory=AugmentationConfig)

    def resolved_lr(self, backbone: BackboneId) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return registry.get_metadata(backbone).default_lr

    def for_backbone(self, backbone: BackboneId) -> "TrainConfig":
        """Copy with the learning rate fixed for a backbone family."""
        return self.model_copy(update={"learning_rate": self.resolved_lr(backbone)})


# Preset configurations
class TrainPresets:
    """Common training presets"""

    @staticmethod
    def published() -> TrainConfig:
        """Full protocol: 500 epochs, batch 16, 224 px, patience 30/100"""
        return TrainConfig()

    @staticmethod
    def desk() -> TrainConfig:
        """CPU-friendly protocol for tiny backbones on synthetic data"""
        return TrainConfig(
            max_epochs=60,
            input_size=96,
            learning_rate=1e-3,
            lrs_patience=8,
            es_patience=20,
        )

    @staticmethod
    def quick_test() -> TrainConfig:
        """A few epochs; for smoke tests"""
        return TrainConfig(
            max_epochs=3,
            batch_size=8,
            input_size=64,
            learning_rate=1e-3,
            lrs_patience=1,
            es_patience=2,
            augmentation=AugmentationConfig(enabled=False),
        )


__all__ = ["AugmentationConfig", "TrainConfig", "TrainPresets"]
