# -*- coding: utf-8 -*-
"""
Model Specification

Backbone identity, classifier head and input geometry of a classifier.
"""

from enum import Enum
from typing import Dict, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.errors import InvalidHead


class BackboneId(str, Enum):
    """Backbone families; TINY_* are desk-scale stand-ins without pretrained weights."""

    VGG16 = "VGG16"
    RESNET50 = "RESNET50"
    DENSENET121 = "DENSENET121"
    VIT_B16 = "VIT_B16"
    TINY_CNN = "TINY_CNN"
    TINY_VIT = "TINY_VIT"

    @property
    def is_tiny(self) -> bool:
        return self in (BackboneId.TINY_CNN, BackboneId.TINY_VIT)

    @property
    def is_vit(self) -> bool:
        return self in (BackboneId.VIT_B16, BackboneId.TINY_VIT)


# Top-layer variants addressable by name
HEAD_VARIANTS: Dict[str, Tuple[int, ...]] = {
    "NoTop": (),
    "1024": (1024,),
    "1024-1024": (1024, 1024),
    "1024-1024-1024": (1024, 1024, 1024),
}


class HeadConfig(BaseModel):
    """Classifier head: [dense -> batch-norm -> ReLU -> dropout] per width, then n-class dense."""

    model_config = ConfigDict(frozen=True)

    hidden_widths: Tuple[int, ...] = Field(default=(1024, 1024), description="Hidden dense widths")
    dropout_rate: float = Field(default=0.5, ge=0.0, lt=1.0)
    use_batch_norm: bool = Field(default=True)
    n_classes: int = Field(default=2, ge=2)

    @field_validator("hidden_widths")
    @classmethod
    def _known_variant(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if tuple(v) not in HEAD_VARIANTS.values():
            raise InvalidHead(f"hidden_widths {tuple(v)} is not one of {sorted(HEAD_VARIANTS)}")
        return tuple(v)

    @classmethod
    def from_name(cls, name: str, n_classes: int, **kwargs) -> "HeadConfig":
        """Build from a variant name such as 'NoTop' or '1024-1024'."""
        if name not in HEAD_VARIANTS:
            raise InvalidHead(f"unknown head {name!r}; expected one of {sorted(HEAD_VARIANTS)}")
        return cls(hidden_widths=HEAD_VARIANTS[name], n_classes=n_classes, **kwargs)

    @property
    def name(self) -> str:
        return "-".join(str(w) for w in self.hidden_widths) or "NoTop"

    @property
    def label(self) -> str:
        """Variant name with the class count, e.g. 'NoTop-4'."""
        return f"{self.name}-{self.n_classes}"


class ViTConfig(BaseModel):
    """Patch-transformer geometry; attention is softmax(QK^T / sqrt(d_k)) V per head."""

    model_config = ConfigDict(frozen=True)

    image_size: int = 224
    patch_size: int = 16
    depth: int = 12
    heads: int = 12
    embed_dim: int = 768
    mlp_dim: int = 3072

    @model_validator(mode="after")
    def _check(self) -> "ViTConfig":
        if self.embed_dim % self.heads:
            raise ValueError("embed_dim must be divisible by heads")
        if self.image_size % self.patch_size:
            raise ValueError("image_size must be divisible by patch_size")
        return self

    @property
    def head_dim(self) -> int:
        return self.embed_dim // self.heads

    @property
    def grid_size(self) -> int:
        return self.image_size // self.patch_size

    @property
    def sequence_length(self) -> int:
        """Patch tokens plus the class token."""
        return self.grid_size ** 2 + 1


class ModelSpec(BaseModel):
    """Backbone + head + input geometry of one classifier."""

    model_config = ConfigDict(frozen=True, use_enum_values=False)

    backbone: BackboneId
    head: HeadConfig = Field(default_factory=HeadConfig)
    pretrained: Optional[bool] = Field(
        default=None,
        description="Use pretrained backbone weights (default: True for the ImageNet backbones)"
    )
    finetune: Literal["auto", "head", "full"] = Field(
        default="auto",
        description="head = frozen backbone; full = every layer trainable; auto picks per family"
    )
    input_size: int = Field(default=224, ge=32, description="Square input side")

    @model_validator(mode="after")
    def _check(self) -> "ModelSpec":
        if self.backbone.is_tiny and self.pretrained:
            raise ValueError(f"{self.backbone.value} has no pretrained weights")
        if self.backbone == BackboneId.VIT_B16 and self.input_size != 224:
            raise ValueError("VIT_B16 requires input_size 224")
        if self.backbone == BackboneId.TINY_VIT and self.input_size % 16:
            raise ValueError("TINY_VIT requires input_size divisible by 16")
        return self

    @property
    def n_classes(self) -> int:
        return self.head.n_classes

    @property
    def use_pretrained(self) -> bool:
        if self.backbone.is_tiny:
            return False
        return True if self.pretrained is None else self.pretrained

    @property
    def finetune_mode(self) -> str:
        """Resolved freezing policy: pretrained backbones train the head only by default."""
        if self.finetune != "auto":
            return self.finetune
        return "head" if self.use_pretrained else "full"

    @property
    def vit(self) -> Optional[ViTConfig]:
        if self.backbone == BackboneId.VIT_B16:
            return ViTConfig()
        if self.backbone == BackboneId.TINY_VIT:
            return ViTConfig(
                image_size=self.input_size, patch_size=16, depth=2, heads=4, embed_dim=64, mlp_dim=128
            )
        return None

    def with_head(self, head: HeadConfig) -> "ModelSpec":
        return self.model_copy(update={"head": head})


__all__ = ["BackboneId", "HEAD_VARIANTS", "HeadConfig", "ViTConfig", "ModelSpec"]
