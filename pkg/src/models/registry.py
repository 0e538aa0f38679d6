"""
Backbone Registry

Central registry of backbone families: how to build each one and what is known about it.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import torch.nn as nn

from ..core.config import settings
from ..core.errors import WeightsUnavailable
from ..core.logger import logger
from .spec import BackboneId, ModelSpec
from .tiny import TinyCNN, TinyViT


@dataclass
class BackboneMetadata:
    """Metadata about a backbone family."""

    backbone: BackboneId
    display_name: str
    family: str
    feature_width: int
    gradcam_layer: str
    default_lr: float
    description: str
    # Published reference figures (reference-only, hardware unknown)
    published_params_m: Optional[float] = None
    published_gmacs: Optional[float] = None
    published_train_min: Optional[float] = None
    published_infer_sec: Optional[float] = None
    extra: Dict = field(default_factory=dict)


def _disable_inplace(module: nn.Module) -> nn.Module:
    # In-place activations break activation/gradient hooks
    for m in module.modules():
        if hasattr(m, "inplace"):
            m.inplace = False
    return module


def _load_torchvision(name: str, builder: Callable, weights, pretrained: bool) -> nn.Module:
    if not pretrained:
        return builder(weights=None)
    cache = settings.export_weights_cache()
    try:
        return builder(weights=weights)
    except Exception as e:  # download / cache / hash failures
        raise WeightsUnavailable(name, f"{type(e).__name__}: {e}; cache={cache}") from e


def _vgg16(spec: ModelSpec) -> nn.Module:
    from torchvision.models import VGG16_Weights, vgg16

    model = _load_torchvision("VGG16", vgg16, VGG16_Weights.IMAGENET1K_V1, spec.use_pretrained)
    model.avgpool = nn.AdaptiveAvgPool2d(1)
    model.classifier = nn.Identity()
    return _disable_inplace(model)


def _resnet50(spec: ModelSpec) -> nn.Module:
    from torchvision.models import ResNet50_Weights, resnet50

    model = _load_torchvision("RESNET50", resnet50, ResNet50_Weights.IMAGENET1K_V2, spec.use_pretrained)
    model.fc = nn.Identity()
    return _disable_inplace(model)


def _densenet121(spec: ModelSpec) -> nn.Module:
    from torchvision.models import DenseNet121_Weights, densenet121

    model = _load_torchvision(
        "DENSENET121", densenet121, DenseNet121_Weights.IMAGENET1K_V1, spec.use_pretrained
    )
    model.classifier = nn.Identity()
    return _disable_inplace(model)


def _vit_b16(spec: ModelSpec) -> nn.Module:
    from torchvision.models import ViT_B_16_Weights, vit_b_16

    model = _load_torchvision("VIT_B16", vit_b_16, ViT_B_16_Weights.IMAGENET1K_V1, spec.use_pretrained)
    model.heads = nn.Identity()
    return model


def _tiny_cnn(spec: ModelSpec) -> nn.Module:
    return TinyCNN()


def _tiny_vit(spec: ModelSpec) -> nn.Module:
    return TinyViT(spec.vit)


class BackboneRegistry:
    """Registry for managing backbone families."""

    def __init__(self):
        self._factories: Dict[BackboneId, Callable[[ModelSpec], nn.Module]] = {}
        self._metadata: Dict[BackboneId, BackboneMetadata] = {}
        self._register_builtin_backbones()

    def _register_builtin_backbones(self) -> None:
        """Register the four ImageNet families and the desk-scale stand-ins."""
        self.register(
            BackboneMetadata(
                backbone=BackboneId.VGG16,
                display_name="VGG-16",
                family="cnn",
                feature_width=512,
                gradcam_layer="backbone.features.29",
                default_lr=1e-3,
                description="13 conv layers in 5 blocks, global-average pooled",
                published_params_m=14.89,
                published_gmacs=15.4,
                published_train_min=16.95,
                published_infer_sec=0.00191,
            ),
            _vgg16,
        )
        self.register(
            BackboneMetadata(
                backbone=BackboneId.RESNET50,
                display_name="ResNet-50",
                family="cnn",
                feature_width=2048,
                gradcam_layer="backbone.layer4",
                default_lr=1e-3,
                description="Bottleneck residual stages, y = F(x, {W_i}) + x",
                published_params_m=23.52,
                published_gmacs=4.13,
                published_train_min=13.16,
                published_infer_sec=0.00486,
            ),
            _resnet50,
        )
        self.register(
            BackboneMetadata(
                backbone=BackboneId.DENSENET121,
                display_name="DenseNet-121",
                family="cnn",
                feature_width=1024,
                gradcam_layer="backbone.features",
                default_lr=1e-3,
                description="Dense blocks, x_l = H_l([x_0, ..., x_{l-1}])",
                published_params_m=6.96,
                published_gmacs=2.9,
                published_train_min=15.72,
                published_infer_sec=0.01219,
            ),
            _densenet121,
        )
        self.register(
            BackboneMetadata(
                backbone=BackboneId.VIT_B16,
                display_name="ViT-B/16",
                family="vit",
                feature_width=768,
                gradcam_layer="backbone.encoder.layers.encoder_layer_11.ln_1",
                default_lr=1e-4,
                description="12 encoder layers, 12 heads, 16x16 patches, class token",
                published_params_m=86.6,
                published_gmacs=17.61,
                published_train_min=19.45,
                published_infer_sec=0.00422,
            ),
            _vit_b16,
        )
        self.register(
            BackboneMetadata(
                backbone=BackboneId.TINY_CNN,
                display_name="Tiny CNN",
                family="cnn",
                feature_width=TinyCNN.feature_width,
                gradcam_layer="backbone.features.block4",
                default_lr=1e-3,
                description="Desk-scale CNN with residual and dense stages",
            ),
            _tiny_cnn,
        )
        self.register(
            BackboneMetadata(
                backbone=BackboneId.TINY_VIT,
                display_name="Tiny ViT",
                family="vit",
                feature_width=64,
                gradcam_layer="backbone.blocks.1.norm1",
                default_lr=1e-4,
                description="Depth-2 patch transformer, embed 64",
            ),
            _tiny_vit,
        )
        logger.debug(f"Registered {len(self._factories)} backbones")

    def register(self, metadata: BackboneMetadata, factory: Callable[[ModelSpec], nn.Module]) -> None:
        """
        Register a backbone family.

        Args:
            metadata: Static facts about the family
            factory: Builds the feature extractor (pooled vector output) for a spec
        """
        self._factories[metadata.backbone] = factory
        self._metadata[metadata.backbone] = metadata

    def create(self, spec: ModelSpec) -> nn.Module:
        """Build the feature extractor for a spec."""
        if spec.backbone not in self._factories:
            raise KeyError(f"Backbone not registered: {spec.backbone}")
        return self._factories[spec.backbone](spec)

    def get_metadata(self, backbone: BackboneId) -> BackboneMetadata:
        if backbone not in self._metadata:
            raise KeyError(f"Backbone not registered: {backbone}")
        return self._metadata[backbone]

    def list_backbones(self, family: Optional[str] = None) -> List[BackboneMetadata]:
        items = list(self._metadata.values())
        if family:
            items = [m for m in items if m.family == family]
        return items


# Global registry instance
registry = BackboneRegistry()


__all__ = ["BackboneMetadata", "BackboneRegistry", "registry"]
