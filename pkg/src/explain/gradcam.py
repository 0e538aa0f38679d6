# -*- coding: utf-8 -*-
"""
Grad-CAM saliency.

Channel weights are the spatial mean of the gradient of the target class's
pre-softmax score with respect to a feature layer's activations; the map is the
ReLU of the weighted activation sum, upsampled bilinearly to the input size.

Transformer layers emitting (B, 1 + g*g, D) token sequences are supported by
dropping the class token and folding the patch tokens back onto the g x g grid.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from ..core.errors import InvalidClassIndex, LayerNotFound, NonSpatialLayer
from ..core.logger import logger
from ..models.registry import registry
from ..models.zoo import ModelHandle, check_input_shape


@dataclass
class Saliency:
    """Grad-CAM map at layer and input resolution."""

    map: np.ndarray
    upsampled_map: np.ndarray
    target_class: int
    layer_id: str
    degenerate: bool = False
    predicted_class: int = 0
    probabilities: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "layer_id": self.layer_id,
            "target_class": self.target_class,
            "predicted_class": self.predicted_class,
            "probabilities": self.probabilities,
            "degenerate": self.degenerate,
            "layer_shape": list(self.map.shape),
        }


def default_layer(handle: ModelHandle) -> str:
    return registry.get_metadata(handle.spec.backbone).gradcam_layer


def resolve_layer(model: nn.Module, layer_id: str) -> nn.Module:
    modules = dict(model.named_modules())
    if layer_id not in modules or not layer_id:
        raise LayerNotFound(f"no module named {layer_id!r}")
    return modules[layer_id]


def to_spatial(activations: torch.Tensor, layer_id: str) -> torch.Tensor:
    """(B, C, H, W) view of a layer output."""
    if activations.dim() == 4:
        return activations
    if activations.dim() == 3:
        n_patches = activations.shape[1] - 1
        grid = math.isqrt(max(n_patches, 0))
        if n_patches > 0 and grid * grid == n_patches:
            patches = activations[:, 1:, :]
            return patches.transpose(1, 2).reshape(activations.shape[0], activations.shape[2], grid, grid)
    raise NonSpatialLayer(f"{layer_id} outputs shape {tuple(activations.shape)}")


def grad_cam(
    handle: ModelHandle,
    image: torch.Tensor,
    target_class: Optional[int] = None,
    layer_id: Optional[str] = None,
) -> Saliency:
    """
    Compute a Grad-CAM map for one image.

    Args:
        handle: Trained classifier
        image: Normalized (3, H, W) or (1, 3, H, W) tensor
        target_class: 1-based class to explain (None = predicted class)
        layer_id: Dotted module name (None = backbone default)

    Returns:
        Saliency, max-normalized unless all-zero (then flagged degenerate)

    Raises:
        LayerNotFound: unknown module or module not run in the forward pass
        NonSpatialLayer: module output cannot be viewed as spatial maps
        InvalidClassIndex: target_class outside 1..n_classes
    """
    layer_id = layer_id or default_layer(handle)
    layer = resolve_layer(handle.model, layer_id)
    n_classes = handle.spec.n_classes
    if target_class is not None and not 1 <= target_class <= n_classes:
        raise InvalidClassIndex(f"class {target_class} outside 1..{n_classes}")

    x = image.unsqueeze(0) if image.dim() == 3 else image
    check_input_shape(handle.spec, x)
    x = x[:1].to(handle.device).clone().requires_grad_(True)

    captured: Dict[str, torch.Tensor] = {}

    def _save_gradient(grad: torch.Tensor) -> None:
        captured["grad"] = grad

    def _forward_hook(module, inputs, output):
        if isinstance(output, (tuple, list)):
            output = output[0]
        captured["act"] = output
        if output.requires_grad:
            output.register_hook(_save_gradient)

    handle.eval_mode()
    hook = layer.register_forward_hook(_forward_hook)
    try:
        with torch.enable_grad():
            logits = handle.model(x)
            if "act" not in captured:
                raise LayerNotFound(f"{layer_id} was not executed in the forward pass")
            activations = to_spatial(captured["act"], layer_id)

            probabilities = torch.softmax(logits.detach().double(), dim=1)[0]
            predicted = int(probabilities.argmax().item()) + 1
            target = target_class or predicted

            handle.model.zero_grad(set_to_none=True)
            logits[0, target - 1].backward()
    finally:
        hook.remove()

    gradients = captured.get("grad")
    if gradients is None:
        gradients = torch.zeros_like(captured["act"])
    gradients = to_spatial(gradients, layer_id)

    weights = gradients.mean(dim=(2, 3), keepdim=True)
    cam = F.relu((weights * activations).sum(dim=1, keepdim=True)).detach()
    upsampled = F.interpolate(cam, size=x.shape[-2:], mode="bilinear", align_corners=False)
    upsampled = upsampled.clamp(min=0)

    cam_np = cam[0, 0].double().cpu().numpy()
    up_np = upsampled[0, 0].double().cpu().numpy()
    degenerate = not cam_np.max() > 0
    if degenerate:
        logger.warning(f"Grad-CAM map at {layer_id} for class {target} is all zero")
        cam_np = np.zeros_like(cam_np)
        up_np = np.zeros_like(up_np)
    else:
        cam_np = cam_np / cam_np.max()
        up_np = up_np / up_np.max() if up_np.max() > 0 else up_np

    return Saliency(
        map=cam_np,
        upsampled_map=up_np,
        target_class=target,
        layer_id=layer_id,
        degenerate=degenerate,
        predicted_class=predicted,
        probabilities=[float(p) for p in probabilities.cpu()],
    )


__all__ = ["Saliency", "default_layer", "resolve_layer", "to_spatial", "grad_cam"]
