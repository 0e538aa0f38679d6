"""Grad-CAM saliency, overlays and localization scoring."""

from .gradcam import Saliency, default_layer, grad_cam, resolve_layer, to_spatial
from .heatmaps import HeatmapResult, explain_image
from .overlay import colorize, load_mask, localization_score, overlay

__all__ = [
    "Saliency",
    "default_layer",
    "grad_cam",
    "resolve_layer",
    "to_spatial",
    "HeatmapResult",
    "explain_image",
    "colorize",
    "load_mask",
    "localization_score",
    "overlay",
]
