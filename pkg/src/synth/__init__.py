"""Synthetic potato dataset generator."""

from .config import SynthConfig, SynthPresets
from .generator import GroundTruthRecord, generate_synthetic_dataset, load_ground_truth, sprout_state
from .render import AgeState, render_potato_image, wrinkle_count
from .trajectory import PotatoParams, draw_potato_params, simulate_weight_trajectory

__all__ = [
    "SynthConfig",
    "SynthPresets",
    "GroundTruthRecord",
    "generate_synthetic_dataset",
    "load_ground_truth",
    "sprout_state",
    "AgeState",
    "render_potato_image",
    "wrinkle_count",
    "PotatoParams",
    "draw_potato_params",
    "simulate_weight_trajectory",
]
