# -*- coding: utf-8 -*-
"""
Synthetic weight trajectories.

W(t) = W0 * (1 - r * t / 100) with bounded multiplicative noise. Noise amplitude is
capped below half the relative drop between neighbouring samples so the recorded
series stays strictly decreasing.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from ..data.manifest import WeightTrajectory
from .config import SynthConfig


@dataclass(frozen=True)
class PotatoParams:
    """Per-potato draws; fixed by (seed, potato_index)."""

    potato_index: int
    w0: float
    loss_rate: float
    sprout_onset: float
    render_seed: int

    @property
    def potato_id(self) -> str:
        return f"P{self.potato_index + 1:03d}"

    @property
    def shelf_life_day(self) -> float:
        """Noise-free day the linear model reaches 10% loss."""
        return 10.0 / self.loss_rate


def potato_rng(seed: int, potato_index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, potato_index]))


def draw_potato_params(config: SynthConfig, potato_index: int) -> PotatoParams:
    rng = potato_rng(config.seed, potato_index)
    w0 = config.initial_weight_g + rng.uniform(-1, 1) * config.initial_weight_jitter_g
    rate = config.base_loss_rate_pct_per_day + rng.uniform(-1, 1) * config.loss_rate_jitter
    onset = max(0.0, config.sprout_onset_day + rng.uniform(-1, 1) * config.sprout_onset_jitter)
    render_seed = int(rng.integers(0, 2**31 - 1))
    return PotatoParams(potato_index, float(w0), float(rate), float(onset), render_seed)


def noiseless_weights(w0: float, loss_rate: float, days: List[int]) -> np.ndarray:
    return w0 * (1.0 - loss_rate * np.asarray(days, dtype=float) / 100.0)


def simulate_weight_trajectory(config: SynthConfig, potato_index: int) -> WeightTrajectory:
    """
    Simulate one potato's recorded weights.

    Deterministic for (config.seed, potato_index).
    """
    params = draw_potato_params(config, potato_index)
    days = config.days
    clean = noiseless_weights(params.w0, params.loss_rate, days)

    # Strict decrease holds when amplitude < (W_i - W_i+1) / (W_i + W_i+1)
    gaps = (clean[:-1] - clean[1:]) / (clean[:-1] + clean[1:])
    amplitude = min(config.noise_pct / 100.0, 0.45 * float(gaps.min())) if len(gaps) else 0.0

    noise_rng = np.random.default_rng(np.random.SeedSequence([config.seed, potato_index, 1]))
    noise = noise_rng.uniform(-amplitude, amplitude, size=len(days))
    weights = clean * (1.0 + noise)

    return WeightTrajectory(
        potato_id=params.potato_id,
        points=tuple((int(d), float(w)) for d, w in zip(days, weights)),
    )


__all__ = [
    "PotatoParams",
    "potato_rng",
    "draw_potato_params",
    "noiseless_weights",
    "simulate_weight_trajectory",
]
