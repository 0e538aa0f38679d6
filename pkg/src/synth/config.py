# -*- coding: utf-8 -*-
"""
Synthetic Dataset Configuration

Type-safe configuration for the synthetic potato generator using Pydantic.
"""

from pydantic import BaseModel, Field, model_validator


class SynthConfig(BaseModel):
    """Configuration for a synthetic potato dataset"""

    # Collection plan
    n_potatoes: int = Field(default=6, ge=1, le=10000, description="Number of potatoes")

    horizon_days: int = Field(default=200, ge=1, description="Last observation day")

    sample_interval_days: int = Field(
        default=5,
        ge=1,
        description="Days between observations (day 0 included)"
    )

    image_size: int = Field(default=250, ge=64, le=2048, description="Square image side in pixels")

    potatoes_per_tray: int = Field(default=6, ge=1, description="Potatoes sharing a tray id")

    # Weight model: W(t) = W0 * (1 - r * t / 100)
    initial_weight_g: float = Field(default=150.0, gt=0, description="Mean starting weight")

    initial_weight_jitter_g: float = Field(default=30.0, ge=0, description="Uniform +/- jitter")

    base_loss_rate_pct_per_day: float = Field(
        default=0.08,
        gt=0,
        description="Mean loss rate r in % of W0 per day"
    )

    loss_rate_jitter: float = Field(
        default=0.02,
        ge=0,
        description="Uniform +/- jitter on r, per potato"
    )

    noise_pct: float = Field(
        default=0.2,
        ge=0.0,
        le=0.2,
        description="Max multiplicative measurement noise in percent"
    )

    # Sprouting
    sprout_onset_day: float = Field(default=60.0, ge=0, description="Mean sprout onset day")

    sprout_onset_jitter: float = Field(default=20.0, ge=0, description="Uniform +/- jitter")

    sprout_spacing_days: float = Field(
        default=20.0,
        gt=0,
        description="Days between successive new sprouts"
    )

    max_sprouts: int = Field(default=4, ge=1, le=6, description="Sprouts per potato at most")

    sprout_growth_px_per_day: float = Field(default=0.6, ge=0, description="Sprout growth rate")

    # Wrinkles
    wrinkles_per_pct: float = Field(
        default=3.0,
        ge=0,
        description="Wrinkle lines drawn per percent of weight loss"
    )

    seed: int = Field(default=42, description="Random seed")

    @model_validator(mode="after")
    def _check_bounds(self) -> "SynthConfig":
        if self.loss_rate_jitter >= self.base_loss_rate_pct_per_day:
            raise ValueError("loss_rate_jitter must be below base_loss_rate_pct_per_day")
        if (self.base_loss_rate_pct_per_day + self.loss_rate_jitter) * self.horizon_days >= 100:
            raise ValueError("fastest loss rate would reach 100% within the horizon")
        if self.initial_weight_jitter_g >= self.initial_weight_g:
            raise ValueError("initial_weight_jitter_g must be below initial_weight_g")
        if self.sample_interval_days > self.horizon_days:
            raise ValueError("sample_interval_days exceeds horizon_days")
        return self

    @property
    def days(self) -> list:
        return list(range(0, self.horizon_days + 1, self.sample_interval_days))


# Preset configurations
class SynthPresets:
    """Common synthetic dataset presets"""

    @staticmethod
    def desk() -> SynthConfig:
        """6 potatoes x 41 days at 250 px (default)"""
        return SynthConfig()

    @staticmethod
    def tiny(seed: int = 0) -> SynthConfig:
        """Small, fast dataset for unit tests"""
        return SynthConfig(
            n_potatoes=4,
            horizon_days=160,
            sample_interval_days=20,
            image_size=64,
            sprout_onset_day=40.0,
            sprout_onset_jitter=5.0,
            seed=seed,
        )

    @staticmethod
    def long_storage() -> SynthConfig:
        """18 potatoes observed every 2 days"""
        return SynthConfig(n_potatoes=18, horizon_days=200, sample_interval_days=2)


__all__ = ["SynthConfig", "SynthPresets"]
