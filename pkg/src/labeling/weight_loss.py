# -*- coding: utf-8 -*-
"""
Weight loss and shelf life.

cumulative loss % = (W0 - Wt) / W0 * 100
shelf life        = first day the loss reaches the threshold (10%), linearly
                    interpolated between the bracketing measured days
remaining days    = floor(shelf life - current day), never below 0
"""

import math
from dataclasses import dataclass
from typing import List, Optional

from ..core.errors import NonPositiveInitialWeight
from ..data.manifest import WeightTrajectory

SHELF_LIFE_THRESHOLD_PCT = 10.0


@dataclass(frozen=True)
class ShelfLifeEstimate:
    """Shelf-life day of one potato; shelf_life_day is None when censored."""

    potato_id: str
    shelf_life_day: Optional[float]
    censored: bool

    def to_dict(self) -> dict:
        return {
            "potato_id": self.potato_id,
            "shelf_life_day": self.shelf_life_day,
            "censored": self.censored,
        }


def cumulative_weight_loss(w0: float, wt: float) -> float:
    """
    Percentage of the starting weight lost by time t.

    Negative values (scale noise, wt > w0) are returned as-is.

    Raises:
        NonPositiveInitialWeight: w0 <= 0
    """
    if not w0 > 0:
        raise NonPositiveInitialWeight(f"w0 must be positive, got {w0}")
    return (w0 - wt) * 100.0 / w0


def trajectory_losses(trajectory: WeightTrajectory) -> List[float]:
    w0 = trajectory.w0
    return [cumulative_weight_loss(w0, w) for w in trajectory.weights]


def estimate_shelf_life(
    trajectory: WeightTrajectory,
    threshold_pct: float = SHELF_LIFE_THRESHOLD_PCT,
) -> ShelfLifeEstimate:
    """
    Interpolate the day a trajectory first reaches threshold_pct loss.

    Args:
        trajectory: Weight trajectory with at least two points
        threshold_pct: Loss threshold in percent

    Returns:
        ShelfLifeEstimate, censored when the threshold is never reached
    """
    days = trajectory.days
    losses = trajectory_losses(trajectory)

    for i, loss in enumerate(losses):
        if loss < threshold_pct:
            continue
        if i == 0:
            return ShelfLifeEstimate(trajectory.potato_id, float(days[0]), False)
        d0, d1 = days[i - 1], days[i]
        l0, l1 = losses[i - 1], loss
        frac = (threshold_pct - l0) / (l1 - l0)
        return ShelfLifeEstimate(trajectory.potato_id, d0 + frac * (d1 - d0), False)

    return ShelfLifeEstimate(trajectory.potato_id, None, True)


def remaining_shelf_life(estimate: ShelfLifeEstimate, current_day: int) -> Optional[int]:
    """Whole days of shelf life left at current_day; None when censored."""
    if current_day < 0:
        raise ValueError(f"current_day must be >= 0, got {current_day}")
    if estimate.censored or estimate.shelf_life_day is None:
        return None
    return max(0, math.floor(estimate.shelf_life_day - current_day))


__all__ = [
    "SHELF_LIFE_THRESHOLD_PCT",
    "ShelfLifeEstimate",
    "cumulative_weight_loss",
    "trajectory_losses",
    "estimate_shelf_life",
    "remaining_shelf_life",
]
