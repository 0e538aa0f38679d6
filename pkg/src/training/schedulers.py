# -*- coding: utf-8 -*-
"""
Plateau learning-rate schedule and early stopping.

Both watch validation loss. A value improves when it is below the best by at least
the threshold. Epochs are 1-based.
"""

from dataclasses import dataclass, replace
from typing import Tuple


@dataclass(frozen=True)
class PlateauState:
    lr: float
    best_metric: float = float("inf")
    epochs_since_improve: int = 0
    reductions: int = 0


@dataclass(frozen=True)
class EarlyStopState:
    best_metric: float = float("inf")
    best_epoch: int = 0
    epochs_since_improve: int = 0


def is_improvement(metric: float, best: float, threshold: float = 1e-8) -> bool:
    return best - metric >= threshold


def plateau_step(
    state: PlateauState,
    current_metric: float,
    factor: float = 0.5,
    patience: int = 30,
    threshold: float = 1e-8,
) -> PlateauState:
    """
    Advance the plateau scheduler by one epoch.

    The counter resets on improvement; once it exceeds patience the learning rate is
    multiplied by factor and the counter resets.
    """
    if state.lr <= 0:
        raise ValueError("lr must be positive")

    if is_improvement(current_metric, state.best_metric, threshold):
        return replace(state, best_metric=current_metric, epochs_since_improve=0)

    counter = state.epochs_since_improve + 1
    if counter > patience:
        return replace(state, lr=state.lr * factor, epochs_since_improve=0, reductions=state.reductions + 1)
    return replace(state, epochs_since_improve=counter)


def early_stop_update(
    state: EarlyStopState,
    epoch: int,
    metric: float,
    patience: int = 100,
    threshold: float = 1e-8,
) -> Tuple[bool, EarlyStopState]:
    """
    Record one epoch's metric.

    Returns:
        (stop, new_state); stop is True once epochs_since_improve reaches patience,
        i.e. at best_epoch + patience (best_epoch + 1 when patience is 0)
    """
    if is_improvement(metric, state.best_metric, threshold):
        return False, EarlyStopState(best_metric=metric, best_epoch=epoch, epochs_since_improve=0)

    counter = state.epochs_since_improve + 1
    new_state = replace(state, epochs_since_improve=counter)
    return counter >= patience, new_state


__all__ = ["PlateauState", "EarlyStopState", "is_improvement", "plateau_step", "early_stop_update"]
