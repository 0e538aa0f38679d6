# -*- coding: utf-8 -*-
"""
Label-smoothed cross-entropy.

Target q: q(true) = 1 - eps + eps/K, q(other) = eps/K.
Loss = -sum(q * log_softmax(logits)); gradient w.r.t. logits = softmax(logits) - q.
Class indices here are 0-based.
"""

import numpy as np
import torch.nn as nn
from scipy.special import log_softmax, softmax

from ..core.errors import InvalidClassIndex


def _check(logits: np.ndarray, true_class: int, epsilon: float) -> np.ndarray:
    logits = np.asarray(logits, dtype=np.float64)
    if logits.ndim != 1 or logits.shape[0] < 2:
        raise ValueError("logits must be a vector of length >= 2")
    if not 0 <= true_class < logits.shape[0]:
        raise InvalidClassIndex(f"true_class {true_class} outside [0, {logits.shape[0]})")
    if not 0.0 <= epsilon < 1.0:
        raise ValueError(f"epsilon must be in [0, 1), got {epsilon}")
    return logits


def smoothed_target(n_classes: int, true_class: int, epsilon: float) -> np.ndarray:
    q = np.full(n_classes, epsilon / n_classes)
    q[true_class] += 1.0 - epsilon
    return q


def smoothed_cross_entropy(logits: np.ndarray, true_class: int, epsilon: float) -> float:
    """Cross-entropy of softmax(logits) against the smoothed one-hot target."""
    logits = _check(logits, true_class, epsilon)
    q = smoothed_target(logits.shape[0], true_class, epsilon)
    return float(-(q * log_softmax(logits)).sum())


def smoothed_cross_entropy_grad(logits: np.ndarray, true_class: int, epsilon: float) -> np.ndarray:
    """Analytic gradient of smoothed_cross_entropy w.r.t. logits."""
    logits = _check(logits, true_class, epsilon)
    return softmax(logits) - smoothed_target(logits.shape[0], true_class, epsilon)


def make_criterion(epsilon: float) -> nn.Module:
    """Batched torch equivalent (mean over the batch)."""
    return nn.CrossEntropyLoss(label_smoothing=epsilon)


__all__ = [
    "smoothed_target",
    "smoothed_cross_entropy",
    "smoothed_cross_entropy_grad",
    "make_criterion",
]
