# -*- coding: utf-8 -*-
"""
Published reference values.

Reference only: the underlying dataset is private and the hardware unstated. Reports
show these beside measured values, never in place of them.
"""

from typing import Dict, Tuple

# Sprout/non-sprout, 5-fold mean and std per backbone
SPROUT_TABLE: Dict[str, Dict[str, Tuple[float, float]]] = {
    "VGG16": {
        "accuracy": (0.9181, 0.0544),
        "f1": (0.9118, 0.0624),
        "precision": (0.9291, 0.0432),
        "recall": (0.91813, 0.0545),
    },
    "RESNET50": {
        "accuracy": (0.9771, 0.0187),
        "f1": (0.9773, 0.0182),
        "precision": (0.9793, 0.0159),
        "recall": (0.9771, 0.0018),
    },
    "DENSENET121": {
        "accuracy": (0.9803, 0.0137),
        "f1": (0.9804, 0.0137),
        "precision": (0.9816, 0.0126),
        "recall": (0.9803, 0.0137),
    },
    "VIT_B16": {
        "accuracy": (0.9804, 0.0179),
        "f1": (0.9803, 0.0181),
        "precision": (0.9806, 0.0181),
        "recall": (0.9804, 0.0179),
    },
}

# 5-class shelf life, 5-fold mean and std per backbone
FIVE_CLASS_TABLE: Dict[str, Dict[str, Tuple[float, float]]] = {
    "DENSENET121": {
        "accuracy": (0.8918, 0.0298),
        "f1": (0.8908, 0.0308),
        "precision": (0.9015, 0.0236),
        "recall": (0.8918, 0.0298),
    },
    "VGG16": {
        "accuracy": (0.7213, 0.0418),
        "f1": (0.6911, 0.0522),
        "precision": (0.7074, 0.0811),
        "recall": (0.7213, 0.0418),
    },
    "RESNET50": {
        "accuracy": (0.8131, 0.0377),
        "f1": (0.8043, 0.0462),
        "precision": (0.8545, 0.0287),
        "recall": (0.8131, 0.0377),
    },
    "VIT_B16": {
        "accuracy": (0.8984, 0.0618),
        "f1": (0.8975, 0.0627),
        "precision": (0.9045, 0.0618),
        "recall": (0.8984, 0.0618),
    },
}

# Mean accuracy by class count (2..7); the two published figures for n=2 disagree
CLASS_COUNT_ACCURACY: Dict[int, float] = {
    2: 0.9934,
    3: 0.9576,
    4: 0.9738,
    5: 0.8918,
    6: 0.8660,
    7: 0.8268,
}
CLASS_COUNT_ACCURACY_N2_CHART = 0.9901

# Binary confusion matrix of the best sprout model: [[TN, FP], [FN, TP]]
SPROUT_CONFUSION = ((18, 0), (1, 42))

# Five human experts, 4-class shelf life
HUMAN_BENCHMARK: Dict[str, float] = {
    "accuracy": 0.9020,
    "precision": 0.9139,
    "recall": 0.9020,
    "f1": 0.9079,
}
HUMAN_BENCHMARK_CLASSES = 4

# Cost per backbone: params (M), GMacs, train minutes per fold, inference s/image
PROFILE_TABLE: Dict[str, Dict[str, float]] = {
    "DENSENET121": {"params_m": 6.96, "gmacs": 2.9, "train_min": 15.72, "infer_sec": 0.01219},
    "RESNET50": {"params_m": 23.52, "gmacs": 4.13, "train_min": 13.16, "infer_sec": 0.00486},
    "VGG16": {"params_m": 14.89, "gmacs": 15.4, "train_min": 16.95, "infer_sec": 0.00191},
    "VIT_B16": {"params_m": 86.6, "gmacs": 17.61, "train_min": 19.45, "infer_sec": 0.00422},
}


__all__ = [
    "SPROUT_TABLE",
    "FIVE_CLASS_TABLE",
    "CLASS_COUNT_ACCURACY",
    "CLASS_COUNT_ACCURACY_N2_CHART",
    "SPROUT_CONFUSION",
    "HUMAN_BENCHMARK",
    "HUMAN_BENCHMARK_CLASSES",
    "PROFILE_TABLE",
]
