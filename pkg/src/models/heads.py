# -*- coding: utf-8 -*-
"""Classifier heads shared by every backbone family."""

from typing import List

import torch
import torch.nn as nn

from .spec import HeadConfig


class ClassifierHead(nn.Module):
    """
    Modified top layers.

    Per hidden width: Linear -> BatchNorm1d -> ReLU -> Dropout. Then Linear(n_classes).
    forward returns pre-softmax scores; normalization happens at prediction time.
    """

    def __init__(self, in_features: int, config: HeadConfig):
        super().__init__()
        self.config = config

        layers: List[nn.Module] = []
        width = in_features
        for hidden in config.hidden_widths:
            layers.append(nn.Linear(width, hidden))
            if config.use_batch_norm:
                layers.append(nn.BatchNorm1d(hidden))
            layers.append(nn.ReLU(inplace=True))
            layers.append(nn.Dropout(config.dropout_rate))
            width = hidden

        self.hidden = nn.Sequential(*layers)
        self.out = nn.Linear(width, config.n_classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.out(self.hidden(x))


__all__ = ["ClassifierHead"]
