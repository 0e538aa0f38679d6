# -*- coding: utf-8 -*-
"""
Analytic multiply-accumulate counting.

A forward pass with hooks tallies per sample:
- Conv2d: k_h * k_w * C_in / groups * C_out * H_out * W_out
- Linear: in * out per token
- nn.MultiheadAttention: Q/K/V and output projections (4 N D^2) plus scores and
  weighted sum (2 N^2 D)
- SelfAttention (tiny ViT): scores and weighted sum (2 N^2 D); its projections are
  Linear layers and counted as such

Normalization, activation, pooling and dropout are not counted. Any other leaf layer
carrying parameters is counted as 0 and reported.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import torch
import torch.nn as nn

from ..core.errors import UnsupportedLayer
from ..core.logger import logger
from ..models.tiny import SelfAttention
from ..models.zoo import ModelHandle

IGNORED_TYPES = (
    nn.BatchNorm1d,
    nn.BatchNorm2d,
    nn.LayerNorm,
    nn.GroupNorm,
)


@dataclass
class MacReport:
    total_macs: int
    per_layer: Dict[str, int] = field(default_factory=dict)
    unsupported: List[str] = field(default_factory=list)

    @property
    def gmacs(self) -> float:
        return self.total_macs / 1e9

    @property
    def gflops(self) -> float:
        """Approximate FLOPs (2 per multiply-accumulate)."""
        return 2 * self.gmacs


def conv2d_macs(module: nn.Conv2d, output: torch.Tensor) -> int:
    k_h, k_w = module.kernel_size
    h_out, w_out = output.shape[-2:]
    return int(k_h * k_w * (module.in_channels // module.groups) * module.out_channels * h_out * w_out)


def linear_macs(module: nn.Linear, output: torch.Tensor) -> int:
    tokens = output.numel() // (output.shape[0] * module.out_features)
    return int(module.in_features * module.out_features * tokens)


def attention_macs(n_tokens: int, dim: int, with_projections: bool) -> int:
    core = 2 * n_tokens * n_tokens * dim
    return core + (4 * n_tokens * dim * dim if with_projections else 0)


def _tokens(x: torch.Tensor, batch_first: bool) -> int:
    if x.dim() == 2:
        return int(x.shape[0])
    return int(x.shape[1] if batch_first else x.shape[0])


def count_macs(
    model: Union[ModelHandle, nn.Module],
    input_shape: Sequence[int] = (1, 3, 224, 224),
    strict: bool = False,
) -> MacReport:
    """
    Count multiply-accumulates of one forward pass, per sample.

    Args:
        model: Handle or bare module
        input_shape: (B, C, H, W) of the probe input
        strict: Raise instead of reporting unsupported layers

    Returns:
        MacReport with per-layer counts

    Raises:
        UnsupportedLayer: strict mode and a parameterized layer cannot be counted
    """
    module = model.model if isinstance(model, ModelHandle) else model
    report = MacReport(total_macs=0)
    hooks = []

    def _record(name: str, macs: int) -> None:
        report.per_layer[name] = report.per_layer.get(name, 0) + macs
        report.total_macs += macs

    attention_children = set()
    for name, sub in module.named_modules():
        if isinstance(sub, nn.MultiheadAttention):
            attention_children.update(f"{name}.{child}" for child, _ in sub.named_modules() if child)

    for name, sub in module.named_modules():
        if name in attention_children:
            continue
        if isinstance(sub, nn.Conv2d):
            hooks.append(sub.register_forward_hook(
                lambda m, i, o, n=name: _record(n, conv2d_macs(m, o))))
        elif isinstance(sub, nn.Linear):
            hooks.append(sub.register_forward_hook(
                lambda m, i, o, n=name: _record(n, linear_macs(m, o))))
        elif isinstance(sub, nn.MultiheadAttention):
            hooks.append(sub.register_forward_hook(
                lambda m, i, o, n=name: _record(
                    n, attention_macs(_tokens(i[0], m.batch_first), m.embed_dim, True))))
        elif isinstance(sub, SelfAttention):
            hooks.append(sub.register_forward_hook(
                lambda m, i, o, n=name: _record(
                    n, attention_macs(i[0].shape[1], m.heads * m.head_dim, False))))
        elif isinstance(sub, IGNORED_TYPES):
            continue
        elif not list(sub.children()) and any(True for _ in sub.parameters(recurse=False)):
            message = f"{name} ({type(sub).__name__})"
            if strict:
                for h in hooks:
                    h.remove()
                raise UnsupportedLayer(message)
            report.unsupported.append(message)

    was_training = module.training
    module.eval()
    try:
        device = next(module.parameters()).device
    except StopIteration:
        device = torch.device("cpu")
    try:
        with torch.no_grad():
            module(torch.zeros(*input_shape, device=device))
    finally:
        for h in hooks:
            h.remove()
        module.train(was_training)

    if report.unsupported:
        logger.warning(f"MAC count skipped {len(report.unsupported)} layer(s): {report.unsupported}")
    return report


def gmacs_of(model: Union[ModelHandle, nn.Module], input_size: Optional[int] = 224) -> float:
    return count_macs(model, (1, 3, input_size, input_size)).gmacs


__all__ = [
    "MacReport",
    "conv2d_macs",
    "linear_macs",
    "attention_macs",
    "count_macs",
    "gmacs_of",
]
