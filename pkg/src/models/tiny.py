# -*- coding: utf-8 -*-
"""
Desk-scale backbones.

TinyCNN: stem + residual stage + dense stage + final conv stage (~110k parameters).
TinyViT: depth-2 patch transformer, embed 64, built with einops.
Both end in a pooled feature vector and take the same ClassifierHead as the
pretrained families.
"""

from collections import OrderedDict
from typing import List

import torch
import torch.nn as nn
from einops import rearrange, repeat
from einops.layers.torch import Rearrange

from .spec import ViTConfig


class ResidualBlock(nn.Module):
    """Pre-activation residual block: y = F(x, {W_i}) + x."""

    def __init__(self, channels: int):
        super().__init__()
        self.residual = nn.Sequential(
            nn.BatchNorm2d(channels),
            nn.ReLU(),
            nn.Conv2d(channels, channels, 3, padding=1, bias=False),
            nn.BatchNorm2d(channels),
            nn.ReLU(),
            nn.Conv2d(channels, channels, 3, padding=1, bias=False),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.residual(x) + x


class DenseLayer(nn.Module):
    def __init__(self, in_channels: int, growth: int):
        super().__init__()
        self.in_channels = in_channels
        self.body = nn.Sequential(
            nn.BatchNorm2d(in_channels),
            nn.ReLU(),
            nn.Conv2d(in_channels, growth, 3, padding=1, bias=False),
        )

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.body(x)


class DenseBlock(nn.Module):
    """Dense connectivity: x_l = H_l([x_0, ..., x_{l-1}])."""

    def __init__(self, in_channels: int, growth: int, n_layers: int):
        super().__init__()
        self.layers = nn.ModuleList(
            DenseLayer(in_channels + i * growth, growth) for i in range(n_layers)
        )
        self.out_channels = in_channels + n_layers * growth

    @property
    def layer_input_channels(self) -> List[int]:
        return [layer.in_channels for layer in self.layers]

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        features = [x]
        for layer in self.layers:
            features.append(layer(torch.cat(features, dim=1)))
        return torch.cat(features, dim=1)


def _conv_bn_relu(cin: int, cout: int, stride: int) -> nn.Sequential:
    return nn.Sequential(
        nn.Conv2d(cin, cout, 3, stride=stride, padding=1, bias=False),
        nn.BatchNorm2d(cout),
        nn.ReLU(),
    )


class TinyCNN(nn.Module):
    """Four conv blocks with a residual and a dense stage; outputs a 128-d vector."""

    feature_width = 128

    def __init__(self):
        super().__init__()
        dense = DenseBlock(32, growth=16, n_layers=2)
        self.features = nn.Sequential(OrderedDict([
            ("block1", _conv_bn_relu(3, 16, stride=2)),
            ("block2", nn.Sequential(_conv_bn_relu(16, 32, stride=2), ResidualBlock(32))),
            ("block3", nn.Sequential(dense, nn.Conv2d(dense.out_channels, 64, 1), nn.AvgPool2d(2))),
            ("block4", _conv_bn_relu(64, self.feature_width, stride=2)),
        ]))
        self.pool = nn.AdaptiveAvgPool2d(1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return torch.flatten(self.pool(self.features(x)), 1)


class SelfAttention(nn.Module):
    """Multi-head self-attention: softmax(QK^T / sqrt(d_k)) V."""

    def __init__(self, dim: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = dim // heads
        self.scale = self.head_dim ** -0.5
        self.to_qkv = nn.Linear(dim, dim * 3)
        self.to_out = nn.Linear(dim, dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        q, k, v = (
            rearrange(t, "b n (h d) -> b h n d", h=self.heads)
            for t in self.to_qkv(x).chunk(3, dim=-1)
        )
        attn = torch.softmax(torch.matmul(q, k.transpose(-1, -2)) * self.scale, dim=-1)
        out = rearrange(torch.matmul(attn, v), "b h n d -> b n (h d)")
        return self.to_out(out)


class EncoderBlock(nn.Module):
    def __init__(self, dim: int, heads: int, mlp_dim: int):
        super().__init__()
        self.norm1 = nn.LayerNorm(dim)
        self.attention = SelfAttention(dim, heads)
        self.norm2 = nn.LayerNorm(dim)
        self.mlp = nn.Sequential(nn.Linear(dim, mlp_dim), nn.GELU(), nn.Linear(mlp_dim, dim))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = x + self.attention(self.norm1(x))
        return x + self.mlp(self.norm2(x))


class TinyViT(nn.Module):
    """Patch transformer; forward returns the normalized class token."""

    def __init__(self, config: ViTConfig):
        super().__init__()
        self.config = config
        p = config.patch_size
        self.feature_width = config.embed_dim

        self.to_patch_embedding = nn.Sequential(
            Rearrange("b c (h p1) (w p2) -> b (h w) (p1 p2 c)", p1=p, p2=p),
            nn.Linear(3 * p * p, config.embed_dim),
        )
        self.cls_token = nn.Parameter(torch.zeros(1, 1, config.embed_dim))
        self.pos_embedding = nn.Parameter(torch.zeros(1, config.sequence_length, config.embed_dim))
        self.blocks = nn.Sequential(
            *[EncoderBlock(config.embed_dim, config.heads, config.mlp_dim) for _ in range(config.depth)]
        )
        self.norm = nn.LayerNorm(config.embed_dim)

        nn.init.trunc_normal_(self.cls_token, std=0.02)
        nn.init.trunc_normal_(self.pos_embedding, std=0.02)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        tokens = self.to_patch_embedding(x)
        cls = repeat(self.cls_token, "1 1 d -> b 1 d", b=tokens.shape[0])
        tokens = torch.cat([cls, tokens], dim=1) + self.pos_embedding
        tokens = self.blocks(tokens)
        return self.norm(tokens[:, 0])


__all__ = ["ResidualBlock", "DenseLayer", "DenseBlock", "TinyCNN", "SelfAttention", "EncoderBlock", "TinyViT"]
