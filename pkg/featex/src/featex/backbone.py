"""Frozen convolutional backbones.

The random-frozen variant draws its weights once from a fixed seed and never
trains; it exists so the whole export-and-learn pipeline runs without any
external weight download (no accuracy is claimed under it). The pretrained
variant loads a state dict from a local file into the same architecture.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

from .errors import MissingData


class ConvBackbone(nn.Module):
    """Small conv stack: per block conv3x3 + ReLU + 2x2 maxpool, then global
    average pooling. The feature dimension equals the last block's channels."""

    def __init__(self, channels=(16, 32), in_channels: int = 1):
        super().__init__()
        layers = []
        previous = in_channels
        for width in channels:
            layers += [
                nn.Conv2d(previous, width, kernel_size=3, padding=1),
                nn.ReLU(inplace=True),
                nn.MaxPool2d(2),
            ]
            previous = width
        self.features = nn.Sequential(*layers)
        self.pool = nn.AdaptiveAvgPool2d(1)
        self.feature_dim = previous

    def forward(self, x):
        return self.pool(self.features(x)).flatten(1)


def random_frozen_backbone(seed: int, channels=(16, 32), in_channels: int = 1) -> ConvBackbone:
    """Seeded random weights, frozen: the same seed always yields the same net."""
    torch.manual_seed(int(seed))
    net = ConvBackbone(channels, in_channels)
    return _freeze(net)


def pretrained_backbone(weights_path, channels=(16, 32), in_channels: int = 1) -> ConvBackbone:
    """Load a locally stored state dict into the standard architecture."""
    try:
        state = torch.load(weights_path, map_location="cpu", weights_only=True)
    except FileNotFoundError as exc:
        raise MissingData(f"backbone weights not found: {weights_path}") from exc
    net = ConvBackbone(channels, in_channels)
    net.load_state_dict(state)
    return _freeze(net)


def _freeze(net: ConvBackbone) -> ConvBackbone:
    net.eval()
    for parameter in net.parameters():
        parameter.requires_grad_(False)
    return net


def extract_features(net: ConvBackbone, images: np.ndarray, batch_size: int = 256) -> np.ndarray:
    """Run (n, channels, h, w) float32 image batches through the frozen net."""
    out = []
    with torch.no_grad():
        for start in range(0, images.shape[0], batch_size):
            batch = torch.from_numpy(images[start : start + batch_size])
            out.append(net(batch).numpy())
    return np.concatenate(out, axis=0) if out else np.zeros((0, net.feature_dim), np.float32)
