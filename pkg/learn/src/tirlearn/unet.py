"""Single-channel encoder-decoder with skip connections.

Feature maps start at `width` and double at each of the `depth`
resolution levels, so the bottleneck carries width * 2**(depth-1)
channels. Inputs must be divisible by 2**depth on both axes.
"""

from __future__ import annotations

import torch
from torch import nn

from .config import TrainConfig
from .errors import InvalidShape


def _num_groups(channels: int) -> int:
    # largest divisor of the channel count not above 8
    for g in range(min(8, channels), 0, -1):
        if channels % g == 0:
            return g
    return 1


def _norm(kind: str, channels: int) -> nn.Module:
    if kind == "batch":
        return nn.BatchNorm2d(channels)
    return nn.GroupNorm(_num_groups(channels), channels)


class ConvBlock(nn.Module):
    """Two 3x3 convolutions, each followed by normalization and ReLU."""

    def __init__(self, c_in: int, c_out: int, norm: str):
        super().__init__()
        self.body = nn.Sequential(
            nn.Conv2d(c_in, c_out, 3, padding=1),
            _norm(norm, c_out),
            nn.ReLU(inplace=True),
            nn.Conv2d(c_out, c_out, 3, padding=1),
            _norm(norm, c_out),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.body(x)


class ToneMapNet(nn.Module):
    def __init__(self, depth: int, width: int, norm: str):
        super().__init__()
        self.depth = depth
        channels = [width * 2 ** level for level in range(depth)]

        self.encoders = nn.ModuleList()
        c_prev = 1
        for c in channels:
            self.encoders.append(ConvBlock(c_prev, c, norm))
            c_prev = c
        self.pool = nn.MaxPool2d(2)

        self.upsamplers = nn.ModuleList()
        self.decoders = nn.ModuleList()
        for c_hi, c_lo in zip(channels[:0:-1], channels[-2::-1]):
            self.upsamplers.append(nn.ConvTranspose2d(c_hi, c_lo, 2, stride=2))
            self.decoders.append(ConvBlock(c_hi, c_lo, norm))
        self.head = nn.Conv2d(width, 1, 1)

    @property
    def bottleneck_channels(self) -> int:
        return self.encoders[-1].body[0].out_channels

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h, w = x.shape[-2:]
        divisor = 2 ** self.depth
        if h % divisor or w % divisor:
            raise InvalidShape(
                f"input {w}x{h} not divisible by 2^{self.depth} = {divisor}"
            )
        skips = []
        for encoder in self.encoders[:-1]:
            x = encoder(x)
            skips.append(x)
            x = self.pool(x)
        x = self.encoders[-1](x)
        for up, decoder, skip in zip(self.upsamplers, self.decoders, reversed(skips)):
            x = torch.cat([up(x), skip], dim=1)
            x = decoder(x)
        return self.head(x)


def build_model(config: TrainConfig) -> ToneMapNet:
    return ToneMapNet(config.depth, config.width, config.normalization)
