"""Inference: one clean forward pass, quantized to 8 bits."""

from __future__ import annotations

import numpy as np
import torch

from .errors import InvalidShape
from .unet import ToneMapNet


def infer(model: ToneMapNet, arr: np.ndarray) -> np.ndarray:
    """Map one 16-bit frame to 8 bits. No noise is added here."""
    if arr.ndim != 2:
        raise InvalidShape(f"expected a single-channel frame, got shape {arr.shape}")
    x = torch.from_numpy(arr.astype(np.float32) / 65535.0)[None, None]
    model.eval()
    with torch.no_grad():
        out = model(x)[0, 0].numpy()
    scaled = np.clip(out, 0.0, 1.0) * 255.0
    return np.clip(np.floor(scaled + 0.5), 0, 255).astype(np.uint8)
