"""Shared helpers for the tirlearn suite. Pairs are built from scratch
here: these tests depend on the exporter's file format only, never on
the exporting package."""

from __future__ import annotations

import json

import numpy as np
import pytest
import torch
from PIL import Image


def write_u16(path, arr) -> None:
    Image.fromarray(np.asarray(arr, dtype=np.uint16)).save(path, format="PNG")


def write_u8(path, arr) -> None:
    Image.fromarray(np.asarray(arr, dtype=np.uint8)).save(path, format="PNG")


def smooth_scene(shape, rng, lo, hi, coarse=8):
    """Bilinear upsample of a coarse random grid, scaled to [lo, hi]."""
    grid = torch.from_numpy(rng.standard_normal((1, 1, coarse, coarse)).astype(np.float32))
    up = torch.nn.functional.interpolate(
        grid, size=shape, mode="bilinear", align_corners=True
    )[0, 0].numpy().astype(np.float64)
    mn, mx = up.min(), up.max()
    if mx == mn:
        return np.full(shape, (lo + hi) / 2.0)
    return lo + (up - mn) * (hi - lo) / (mx - mn)


def make_manifest(root, pairs):
    """Write hdr/, ldr/ trees plus pairs.json for (u16, u8) array pairs."""
    hdr_dir = root / "hdr"
    ldr_dir = root / "ldr"
    hdr_dir.mkdir(parents=True, exist_ok=True)
    ldr_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (x, y) in enumerate(pairs):
        name = f"pair_{i:03d}.png"
        write_u16(hdr_dir / name, x)
        write_u8(ldr_dir / name, y)
        entries.append({"hdr": f"hdr/{name}", "ldr": f"ldr/{name}"})
    path = root / "pairs.json"
    path.write_text(json.dumps({"format": "tirtone-pairs-v1", "pairs": entries}))
    return path


def tiny_pairs(rng, n=4, shape=(64, 64)):
    """Small learnable set: target is a fixed global affine downscale."""
    pairs = []
    for _ in range(n):
        x = np.round(smooth_scene(shape, rng, 5000, 60000)).astype(np.uint16)
        y = np.clip(np.floor((x.astype(np.float64) - 4000.0) * 255.0 / 58000.0 + 0.5),
                    0, 255).astype(np.uint8)
        pairs.append((x, y))
    return pairs


@pytest.fixture
def rng():
    return np.random.default_rng(20250825)
