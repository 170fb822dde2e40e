"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np
import pytest
from PIL import Image
from scipy import ndimage

from tirtone.imgio import HdrFrame, LdrFrame


def hdr(arr) -> HdrFrame:
    return HdrFrame(np.asarray(arr, dtype=np.uint16))


def ldr(arr) -> LdrFrame:
    return LdrFrame(np.asarray(arr, dtype=np.uint8))


def write_png16(path, arr) -> None:
    Image.fromarray(np.asarray(arr, dtype=np.uint16)).save(path, format="PNG")


def write_png8(path, arr) -> None:
    Image.fromarray(np.asarray(arr, dtype=np.uint8)).save(path, format="PNG")


def smooth_field(shape, rng, lo, hi, blur=6.0):
    """Smoothed random scene scaled to [lo, hi], returned as float64."""
    base = ndimage.gaussian_filter(rng.standard_normal(shape), blur)
    mn, mx = base.min(), base.max()
    if mx == mn:
        return np.full(shape, (lo + hi) / 2.0)
    return lo + (base - mn) * (hi - lo) / (mx - mn)


def smooth_hdr(shape, rng, lo=2000, hi=60000, blur=6.0) -> HdrFrame:
    return hdr(np.round(smooth_field(shape, rng, lo, hi, blur)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
