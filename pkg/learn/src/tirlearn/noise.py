"""Training-time noise injection.

Self-supervised denoising needs the already-noisy camera frame as the
target and a further-corrupted copy as the input, so corruption happens
here, in training only; inference sees the camera frame as-is. The
injected noise is centered Poisson, clamped to the 16-bit range.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError


def centered_poisson(arr: np.ndarray, lam: float, rng: np.random.Generator) -> np.ndarray:
    """clamp(arr + (Poisson(lam) - lam), 0, 65535) on a uint16 array."""
    if lam <= 0:
        raise ConfigError(f"noise lambda must be positive, got {lam}")
    lifted = arr.astype(np.float64) + (rng.poisson(lam, size=arr.shape) - lam)
    return np.clip(np.floor(lifted + 0.5), 0, 65535).astype(np.uint16)


def noisy_as_clean_augment(arr: np.ndarray, lam: float, seed: int) -> np.ndarray:
    return centered_poisson(arr, lam, np.random.default_rng(seed))
