"""Multi-scale retinex: Gaussian surround, log-domain reflectance, weighted sum.

The surround blur is separable (two 1-D passes, kernel truncated at
radius ceil(3*sigma), renormalized, edge replication). Small kernels run
as plain spatial correlation; large ones evaluate the same 1-D
convolution through a cached-kernel real FFT, which is what keeps the
sigma=250 default usable at video rate. Both paths agree to ~1e-10 in
intensity units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.fft as sfft
from scipy import ndimage

from .errors import ConfigError, NonPositiveSigma
from .imgio import HdrFrame, RealPlane

# 1-D passes with radius below this run spatially; at or above, via FFT.
_FFT_MIN_RADIUS = 16

# (sigma, n) -> rfft of the padded kernel, reused across frames of a stream.
_KERNEL_RFFT_CACHE: dict[tuple[float, int], np.ndarray] = {}


@dataclass(frozen=True)
class RetinexConfig:
    """Surround scales, combination weights, and the log guard epsilon."""

    scales: tuple[float, ...] = (15.0, 80.0, 250.0)
    weights: tuple[float, ...] = (1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)
    epsilon: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        if len(self.scales) == 0:
            raise ConfigError("retinex needs at least one scale")
        if len(self.weights) != len(self.scales):
            raise ConfigError("retinex weights and scales must have the same length")
        if any(s <= 0 for s in self.scales):
            raise ConfigError("retinex scales must be strictly positive")
        if any(b <= a for a, b in zip(self.scales, self.scales[1:])):
            raise ConfigError("retinex scales must be strictly increasing")
        if any(w < 0 for w in self.weights):
            raise ConfigError("retinex weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > 1e-6:
            raise ConfigError("retinex weights must sum to 1")
        if self.epsilon <= 0:
            raise ConfigError("retinex epsilon must be positive")


def gaussian_kernel(sigma: float) -> np.ndarray:
    """Sampled 1-D Gaussian, radius ceil(3*sigma), renormalized to sum 1."""
    radius = math.ceil(3.0 * sigma)
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _blur_axis_fft(arr: np.ndarray, sigma: float, kernel: np.ndarray,
                   radius: int, axis: int) -> np.ndarray:
    length = arr.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(arr, pad, mode="edge")
    n = sfft.next_fast_len(padded.shape[axis] + 2 * radius)
    key = (sigma, n)
    kf = _KERNEL_RFFT_CACHE.get(key)
    if kf is None:
        kf = sfft.rfft(kernel, n)
        _KERNEL_RFFT_CACHE[key] = kf
    spec = sfft.rfft(padded, n, axis=axis)
    shape = [1, 1]
    shape[axis] = -1
    spec *= kf.reshape(shape)
    out = sfft.irfft(spec, n, axis=axis)
    # full-convolution index of output pixel i is i + 2*radius
    sl = [slice(None), slice(None)]
    sl[axis] = slice(2 * radius, 2 * radius + length)
    return np.ascontiguousarray(out[tuple(sl)])


def blur_array(arr: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur of a float64 array with edge replication."""
    if sigma <= 0:
        raise NonPositiveSigma(f"sigma must be positive, got {sigma}")
    sigma = float(sigma)
    arr = np.asarray(arr, dtype=np.float64)
    if arr.min() == arr.max():
        # a normalized kernel maps a constant plane to itself; make that
        # exact so downstream min/max rescaling cannot amplify roundoff
        return arr.copy()
    kernel = gaussian_kernel(sigma)
    radius = (kernel.shape[0] - 1) // 2
    if radius < _FFT_MIN_RADIUS:
        out = ndimage.correlate1d(arr, kernel, axis=0, mode="nearest")
        out = ndimage.correlate1d(out, kernel, axis=1, mode="nearest")
        return out
    out = _blur_axis_fft(arr, sigma, kernel, radius, axis=0)
    out = _blur_axis_fft(out, sigma, kernel, radius, axis=1)
    return out


def gaussian_blur(plane: RealPlane, sigma: float) -> RealPlane:
    """Gaussian surround estimate of a real plane."""
    return RealPlane(blur_array(plane.data, sigma))


def single_scale_retinex(frame: HdrFrame, sigma: float, epsilon: float = 1.0) -> RealPlane:
    """log(I + eps) - log(surround + eps) on the real-valued lift of the frame."""
    if epsilon <= 0:
        raise ConfigError(f"epsilon must be positive, got {epsilon}")
    lift = frame.data.astype(np.float64)
    surround = blur_array(lift, sigma)
    return RealPlane(np.log(lift + epsilon) - np.log(surround + epsilon))


def multi_scale_retinex(frame: HdrFrame, config: RetinexConfig | None = None) -> RealPlane:
    """Weighted sum of single-scale retinex planes over config.scales."""
    if config is None:
        config = RetinexConfig()
    lift = frame.data.astype(np.float64)
    log_input = np.log(lift + config.epsilon)
    acc = np.zeros_like(lift)
    for sigma, weight in zip(config.scales, config.weights):
        if weight == 0.0:
            continue
        surround = blur_array(lift, sigma)
        acc += weight * (log_input - np.log(surround + config.epsilon))
    return RealPlane(acc)
