"""Post-retinex enhancement and deflickering.

Histogram equalization and CLAHE share one frozen LUT rule,
lut[v] = floor(255 * cdf(v) / N), and one degenerate rule: a frame with a
single occupied bin passes through unchanged (any CDF mapping would move
a constant frame off its value, which must not happen mid-pipeline).
All real-to-8-bit quantization is round-half-up via imgio.quantize_u8.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigError,
    EmptyReference,
    FrameTooSmall,
    InvalidPercentiles,
)
from .imgio import Histogram, LdrFrame, RealPlane, quantize_u8


@dataclass(frozen=True)
class ClaheConfig:
    """Tile grid and clip limit; tiles 1x1 is the global (untiled) variant.

    clip_limit is a multiple of the uniform bin height; math.inf disables
    clipping, which at 1x1 makes clahe identical to hist_equalize.
    """

    tiles_x: int = 1
    tiles_y: int = 1
    clip_limit: float = 2.0

    def __post_init__(self):
        if int(self.tiles_x) != self.tiles_x or int(self.tiles_y) != self.tiles_y:
            raise ConfigError("clahe tile counts must be integers")
        object.__setattr__(self, "tiles_x", int(self.tiles_x))
        object.__setattr__(self, "tiles_y", int(self.tiles_y))
        object.__setattr__(self, "clip_limit", float(self.clip_limit))
        if self.tiles_x < 1 or self.tiles_y < 1:
            raise ConfigError("clahe tile counts must be >= 1")
        if not self.clip_limit > 1:
            raise ConfigError("clahe clip_limit must be > 1")


class TemporalState:
    """Rolling deflicker history for one video stream.

    ref_window holds the last `window` input-frame histograms (the
    reference is their mean); mean_window holds the last few output mean
    intensities in 8-bit units. Update order is frame order; one state
    per stream.
    """

    def __init__(self, window: int = 100, mean_window_len: int = 10):
        if window < 1:
            raise ConfigError("deflicker window must be >= 1")
        if mean_window_len < 1:
            raise ConfigError("mean window length must be >= 1")
        self.ref_window: deque[np.ndarray] = deque(maxlen=window)
        self.mean_window: deque[float] = deque(maxlen=mean_window_len)


def _lut_from_hist(hist: np.ndarray, total: float) -> np.ndarray:
    """lut[v] = floor(255 * cdf(v) / total), monotone by construction."""
    cdf = np.cumsum(hist, dtype=np.float64)
    return np.floor(255.0 * cdf / float(total)).astype(np.uint8)


def _occupied_bins(frame: LdrFrame) -> int:
    return int(np.count_nonzero(np.bincount(frame.data.ravel(), minlength=256)))


def hist_equalize(frame: LdrFrame) -> LdrFrame:
    """Global histogram equalization; constant frames pass through."""
    counts = np.bincount(frame.data.ravel(), minlength=256)
    if np.count_nonzero(counts) == 1:
        return frame
    lut = _lut_from_hist(counts, frame.data.size)
    return LdrFrame(lut[frame.data])


def _clipped_hist(counts: np.ndarray, clip_limit: float) -> np.ndarray:
    hist = counts.astype(np.float64)
    if math.isinf(clip_limit):
        return hist
    clip = clip_limit * hist.sum() / 256.0
    excess = np.maximum(hist - clip, 0.0).sum()
    return np.minimum(hist, clip) + excess / 256.0


def clahe(frame: LdrFrame, config: ClaheConfig | None = None) -> LdrFrame:
    """Contrast-limited (adaptive) histogram equalization.

    Per-tile histograms are clipped at clip_limit times the uniform bin
    height, the clipped mass is redistributed uniformly in one pass, and
    tile LUTs are blended bilinearly between tile centers. A 1x1 grid
    applies its single LUT directly.
    """
    if config is None:
        config = ClaheConfig()
    h, w = frame.data.shape
    ty, tx = config.tiles_y, config.tiles_x
    if h < ty or w < tx:
        raise FrameTooSmall(f"{w}x{h} frame cannot hold a {tx}x{ty} tile grid")
    if _occupied_bins(frame) == 1:
        return frame

    if ty == 1 and tx == 1:
        hist = _clipped_hist(np.bincount(frame.data.ravel(), minlength=256),
                             config.clip_limit)
        lut = _lut_from_hist(hist, hist.sum())
        return LdrFrame(lut[frame.data])

    edges_y = [i * h // ty for i in range(ty + 1)]
    edges_x = [j * w // tx for j in range(tx + 1)]
    luts = np.empty((ty, tx, 256), dtype=np.float64)
    for r in range(ty):
        for c in range(tx):
            tile = frame.data[edges_y[r]:edges_y[r + 1], edges_x[c]:edges_x[c + 1]]
            hist = _clipped_hist(np.bincount(tile.ravel(), minlength=256),
                                 config.clip_limit)
            luts[r, c] = _lut_from_hist(hist, hist.sum())

    centers_y = np.array([(edges_y[i] + edges_y[i + 1] - 1) / 2.0 for i in range(ty)])
    centers_x = np.array([(edges_x[j] + edges_x[j + 1] - 1) / 2.0 for j in range(tx)])

    def axis_blend(coords, centers, count):
        if count == 1:
            return np.zeros(coords.shape, dtype=np.intp), np.zeros(coords.shape)
        i0 = np.clip(np.searchsorted(centers, coords, side="right") - 1, 0, count - 2)
        span = centers[i0 + 1] - centers[i0]
        wgt = np.clip((coords - centers[i0]) / span, 0.0, 1.0)
        return i0, wgt

    iy0, wy = axis_blend(np.arange(h, dtype=np.float64), centers_y, ty)
    jx0, wx = axis_blend(np.arange(w, dtype=np.float64), centers_x, tx)
    iy1 = np.minimum(iy0 + 1, ty - 1)
    jx1 = np.minimum(jx0 + 1, tx - 1)

    v = frame.data
    iy0 = iy0[:, None]
    iy1 = iy1[:, None]
    wy = wy[:, None]
    jx0 = jx0[None, :]
    jx1 = jx1[None, :]
    wx = wx[None, :]
    blended = ((1 - wy) * (1 - wx) * luts[iy0, jx0, v]
               + (1 - wy) * wx * luts[iy0, jx1, v]
               + wy * (1 - wx) * luts[iy1, jx0, v]
               + wy * wx * luts[iy1, jx1, v])
    return LdrFrame(quantize_u8(blended))


def simplest_color_balance(plane: RealPlane, s_low: float, s_high: float) -> RealPlane:
    """Saturate the outer percentiles, then stretch affinely to [0, 255]."""
    if s_low < 0 or s_high < 0 or s_low + s_high >= 100:
        raise InvalidPercentiles(
            f"need 0 <= s_low + s_high < 100, got {s_low} + {s_high}"
        )
    d = plane.data
    lo = float(np.percentile(d, s_low, method="nearest"))
    hi = float(np.percentile(d, 100.0 - s_high, method="nearest"))
    if hi == lo:
        return RealPlane(np.full(d.shape, 127.0))
    clipped = np.clip(d, lo, hi)
    return RealPlane((clipped - lo) * 255.0 / (hi - lo))


def sigma_clip(plane: RealPlane, k: float = 3.0) -> RealPlane:
    """Clamp values to mean +- k standard deviations (population std)."""
    if k <= 0:
        raise ConfigError(f"sigma clip factor must be positive, got {k}")
    d = plane.data
    mu = d.mean()
    sd = d.std()
    return RealPlane(np.clip(d, mu - k * sd, mu + k * sd))


def rescale_to_ldr(plane: RealPlane) -> LdrFrame:
    """Map [min, max] to [0, 255] with round-half-up; constant planes to 127."""
    d = plane.data
    lo = d.min()
    hi = d.max()
    if hi == lo:
        return LdrFrame(np.full(d.shape, 127, dtype=np.uint8))
    return LdrFrame(quantize_u8((d - lo) * 255.0 / (hi - lo)))


def histogram_match(frame: LdrFrame, reference: Histogram) -> LdrFrame:
    """Remap values so the frame's CDF tracks the reference CDF.

    out(v) is the u minimizing |cdf_ref(u) - cdf_frame(v)|; ties and flat
    CDF runs resolve to the smallest u. The mapping is monotone
    non-decreasing.
    """
    if reference.bins.shape[0] != 256:
        raise ValueError("histogram_match expects an 8-bit (256-bin) reference")
    if not reference.total > 0:
        raise EmptyReference("reference histogram is empty")
    cdf_ref = np.cumsum(reference.bins, dtype=np.float64) / float(reference.total)
    counts = np.bincount(frame.data.ravel(), minlength=256)
    cdf_frame = np.cumsum(counts, dtype=np.float64) / float(frame.data.size)

    idx = np.searchsorted(cdf_ref, cdf_frame, side="left")
    hi = np.clip(idx, 0, 255)
    lo = np.clip(idx - 1, 0, 255)
    d_hi = np.abs(cdf_ref[hi] - cdf_frame)
    d_lo = np.abs(cdf_ref[lo] - cdf_frame)
    chosen = np.where(d_lo <= d_hi, lo, hi)
    # land on the first index of a flat CDF run (equal distance, smaller u)
    chosen = np.searchsorted(cdf_ref, cdf_ref[chosen], side="left")
    lut = chosen.astype(np.uint8)
    return LdrFrame(lut[frame.data])


def deflicker_update(state: TemporalState, frame: LdrFrame) -> LdrFrame:
    """Match the frame against the mean of buffered input histograms.

    With an empty buffer the frame passes through. The input frame's
    histogram is pushed after matching, so the reference never includes
    the current frame and never sees matched outputs.
    """
    input_hist = np.bincount(frame.data.ravel(), minlength=256).astype(np.int64)
    if state.ref_window:
        mean_bins = np.mean(np.stack(state.ref_window), axis=0)
        reference = Histogram(mean_bins, float(mean_bins.sum()))
        out = histogram_match(frame, reference)
    else:
        out = frame
    state.ref_window.append(input_hist)
    state.mean_window.append(float(out.data.mean()))
    return out
