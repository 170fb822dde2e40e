"""Quality measures for tone-mapped sequences.

Eight measures: TMQI (with its structural-fidelity and naturalness
parts), under/overexposure percentages, global/local contrast loss,
noise visibility against a noisy twin run, and global/local temporal
incoherence. evaluate_sequence assembles them into one report.

The TMQI here follows the canonical published definition (Q = a*S^alpha
+ (1-a)*N^beta with the standard constants, five-level structural
pooling, statistical naturalness from the LDR mean/std densities). An
independent loop-based port lives in the test suite as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage
from scipy.special import ndtr
from scipy.stats import beta as beta_dist

from .errors import DimensionMismatch, SequenceMismatch, TooFewFrames
from .imgio import HdrFrame, LdrFrame

# fixed TMQI constants (canonical definition)
_TMQI_A = 0.8012
_TMQI_ALPHA = 0.3046
_TMQI_BETA = 0.7088
_LEVEL_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
_C1 = 0.01
_C2 = 10.0
_NAT_MEAN_MU = 115.94
_NAT_MEAN_SIG = 27.99
_NAT_STD_SCALE = 64.29
_NAT_BETA_A = 4.4
_NAT_BETA_B = 10.1

# five-level pooling needs ceil(side/16) >= 11 at the coarsest level
MIN_TMQI_SIDE = 161

UNDEREXPOSED_MAX = 2
OVEREXPOSED_MIN = 253

NOISE_FLOOR_MSE = 1e-12


@dataclass(frozen=True)
class TmqiBreakdown:
    q: float
    structural_fidelity_s: float
    naturalness_n: float


@dataclass
class MetricsReport:
    """One row of the evaluation table; None marks a non-applicable field."""

    tmqi: float | None = None
    underexposure_pct: float | None = None
    overexposure_pct: float | None = None
    global_contrast_loss: float | None = None
    local_contrast_loss: float | None = None
    noise_visibility_db: float | None = None
    global_temporal_incoherence: float | None = None
    local_temporal_incoherence: float | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}


def _gauss_window_1d(size: int = 11, sigma: float = 1.5) -> np.ndarray:
    half = (size - 1) / 2.0
    x = np.arange(size, dtype=np.float64) - half
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return g / g.sum()


def _valid_mean(img: np.ndarray, win1d: np.ndarray) -> np.ndarray:
    half = (win1d.shape[0] - 1) // 2
    out = ndimage.correlate1d(img, win1d, axis=0, mode="constant")
    out = ndimage.correlate1d(out, win1d, axis=1, mode="constant")
    return out[half:img.shape[0] - half, half:img.shape[1] - half]


def _slocal(x: np.ndarray, y: np.ndarray, f: float, win1d: np.ndarray) -> float:
    mu1 = _valid_mean(x, win1d)
    mu2 = _valid_mean(y, win1d)
    sigma1_sq = np.maximum(_valid_mean(x * x, win1d) - mu1 * mu1, 0.0)
    sigma2_sq = np.maximum(_valid_mean(y * y, win1d) - mu2 * mu2, 0.0)
    sigma1 = np.sqrt(sigma1_sq)
    sigma2 = np.sqrt(sigma2_sq)
    sigma12 = _valid_mean(x * y, win1d) - mu1 * mu2

    csf = 100.0 * 2.6 * (0.0192 + 0.114 * f) * math.exp(-((0.114 * f) ** 1.1))
    u = 128.0 / (1.4 * csf)
    sig = u / 3.0
    sigma1p = ndtr((sigma1 - u) / sig)
    sigma2p = ndtr((sigma2 - u) / sig)

    s_map = (((2.0 * sigma1p * sigma2p + _C1)
              / (sigma1p * sigma1p + sigma2p * sigma2p + _C1))
             * ((sigma12 + _C2) / (sigma1 * sigma2 + _C2)))
    return float(s_map.mean())


def _downsample2(img: np.ndarray) -> np.ndarray:
    smoothed = ndimage.correlate(img, np.full((2, 2), 0.25), mode="reflect")
    return smoothed[0::2, 0::2]


def _structural_fidelity(x: np.ndarray, y: np.ndarray) -> float:
    win1d = _gauss_window_1d()
    s = 1.0
    f = 32.0
    for level, weight in enumerate(_LEVEL_WEIGHTS):
        f /= 2.0
        s *= _slocal(x, y, f, win1d) ** weight
        if level < len(_LEVEL_WEIGHTS) - 1:
            x = _downsample2(x)
            y = _downsample2(y)
    return s


def _block_std_mean(img: np.ndarray, block: int = 11) -> float:
    h, w = img.shape
    stds = []
    for i in range(0, h, block):
        for j in range(0, w, block):
            tile = img[i:i + block, j:j + block]
            stds.append(float(tile.std(ddof=1)) if tile.size > 1 else 0.0)
    return float(np.mean(stds))


def _naturalness(ldr: np.ndarray) -> float:
    u = float(ldr.mean())
    sig = _block_std_mean(ldr)
    z = (u - _NAT_MEAN_MU) / _NAT_MEAN_SIG
    pd = math.exp(-0.5 * z * z)
    mode = (_NAT_BETA_A - 1.0) / (_NAT_BETA_A + _NAT_BETA_B - 2.0)
    peak = beta_dist.pdf(mode, _NAT_BETA_A, _NAT_BETA_B)
    ps = float(beta_dist.pdf(sig / _NAT_STD_SCALE, _NAT_BETA_A, _NAT_BETA_B)) / peak
    return float(np.clip(pd * ps, 0.0, 1.0))


def tmqi(hdr: HdrFrame, ldr: LdrFrame) -> TmqiBreakdown:
    """Tone-mapped image quality index of an HDR/LDR pair.

    Frames need matching shapes with min side >= 161 so the coarsest
    pooling level still holds one full 11x11 window.
    """
    if hdr.data.shape != ldr.data.shape:
        raise DimensionMismatch(
            f"hdr {hdr.data.shape} vs ldr {ldr.data.shape}"
        )
    if min(hdr.data.shape) < MIN_TMQI_SIDE:
        raise DimensionMismatch(
            f"tmqi needs frames of at least {MIN_TMQI_SIDE} px per side, "
            f"got {hdr.data.shape}"
        )
    x = hdr.data.astype(np.float64)
    y = ldr.data.astype(np.float64)
    lmin = x.min()
    lmax = x.max()
    if lmax > lmin:
        factor = round((2.0 ** 32 - 1.0) / (lmax - lmin))
        x = factor * (x - lmin)
    else:
        x = np.zeros_like(x)
    s = _structural_fidelity(x, y)
    n = _naturalness(y)
    q = _TMQI_A * s ** _TMQI_ALPHA + (1.0 - _TMQI_A) * n ** _TMQI_BETA
    return TmqiBreakdown(float(q), float(s), float(n))


def exposure(ldr: LdrFrame) -> tuple[float, float]:
    """Percent of pixels at or below 2, and at or above 253."""
    d = ldr.data
    n = d.size
    under = 100.0 * np.count_nonzero(d <= UNDEREXPOSED_MAX) / n
    over = 100.0 * np.count_nonzero(d >= OVEREXPOSED_MIN) / n
    return float(under), float(over)


def _block_stds(img: np.ndarray, block: int) -> list[float]:
    h, w = img.shape
    out = []
    for i in range(0, h, block):
        for j in range(0, w, block):
            out.append(float(img[i:i + block, j:j + block].std()))
    return out


def contrast_loss(hdr: HdrFrame, ldr: LdrFrame) -> tuple[float, float]:
    """Normalized-std difference, globally and over 16x16 blocks.

    Images normalize by their dtype range (65535 / 255); positive values
    mean contrast was lost in tone mapping, negative mean it was gained.
    Partial edge blocks stay in the local mean at their natural size.
    """
    if hdr.data.shape != ldr.data.shape:
        raise DimensionMismatch(f"hdr {hdr.data.shape} vs ldr {ldr.data.shape}")
    x = hdr.data.astype(np.float64) / 65535.0
    y = ldr.data.astype(np.float64) / 255.0
    global_loss = float(x.std() - y.std())
    bx = _block_stds(x, 16)
    by = _block_stds(y, 16)
    local_loss = float(np.mean([a - b for a, b in zip(bx, by)]))
    return global_loss, local_loss


def _check_aligned(a: Sequence[LdrFrame], b: Sequence[LdrFrame], what: str) -> None:
    if len(a) != len(b):
        raise SequenceMismatch(f"{what}: lengths {len(a)} vs {len(b)}")
    for i, (fa, fb) in enumerate(zip(a, b)):
        if fa.data.shape != fb.data.shape:
            raise SequenceMismatch(
                f"{what}: frame {i} shapes {fa.data.shape} vs {fb.data.shape}"
            )


def noise_visibility(tm_clean: Sequence[LdrFrame], tm_noisy: Sequence[LdrFrame]) -> float:
    """10*log10 of the mean squared difference between paired runs, in dB.

    The MSE is floored at 1e-12 (identical runs report -120 dB).
    """
    if len(tm_clean) < 1:
        raise SequenceMismatch("need at least one frame pair")
    _check_aligned(tm_clean, tm_noisy, "noise_visibility")
    sq_sums = []
    count = 0
    for fc, fn in zip(tm_clean, tm_noisy):
        diff = fc.data.astype(np.float64) - fn.data.astype(np.float64)
        sq_sums.append(float((diff * diff).sum()))
        count += fc.data.size
    mse = max(math.fsum(sq_sums) / count, NOISE_FLOOR_MSE)
    return 10.0 * math.log10(mse)


def temporal_incoherence(seq: Sequence[LdrFrame]) -> tuple[float, float]:
    """Mean squared frame-to-frame change of [0,1]-normalized frames.

    Global uses frame means; local uses per-pixel differences.
    """
    if len(seq) < 2:
        raise TooFewFrames(f"need >= 2 frames, got {len(seq)}")
    for i in range(1, len(seq)):
        if seq[i].data.shape != seq[i - 1].data.shape:
            raise SequenceMismatch(
                f"frame {i} shape {seq[i].data.shape} vs {seq[i - 1].data.shape}"
            )
    global_terms = []
    local_terms = []
    prev = seq[0].data.astype(np.float64) / 255.0
    prev_mean = float(prev.mean())
    for frame in seq[1:]:
        cur = frame.data.astype(np.float64) / 255.0
        cur_mean = float(cur.mean())
        global_terms.append((cur_mean - prev_mean) ** 2)
        diff = cur - prev
        local_terms.append(float((diff * diff).mean()))
        prev, prev_mean = cur, cur_mean
    return (math.fsum(global_terms) / len(global_terms),
            math.fsum(local_terms) / len(local_terms))


def evaluate_sequence(
    hdr_seq: Sequence[HdrFrame],
    ldr_seq: Sequence[LdrFrame],
    noisy_ldr_seq: Sequence[LdrFrame] | None = None,
    include_tmqi: bool = True,
) -> MetricsReport:
    """Assemble the full report for an HDR sequence and its tone-mapped run.

    Temporal fields stay absent for single-frame runs; noise visibility
    stays absent without the noisy twin; per-frame measures aggregate as
    plain means (compensated summation).
    """
    if len(hdr_seq) < 1:
        raise SequenceMismatch("empty sequence")
    if len(hdr_seq) != len(ldr_seq):
        raise SequenceMismatch(f"hdr {len(hdr_seq)} frames vs ldr {len(ldr_seq)}")
    for i, (fh, fl) in enumerate(zip(hdr_seq, ldr_seq)):
        if fh.data.shape != fl.data.shape:
            raise DimensionMismatch(
                f"frame {i}: hdr {fh.data.shape} vs ldr {fl.data.shape}"
            )
    report = MetricsReport()
    n = len(ldr_seq)
    if include_tmqi:
        report.tmqi = math.fsum(tmqi(fh, fl).q for fh, fl in zip(hdr_seq, ldr_seq)) / n
    exp_pairs = [exposure(fl) for fl in ldr_seq]
    report.underexposure_pct = math.fsum(p[0] for p in exp_pairs) / n
    report.overexposure_pct = math.fsum(p[1] for p in exp_pairs) / n
    closses = [contrast_loss(fh, fl) for fh, fl in zip(hdr_seq, ldr_seq)]
    report.global_contrast_loss = math.fsum(c[0] for c in closses) / n
    report.local_contrast_loss = math.fsum(c[1] for c in closses) / n
    if noisy_ldr_seq is not None:
        report.noise_visibility_db = noise_visibility(ldr_seq, noisy_ldr_seq)
    if n >= 2:
        g, l = temporal_incoherence(ldr_seq)
        report.global_temporal_incoherence = g
        report.local_temporal_incoherence = l
    return report
