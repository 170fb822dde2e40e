"""Frame types, 16-bit ingest / 8-bit emit, histograms, linear downscaling.

Frames wrap 2-D numpy arrays of shape (height, width). Arrays are marked
read-only on construction; treat frames as immutable values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import EmptyInput, IoFailure, MissingFile, UnsupportedFormat

FRAME_SUFFIXES = (".png", ".tif", ".tiff")
SEQUENCE_SIDECAR = "sequence.json"

# Pillow modes that hold single-channel 16-bit data.
_I16_MODES = ("I;16", "I;16L", "I;16B", "I;16N")


def _prepare(data, dtype, lo, hi, kind) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise ValueError(f"{kind} data must be 2-D (height, width), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{kind} must have positive dimensions")
    if arr.dtype != dtype:
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"{kind} requires integer data, got {arr.dtype}")
        if arr.min() < lo or arr.max() > hi:
            raise ValueError(f"{kind} values must lie in [{lo}, {hi}]")
        arr = arr.astype(dtype)
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass
class HdrFrame:
    """Single-channel 16-bit image, values 0..65535."""

    data: np.ndarray

    def __post_init__(self):
        self.data = _prepare(self.data, np.uint16, 0, 65535, "HdrFrame")

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass
class LdrFrame:
    """Single-channel 8-bit image, values 0..255."""

    data: np.ndarray

    def __post_init__(self):
        self.data = _prepare(self.data, np.uint8, 0, 255, "LdrFrame")

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass
class RealPlane:
    """Real-valued intermediate image; every value must be finite."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError(f"RealPlane data must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError("RealPlane must have positive dimensions")
        if not np.isfinite(arr).all():
            raise ValueError("RealPlane values must all be finite")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.data = arr

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def height(self) -> int:
        return self.data.shape[0]


@dataclass
class Histogram:
    """Per-value pixel counts: 256 bins for 8-bit frames, 65536 for 16-bit.

    Bins may be fractional (the deflicker reference is a mean of integer
    histograms); sum(bins) always equals total.
    """

    bins: np.ndarray
    total: float

    def __post_init__(self):
        arr = np.asarray(self.bins)
        if arr.ndim != 1 or arr.shape[0] not in (256, 65536):
            raise ValueError("Histogram needs 256 or 65536 bins")
        if not np.issubdtype(arr.dtype, np.floating):
            arr = arr.astype(np.int64)
        if (arr < 0).any():
            raise ValueError("Histogram counts must be non-negative")
        s = float(arr.sum())
        if abs(s - float(self.total)) > 1e-6 * max(1.0, s):
            raise ValueError(f"Histogram bins sum to {s}, expected total {self.total}")
        arr = np.ascontiguousarray(arr)
        arr.setflags(write=False)
        self.bins = arr


def quantize_u8(values: np.ndarray) -> np.ndarray:
    """Quantize reals to 8 bits with round-half-up, clipping to [0, 255].

    floor(x + 0.5) is the single rounding rule used everywhere a real
    becomes an 8-bit value; numpy's round() (half-to-even) would break
    the frozen golden values.
    """
    return np.clip(np.floor(np.asarray(values, dtype=np.float64) + 0.5), 0, 255).astype(np.uint8)


def load_hdr(path) -> HdrFrame:
    """Read a single-channel 16-bit grayscale PNG or TIFF."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    try:
        img = Image.open(p)
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise UnsupportedFormat(f"{p}: not a readable image ({exc})") from exc
    if img.format not in ("PNG", "TIFF"):
        raise UnsupportedFormat(f"{p}: expected 16-bit PNG or TIFF, got {img.format}")
    if img.mode not in _I16_MODES:
        raise UnsupportedFormat(
            f"{p}: expected single-channel 16-bit data, got mode {img.mode}"
        )
    arr = np.asarray(img)
    if arr.dtype != np.uint16:
        arr = arr.astype(np.uint16)
    return HdrFrame(arr)


def load_ldr(path) -> LdrFrame:
    """Read a single-channel 8-bit grayscale PNG."""
    p = Path(path)
    if not p.exists():
        raise MissingFile(str(p))
    try:
        img = Image.open(p)
        img.load()
    except (UnidentifiedImageError, OSError) as exc:
        raise UnsupportedFormat(f"{p}: not a readable image ({exc})") from exc
    if img.mode != "L":
        raise UnsupportedFormat(f"{p}: expected 8-bit grayscale, got mode {img.mode}")
    return LdrFrame(np.asarray(img))


def save_ldr(path, frame: LdrFrame) -> None:
    """Write an LdrFrame as lossless 8-bit grayscale PNG."""
    p = Path(path)
    if not p.parent.is_dir():
        raise IoFailure(f"parent directory does not exist: {p.parent}")
    try:
        Image.fromarray(frame.data).save(p, format="PNG")
    except OSError as exc:
        raise IoFailure(f"cannot write {p}: {exc}") from exc


def save_hdr(path, frame: HdrFrame) -> None:
    """Write an HdrFrame as lossless 16-bit grayscale PNG."""
    p = Path(path)
    if not p.parent.is_dir():
        raise IoFailure(f"parent directory does not exist: {p.parent}")
    try:
        Image.fromarray(frame.data).save(p, format="PNG")
    except OSError as exc:
        raise IoFailure(f"cannot write {p}: {exc}") from exc


def histogram(frame) -> Histogram:
    """Count pixels per intensity value (256 or 65536 bins by frame depth)."""
    if isinstance(frame, LdrFrame):
        nbins = 256
    elif isinstance(frame, HdrFrame):
        nbins = 65536
    else:
        raise TypeError(f"histogram expects HdrFrame or LdrFrame, got {type(frame).__name__}")
    counts = np.bincount(frame.data.ravel(), minlength=nbins)
    return Histogram(counts.astype(np.int64), int(frame.data.size))


def linear_downscale(frame: HdrFrame) -> LdrFrame:
    """Min/max stretch to 8 bits; a constant frame maps to all zeros."""
    d = frame.data.astype(np.float64)
    lo = d.min()
    hi = d.max()
    if hi == lo:
        return LdrFrame(np.zeros(d.shape, dtype=np.uint8))
    return LdrFrame(quantize_u8((d - lo) * 255.0 / (hi - lo)))


def list_sequence(directory) -> list[Path]:
    """Frame files of a sequence directory in lexicographic filename order.

    A sidecar sequence.json (JSON list of filenames) overrides the order.
    Only .png/.tif/.tiff files at the top level are considered.
    """
    d = Path(directory)
    if not d.is_dir():
        raise MissingFile(f"not a directory: {d}")
    sidecar = d / SEQUENCE_SIDECAR
    if sidecar.exists():
        try:
            names = json.loads(sidecar.read_text())
        except json.JSONDecodeError as exc:
            raise UnsupportedFormat(f"{sidecar}: invalid JSON ({exc})") from exc
        if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
            raise UnsupportedFormat(f"{sidecar}: expected a JSON list of filenames")
        paths = []
        for name in names:
            p = d / name
            if not p.exists():
                raise MissingFile(f"{sidecar} lists missing file: {p}")
            paths.append(p)
    else:
        paths = sorted(
            (p for p in d.iterdir() if p.is_file() and p.suffix.lower() in FRAME_SUFFIXES),
            key=lambda p: p.name,
        )
    if not paths:
        raise EmptyInput(f"no frames found in {d}")
    return paths
