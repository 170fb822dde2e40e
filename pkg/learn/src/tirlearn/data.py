"""Pair loading: the exported-pairs manifest and frame file IO.

The manifest is the tone-mapping toolkit's export format: a JSON object
{"format": "tirtone-pairs-v1", "pairs": [{"hdr": ..., "ldr": ...}]}
with paths relative to the manifest file. Order is significant; the
temporal loss consumes pairs exactly in manifest order.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
from PIL import Image

from .errors import BadManifest, DataError

MANIFEST_FORMAT = "tirtone-pairs-v1"
_U16_MODES = ("I;16", "I;16L", "I;16B", "I;16N", "I")


def load_u16(path) -> np.ndarray:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such frame: {p}")
    with Image.open(p) as img:
        if img.mode not in _U16_MODES:
            raise DataError(f"{p}: expected a 16-bit single-channel image, got mode {img.mode}")
        arr = np.asarray(img)
    if arr.ndim != 2:
        raise DataError(f"{p}: expected a single channel, got shape {arr.shape}")
    if arr.dtype != np.uint16:
        if arr.min() < 0 or arr.max() > 65535:
            raise DataError(f"{p}: values outside the 16-bit range")
        arr = arr.astype(np.uint16)
    return arr


def load_u8(path) -> np.ndarray:
    p = Path(path)
    if not p.is_file():
        raise DataError(f"no such frame: {p}")
    with Image.open(p) as img:
        if img.mode != "L":
            raise DataError(f"{p}: expected an 8-bit single-channel image, got mode {img.mode}")
        return np.asarray(img)


def save_u8(path, arr: np.ndarray) -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.ascontiguousarray(arr, dtype=np.uint8)).save(p, format="PNG")


class PairsDataset:
    """Manifest-ordered (16-bit input, 8-bit target) pairs."""

    def __init__(self, manifest_path):
        self.manifest_path = Path(manifest_path)
        if not self.manifest_path.is_file():
            raise BadManifest(f"manifest not found: {self.manifest_path}")
        try:
            data = json.loads(self.manifest_path.read_text())
        except json.JSONDecodeError as exc:
            raise BadManifest(f"{self.manifest_path}: invalid JSON ({exc})") from exc
        if not isinstance(data, dict) or data.get("format") != MANIFEST_FORMAT:
            raise BadManifest(
                f"{self.manifest_path}: expected format {MANIFEST_FORMAT!r}, "
                f"got {data.get('format')!r}" if isinstance(data, dict)
                else f"{self.manifest_path}: manifest must be a JSON object"
            )
        pairs = data.get("pairs")
        if not isinstance(pairs, list) or not pairs:
            raise BadManifest(f"{self.manifest_path}: no pairs listed")
        root = self.manifest_path.parent
        self.pairs: list[tuple[Path, Path]] = []
        for i, entry in enumerate(pairs):
            if not isinstance(entry, dict) or "hdr" not in entry or "ldr" not in entry:
                raise BadManifest(f"{self.manifest_path}: pair {i} needs 'hdr' and 'ldr'")
            hdr_p = root / entry["hdr"]
            ldr_p = root / entry["ldr"]
            if not hdr_p.is_file() or not ldr_p.is_file():
                raise BadManifest(f"{self.manifest_path}: pair {i} points at missing files")
            self.pairs.append((hdr_p, ldr_p))

    def __len__(self) -> int:
        return len(self.pairs)

    def load_pair(self, index: int) -> tuple[np.ndarray, np.ndarray]:
        """Raw arrays: (uint16 input, uint8 target)."""
        hdr_p, ldr_p = self.pairs[index]
        x = load_u16(hdr_p)
        y = load_u8(ldr_p)
        if x.shape != y.shape:
            raise BadManifest(f"pair {index}: input {x.shape} vs target {y.shape}")
        return x, y
