"""Sequence orchestration: config, tone-map runs, pair export, noise twins.

The default PipelineConfig is the optimized tone-mapping configuration:
multi-scale retinex (15/80/250, equal weights), three-sigma clipping,
rescale to 8 bits, global CLAHE with clip limit 2. Deflicker modes:
  off         no temporal processing beyond the per-frame pipeline
  sigma_clip  clamp retinex output at mean +- k*std before quantization
  hist_match  match each frame to the mean histogram of the last W inputs
  both        sigma_clip then hist_match
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import enhance, imgio, metrics, retinex
from .enhance import ClaheConfig, TemporalState
from .errors import ConfigError, EmptyInput
from .imgio import HdrFrame, LdrFrame
from .retinex import RetinexConfig

DEFLICKER_MODES = ("off", "sigma_clip", "hist_match", "both")
PAIRS_MANIFEST_NAME = "pairs.json"
PAIRS_FORMAT = "tirtone-pairs-v1"
NOISY_SUBDIR = "noisy_twin"


@dataclass(frozen=True)
class PipelineConfig:
    retinex: RetinexConfig = field(default_factory=RetinexConfig)
    clahe: ClaheConfig = field(default_factory=ClaheConfig)
    sigma_k: float = 3.0
    deflicker_mode: str = "sigma_clip"
    deflicker_window: int = 100
    noise_seed: int = 0
    noise_lambda: float = 100.0

    def __post_init__(self):
        if self.sigma_k <= 0:
            raise ConfigError(f"sigma_k must be positive, got {self.sigma_k}")
        if self.deflicker_mode not in DEFLICKER_MODES:
            raise ConfigError(
                f"deflicker_mode must be one of {DEFLICKER_MODES}, "
                f"got {self.deflicker_mode!r}"
            )
        if int(self.deflicker_window) != self.deflicker_window or self.deflicker_window < 1:
            raise ConfigError("deflicker_window must be an integer >= 1")
        object.__setattr__(self, "deflicker_window", int(self.deflicker_window))
        if self.noise_lambda <= 0:
            raise ConfigError(f"noise_lambda must be positive, got {self.noise_lambda}")

    def to_dict(self) -> dict:
        clip = self.clahe.clip_limit
        return {
            "retinex": {
                "scales": list(self.retinex.scales),
                "weights": list(self.retinex.weights),
                "epsilon": self.retinex.epsilon,
            },
            "clahe": {
                "tiles_x": self.clahe.tiles_x,
                "tiles_y": self.clahe.tiles_y,
                "clip_limit": "inf" if math.isinf(clip) else clip,
            },
            "sigma_k": self.sigma_k,
            "deflicker_mode": self.deflicker_mode,
            "deflicker_window": self.deflicker_window,
            "noise_seed": self.noise_seed,
            "noise_lambda": self.noise_lambda,
        }


def _require_mapping(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{what} must be a JSON object, got {type(obj).__name__}")
    return obj


def _reject_unknown(d: dict, allowed: set[str], what: str) -> None:
    unknown = set(d) - allowed
    if unknown:
        raise ConfigError(f"unknown {what} keys: {sorted(unknown)}")


def _parse_clip_limit(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        raise ConfigError(f"clip_limit must be a number or 'inf', got {value!r}")
    return float(value)


def config_from_dict(data: dict) -> PipelineConfig:
    """Build a PipelineConfig from parsed JSON; unknown keys are errors."""
    data = _require_mapping(data, "config")
    _reject_unknown(data, {"retinex", "clahe", "sigma_k", "deflicker_mode",
                           "deflicker_window", "noise_seed", "noise_lambda"}, "config")
    try:
        rx = _require_mapping(data.get("retinex", {}), "retinex")
        _reject_unknown(rx, {"scales", "weights", "epsilon"}, "retinex")
        rx_defaults = RetinexConfig()
        scales = tuple(rx.get("scales", rx_defaults.scales))
        weights = rx.get("weights")
        if weights is None:
            if "scales" in rx:
                weights = tuple([1.0 / len(scales)] * len(scales))
            else:
                weights = rx_defaults.weights
        retinex_cfg = RetinexConfig(scales=scales, weights=tuple(weights),
                                    epsilon=float(rx.get("epsilon", rx_defaults.epsilon)))
        ch = _require_mapping(data.get("clahe", {}), "clahe")
        _reject_unknown(ch, {"tiles_x", "tiles_y", "clip_limit"}, "clahe")
        clahe_cfg = ClaheConfig(
            tiles_x=ch.get("tiles_x", 1),
            tiles_y=ch.get("tiles_y", 1),
            clip_limit=_parse_clip_limit(ch.get("clip_limit", 2.0)),
        )
        return PipelineConfig(
            retinex=retinex_cfg,
            clahe=clahe_cfg,
            sigma_k=float(data.get("sigma_k", 3.0)),
            deflicker_mode=data.get("deflicker_mode", "sigma_clip"),
            deflicker_window=data.get("deflicker_window", 100),
            noise_seed=int(data.get("noise_seed", 0)),
            noise_lambda=float(data.get("noise_lambda", 100.0)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def load_config(path) -> PipelineConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    return config_from_dict(data)


def poisson_noise(frame: HdrFrame, lam: float, rng: np.random.Generator) -> HdrFrame:
    """Zero-mean Poisson noise: clamp(in + (Poisson(lam) - lam), 0, 65535)."""
    if lam <= 0:
        raise ConfigError(f"noise lambda must be positive, got {lam}")
    lift = frame.data.astype(np.float64)
    noisy = lift + (rng.poisson(lam, size=lift.shape) - lam)
    return HdrFrame(np.clip(np.floor(noisy + 0.5), 0, 65535).astype(np.uint16))


def tonemap_frame(config: PipelineConfig, frame: HdrFrame,
                  state: TemporalState | None = None) -> LdrFrame:
    """One frame through retinex -> (sigma clip) -> rescale -> CLAHE -> (match).

    state is only read and mutated in hist_match/both modes and must then
    be the stream's own TemporalState, updated in frame order.
    """
    plane = retinex.multi_scale_retinex(frame, config.retinex)
    if config.deflicker_mode in ("sigma_clip", "both"):
        plane = enhance.sigma_clip(plane, config.sigma_k)
    ldr = enhance.rescale_to_ldr(plane)
    ldr = enhance.clahe(ldr, config.clahe)
    if config.deflicker_mode in ("hist_match", "both"):
        if state is None:
            raise ConfigError("hist_match deflicker needs a TemporalState")
        ldr = enhance.deflicker_update(state, ldr)
    return ldr


def _tonemap_files(config: PipelineConfig, paths: Sequence[Path],
                   out_dir: Path) -> tuple[list[HdrFrame], list[LdrFrame]]:
    state = TemporalState(window=config.deflicker_window)
    hdrs: list[HdrFrame] = []
    ldrs: list[LdrFrame] = []
    for p in paths:
        frame = imgio.load_hdr(p)
        ldr = tonemap_frame(config, frame, state)
        imgio.save_ldr(out_dir / f"{p.stem}.png", ldr)
        hdrs.append(frame)
        ldrs.append(ldr)
    return hdrs, ldrs


def run_sequence(config: PipelineConfig, input_dir, output_dir,
                 noisy_twin: bool = False,
                 seed: int | None = None) -> metrics.MetricsReport:
    """Tone-map a directory of 16-bit frames into output_dir.

    One 8-bit PNG per input frame, same stem, lexicographic order
    preserved. With noisy_twin, a second pass over Poisson-noised inputs
    writes output_dir/noisy_twin/ and the report gains noise visibility.
    TMQI joins the report only when frames are large enough to score.
    """
    paths = imgio.list_sequence(input_dir)
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)

    hdrs, ldrs = _tonemap_files(config, paths, out)

    noisy_ldrs: list[LdrFrame] | None = None
    if noisy_twin:
        rng = np.random.default_rng(config.noise_seed if seed is None else seed)
        twin_dir = out / NOISY_SUBDIR
        twin_dir.mkdir(exist_ok=True)
        state = TemporalState(window=config.deflicker_window)
        noisy_ldrs = []
        for p, frame in zip(paths, hdrs):
            noised = poisson_noise(frame, config.noise_lambda, rng)
            ldr = tonemap_frame(config, noised, state)
            imgio.save_ldr(twin_dir / f"{p.stem}.png", ldr)
            noisy_ldrs.append(ldr)

    min_side = min(min(f.data.shape) for f in hdrs)
    return metrics.evaluate_sequence(
        hdrs, ldrs, noisy_ldrs, include_tmqi=min_side >= metrics.MIN_TMQI_SIDE
    )


def export_training_pairs(config: PipelineConfig, input_dir, out_dir) -> Path:
    """Write (16-bit input, tone-mapped target) pairs plus a JSON manifest.

    Targets come from the sigma_clip deflicker mode regardless of the
    passed config (training subsets are frame-skipped, so histogram
    references from consecutive frames do not apply). Returns the
    manifest path; all manifest paths are relative to the manifest.
    """
    forced = replace(config, deflicker_mode="sigma_clip")
    paths = imgio.list_sequence(input_dir)
    out = Path(out_dir)
    hdr_dir = out / "hdr"
    ldr_dir = out / "ldr"
    hdr_dir.mkdir(parents=True, exist_ok=True)
    ldr_dir.mkdir(parents=True, exist_ok=True)

    entries = []
    for p in paths:
        frame = imgio.load_hdr(p)
        target = tonemap_frame(forced, frame)
        name = f"{p.stem}.png"
        imgio.save_hdr(hdr_dir / name, frame)
        imgio.save_ldr(ldr_dir / name, target)
        entries.append({"hdr": f"hdr/{name}", "ldr": f"ldr/{name}"})

    manifest = {"format": PAIRS_FORMAT, "pairs": entries}
    manifest_path = out / PAIRS_MANIFEST_NAME
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    return manifest_path
