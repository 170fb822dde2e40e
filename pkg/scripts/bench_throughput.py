#!/usr/bin/env python3
"""Per-frame throughput of the tone-mapping pipeline on 640x512 frames.

Times the full default pipeline (retinex 15/80/250, sigma clip, rescale,
CLAHE) and the retinex stage alone. Run after any change to the blur
path; the package targets a few frames per second on one core for
VGA-class thermal video.

    python3 scripts/bench_throughput.py [--frames N] [--size WxH]
"""

import argparse
import time

import numpy as np
from scipy import ndimage

from tirtone.imgio import HdrFrame
from tirtone.pipeline import PipelineConfig, tonemap_frame
from tirtone.retinex import multi_scale_retinex


def make_frame(width: int, height: int, seed: int) -> HdrFrame:
    rng = np.random.default_rng(seed)
    base = ndimage.gaussian_filter(rng.standard_normal((height, width)), 8.0)
    lo, hi = base.min(), base.max()
    scaled = 2000.0 + (base - lo) * 58000.0 / (hi - lo)
    return HdrFrame(np.round(scaled).astype(np.uint16))


def bench(label, func, frames) -> None:
    func(frames[0])  # warm kernel caches
    start = time.perf_counter()
    for frame in frames:
        func(frame)
    elapsed = time.perf_counter() - start
    per = elapsed / len(frames)
    print(f"{label:28s} {per * 1000.0:8.1f} ms/frame   {1.0 / per:6.2f} fps")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--frames", type=int, default=10)
    parser.add_argument("--size", default="640x512", help="WxH (default 640x512)")
    args = parser.parse_args()
    width, height = (int(t) for t in args.size.lower().split("x"))

    frames = [make_frame(width, height, seed) for seed in range(args.frames)]
    cfg = PipelineConfig()
    print(f"{width}x{height}, {args.frames} frames, scales {cfg.retinex.scales}")
    bench("retinex only", lambda f: multi_scale_retinex(f, cfg.retinex), frames)
    bench("full pipeline (sigma_clip)", lambda f: tonemap_frame(cfg, f), frames)


if __name__ == "__main__":
    main()
