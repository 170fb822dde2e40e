"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from . import imgio, metrics, pipeline, report
from .errors import ConfigError, DataError
from .pipeline import DEFLICKER_MODES, PipelineConfig


def _handled(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ConfigError as exc:
            click.echo(f"config error: {exc}", err=True)
            sys.exit(2)
        except DataError as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _config_with_overrides(config_path, scales, weights, epsilon, tiles,
                           clip_limit, sigma_k, deflicker_mode, window,
                           noise_lambda) -> PipelineConfig:
    cfg = pipeline.load_config(config_path) if config_path else PipelineConfig()
    data = cfg.to_dict()
    if scales is not None:
        data["retinex"]["scales"] = _parse_floats(scales, "--scales")
        if weights is None:
            n = len(data["retinex"]["scales"])
            data["retinex"]["weights"] = [1.0 / n] * n
    if weights is not None:
        data["retinex"]["weights"] = _parse_floats(weights, "--weights")
    if epsilon is not None:
        data["retinex"]["epsilon"] = epsilon
    if tiles is not None:
        data["clahe"]["tiles_x"], data["clahe"]["tiles_y"] = _parse_tiles(tiles)
    if clip_limit is not None:
        data["clahe"]["clip_limit"] = clip_limit
    if sigma_k is not None:
        data["sigma_k"] = sigma_k
    if deflicker_mode is not None:
        data["deflicker_mode"] = deflicker_mode
    if window is not None:
        data["deflicker_window"] = window
    if noise_lambda is not None:
        data["noise_lambda"] = noise_lambda
    return pipeline.config_from_dict(data)


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"{what}: expected comma-separated numbers, got {text!r}") from exc


def _parse_tiles(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    if len(parts) != 2:
        raise ConfigError(f"--tiles: expected TXxTY like 8x8, got {text!r}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise ConfigError(f"--tiles: expected integers, got {text!r}") from exc


def _pipeline_options(func):
    opts = [
        click.option("--config", "config_path", type=click.Path(), default=None,
                     help="JSON config file (defaults reproduce the optimized pipeline)."),
        click.option("--scales", default=None,
                     help="Retinex surround scales, comma-separated (default 15,80,250)."),
        click.option("--weights", default=None,
                     help="Retinex combination weights, comma-separated, sum 1."),
        click.option("--epsilon", type=float, default=None, help="Retinex log guard."),
        click.option("--tiles", default=None, help="CLAHE tile grid TXxTY (default 1x1)."),
        click.option("--clip-limit", default=None,
                     help="CLAHE clip limit, a number or 'inf' (default 2.0)."),
        click.option("--sigma-k", type=float, default=None,
                     help="Sigma-clip factor (default 3)."),
        click.option("--deflicker-mode", type=click.Choice(DEFLICKER_MODES), default=None,
                     help="Temporal mode (default sigma_clip)."),
        click.option("--window", type=int, default=None,
                     help="Histogram-matching reference window (default 100)."),
        click.option("--noise-lambda", type=float, default=None,
                     help="Poisson lambda for the noisy twin (default 100)."),
    ]
    for opt in reversed(opts):
        func = opt(func)
    return func


@click.group()
def main():
    """Tone mapping and quality evaluation for 16-bit thermal image sequences."""


@main.command()
@_pipeline_options
@click.option("--input", "input_dir", required=True, type=click.Path(),
              help="Directory of 16-bit PNG/TIFF frames.")
@click.option("--output", "output_dir", required=True, type=click.Path(),
              help="Directory for the 8-bit PNG outputs.")
@click.option("--noisy-twin", is_flag=True,
              help="Also tone-map a Poisson-noised twin (written to OUTPUT/noisy_twin).")
@click.option("--seed", type=int, default=None,
              help="Noise seed override (default: config noise_seed).")
@_handled
def tonemap(config_path, scales, weights, epsilon, tiles, clip_limit, sigma_k,
            deflicker_mode, window, noise_lambda, input_dir, output_dir,
            noisy_twin, seed):
    """Tone-map a frame sequence; writes frames plus report.json/report.csv."""
    cfg = _config_with_overrides(config_path, scales, weights, epsilon, tiles,
                                 clip_limit, sigma_k, deflicker_mode, window,
                                 noise_lambda)
    result = pipeline.run_sequence(cfg, input_dir, output_dir,
                                   noisy_twin=noisy_twin, seed=seed)
    out = Path(output_dir)
    report.save_report_json(result, out / "report.json")
    report.save_report_csv(result, out / "report.csv")
    click.echo(f"tone-mapped {input_dir} -> {output_dir}")


def _load_hdr_seq(directory):
    return [imgio.load_hdr(p) for p in imgio.list_sequence(directory)]


def _load_ldr_seq(directory):
    return [imgio.load_ldr(p) for p in imgio.list_sequence(directory)]


@main.command()
@click.option("--hdr", "hdr_dir", required=True, type=click.Path(),
              help="Directory of the 16-bit source frames.")
@click.option("--ldr", "ldr_dir", required=True, type=click.Path(),
              help="Directory of the tone-mapped 8-bit frames.")
@click.option("--ldr-noisy", "ldr_noisy_dir", type=click.Path(), default=None,
              help="Tone-mapped noisy-twin frames (enables noise visibility).")
@click.option("--report", "report_path", required=True, type=click.Path(),
              help="Report JSON path; CSV and figures land alongside.")
@click.option("--figures/--no-figures", default=True,
              help="Render the mean-intensity figure (default on).")
@_handled
def evaluate(hdr_dir, ldr_dir, ldr_noisy_dir, report_path, figures):
    """Score a tone-mapped run against its source sequence."""
    hdrs = _load_hdr_seq(hdr_dir)
    ldrs = _load_ldr_seq(ldr_dir)
    noisy = _load_ldr_seq(ldr_noisy_dir) if ldr_noisy_dir else None
    min_side = min(min(f.data.shape) for f in hdrs)
    include_tmqi = min_side >= metrics.MIN_TMQI_SIDE
    if not include_tmqi:
        click.echo(f"note: frames smaller than {metrics.MIN_TMQI_SIDE} px, "
                   "tmqi omitted from the report", err=True)
    result = metrics.evaluate_sequence(hdrs, ldrs, noisy, include_tmqi=include_tmqi)
    rp = Path(report_path)
    report.save_report_json(result, rp)
    report.save_report_csv(result, rp.with_suffix(".csv"))
    if figures:
        series = {"run": ldrs}
        if noisy is not None:
            series["noisy twin"] = noisy
        report.fig_mean_series(series, rp.with_name(rp.stem + "_means.png"))
    click.echo(f"report written to {rp}")


@main.command("export-pairs")
@_pipeline_options
@click.option("--input", "input_dir", required=True, type=click.Path(),
              help="Directory of 16-bit frames.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Output directory for hdr/, ldr/ and pairs.json.")
@_handled
def export_pairs(config_path, scales, weights, epsilon, tiles, clip_limit,
                 sigma_k, deflicker_mode, window, noise_lambda, input_dir,
                 out_dir):
    """Write training pairs (input, tone-mapped target) plus a manifest."""
    cfg = _config_with_overrides(config_path, scales, weights, epsilon, tiles,
                                 clip_limit, sigma_k, deflicker_mode, window,
                                 noise_lambda)
    manifest = pipeline.export_training_pairs(cfg, input_dir, out_dir)
    click.echo(f"manifest written to {manifest}")


def _parse_named_dir(text: str) -> tuple[str, str]:
    if "=" in text:
        name, _, path = text.partition("=")
        return name, path
    return Path(text).name, text


@main.command()
@click.option("--hdr", "hdr_dir", required=True, type=click.Path(),
              help="Directory of the 16-bit source frames.")
@click.option("--ldr", "ldr_specs", multiple=True, required=True,
              help="NAME=DIR of one tone-mapped run; repeatable.")
@click.option("--ldr-noisy", "noisy_specs", multiple=True,
              help="NAME=DIR of a run's noisy twin; NAME must match an --ldr.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Directory for compare.json/compare.csv and figures.")
@_handled
def compare(hdr_dir, ldr_specs, noisy_specs, out_dir):
    """Score several tone-mapping runs side by side into one table."""
    hdrs = _load_hdr_seq(hdr_dir)
    noisy_by_name = dict(_parse_named_dir(s) for s in noisy_specs)
    min_side = min(min(f.data.shape) for f in hdrs)
    include_tmqi = min_side >= metrics.MIN_TMQI_SIDE
    if not include_tmqi:
        click.echo(f"note: frames smaller than {metrics.MIN_TMQI_SIDE} px, "
                   "tmqi omitted from the table", err=True)
    table = {}
    series = {}
    for spec in ldr_specs:
        name, path = _parse_named_dir(spec)
        ldrs = _load_ldr_seq(path)
        noisy = _load_ldr_seq(noisy_by_name[name]) if name in noisy_by_name else None
        table[name] = metrics.evaluate_sequence(hdrs, ldrs, noisy,
                                                include_tmqi=include_tmqi)
        series[name] = ldrs
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report.save_compare_json(table, out / "compare.json")
    report.save_compare_csv(table, out / "compare.csv")
    report.fig_compare(table, out / "compare.png")
    report.fig_mean_series(series, out / "means.png")
    click.echo(f"comparison written to {out}")


if __name__ == "__main__":
    main()
