"""Command line interface.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click

from .config import TrainConfig, load_train_config
from .data import load_u16, save_u8
from .errors import ConfigError, DataError
from .infer import infer as run_inference
from .train import load_model, save_model, train as run_training

FRAME_SUFFIXES = (".png", ".tif", ".tiff")


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


@click.group()
def main():
    """Learned tone mapping for 16-bit thermal image sequences."""


@main.command()
@click.option("--pairs", "pairs_path", required=True, type=click.Path(),
              help="pairs.json manifest from the tone-mapping exporter.")
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Training config JSON (defaults if omitted).")
@click.option("--epochs", type=int, default=None, help="Override epoch count.")
@click.option("--seed", type=int, default=None, help="Override the run seed.")
@click.option("--out", "out_dir", required=True, type=click.Path(),
              help="Directory for model.pt, train_config.json, loss_curve.json.")
@_handled
def train(pairs_path, config_path, epochs, seed, out_dir):
    """Train the tone-mapping network on exported pairs."""
    cfg = load_train_config(config_path) if config_path else TrainConfig()
    overrides = {}
    if epochs is not None:
        overrides["epochs"] = epochs
    if seed is not None:
        overrides["seed"] = seed
    if overrides:
        cfg = TrainConfig(**{**cfg.to_dict(), **overrides})

    def progress(entry):
        click.echo(f"epoch {entry['epoch']:3d}  total {entry['total']:.6f}  "
                   f"mse {entry['mse']:.6f}")

    result = run_training(cfg, pairs_path, progress=progress)
    out = save_model(result, out_dir)
    click.echo(f"model written to {out}")


@main.command()
@click.option("--model", "model_dir", required=True, type=click.Path(),
              help="Directory holding model.pt and train_config.json.")
@click.option("--input", "input_dir", required=True, type=click.Path(),
              help="Directory of 16-bit frames.")
@click.option("--output", "output_dir", required=True, type=click.Path(),
              help="Directory for the 8-bit outputs.")
@_handled
def infer(model_dir, input_dir, output_dir):
    """Tone-map frames with a trained model (no noise is added)."""
    model, _ = load_model(model_dir)
    src = Path(input_dir)
    if not src.is_dir():
        raise DataError(f"no such input directory: {src}")
    paths = sorted(
        (p for p in src.iterdir() if p.suffix.lower() in FRAME_SUFFIXES),
        key=lambda p: p.name,
    )
    if not paths:
        raise DataError(f"no frames in {src}")
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    for p in paths:
        frame = load_u16(p)
        save_u8(out / f"{p.stem}.png", run_inference(model, frame))
    click.echo(f"tone-mapped {len(paths)} frames into {out}")


if __name__ == "__main__":
    main()
