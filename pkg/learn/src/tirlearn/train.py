"""Training loop and model artifact IO.

Each epoch walks the pairs in manifest order with batch size 1, feeding
the temporal history with the detached mean of every prediction; the
history resets at epoch boundaries so the regularizer never bridges two
passes over the data. Noise is redrawn per sample per epoch from one
seeded stream, so a run is a pure function of (config, pairs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .config import TrainConfig, config_from_dict
from .data import PairsDataset
from .errors import DataError
from .losses import MeanHistory, total_loss
from .noise import centered_poisson
from .unet import ToneMapNet, build_model

MODEL_FILE = "model.pt"
CONFIG_FILE = "train_config.json"
CURVE_FILE = "loss_curve.json"


@dataclass
class TrainResult:
    model: ToneMapNet
    config: TrainConfig
    loss_curve: list[dict]


def _to_input(arr: np.ndarray) -> torch.Tensor:
    return torch.from_numpy(arr.astype(np.float32) / 65535.0)[None, None]


def _to_target(arr: np.ndarray) -> torch.Tensor:
    return torch.from_numpy(arr.astype(np.float32) / 255.0)[None, None]


def train(config: TrainConfig, manifest_path, progress=None) -> TrainResult:
    dataset = PairsDataset(manifest_path)
    torch.manual_seed(config.seed)
    model = build_model(config)
    model.train()
    optimizer = torch.optim.Adam(model.parameters(), lr=config.learning_rate)
    noise_rng = np.random.default_rng(config.seed)

    curve: list[dict] = []
    for epoch in range(config.epochs):
        history = MeanHistory(config.history_n)
        sums = {"total": 0.0, "mse": 0.0, "reg": 0.0}
        for index in range(len(dataset)):
            raw_x, raw_y = dataset.load_pair(index)
            noisy = centered_poisson(raw_x, config.poisson_lambda, noise_rng)
            x = _to_input(noisy)
            y = _to_target(raw_y)

            pred = model(x)
            mean_t = pred.mean()
            if config.loss_alpha < 1.0 and len(history):
                loss = total_loss(pred, y, mean_t, history, config.loss_alpha)
            else:
                # no temporal reference yet this epoch; keep the MSE weight
                # so the optimizer sees a consistent scale
                loss = config.loss_alpha * ((pred - y) ** 2).mean()

            optimizer.zero_grad()
            loss.backward()
            optimizer.step()

            with torch.no_grad():
                mse_v = float(((pred - y) ** 2).mean())
                total_v = float(loss)
            sums["total"] += total_v
            sums["mse"] += mse_v
            if config.loss_alpha < 1.0:
                sums["reg"] += (total_v - config.loss_alpha * mse_v) / (1.0 - config.loss_alpha)
            history.push(float(mean_t.detach()))

        n = len(dataset)
        entry = {"epoch": epoch, "total": sums["total"] / n,
                 "mse": sums["mse"] / n, "reg": sums["reg"] / n}
        curve.append(entry)
        if progress is not None:
            progress(entry)
    model.eval()
    return TrainResult(model, config, curve)


def save_model(result: TrainResult, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    torch.save(result.model.state_dict(), out / MODEL_FILE)
    (out / CONFIG_FILE).write_text(json.dumps(result.config.to_dict(), indent=2) + "\n")
    (out / CURVE_FILE).write_text(json.dumps(result.loss_curve, indent=2) + "\n")
    return out


def load_model(model_dir) -> tuple[ToneMapNet, TrainConfig]:
    d = Path(model_dir)
    weights = d / MODEL_FILE
    sidecar = d / CONFIG_FILE
    if not weights.is_file() or not sidecar.is_file():
        raise DataError(f"{d}: expected {MODEL_FILE} and {CONFIG_FILE}")
    config = config_from_dict(json.loads(sidecar.read_text()))
    model = build_model(config)
    state = torch.load(weights, map_location="cpu", weights_only=True)
    try:
        model.load_state_dict(state)
    except RuntimeError as exc:
        raise DataError(f"{weights}: weights do not fit the config ({exc})") from exc
    model.eval()
    return model, config
