"""Training configuration and its JSON form."""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict
from pathlib import Path

from .errors import ConfigError

NORMALIZATIONS = ("group", "batch")


@dataclass(frozen=True)
class TrainConfig:
    depth: int = 6
    width: int = 16
    epochs: int = 32
    loss_alpha: float = 0.9
    history_n: int = 10
    poisson_lambda: float = 100.0
    seed: int = 0
    normalization: str = "group"
    # unstated by the mimicked setup; defaults, not claims
    learning_rate: float = 1e-3
    batch_size: int = 1

    def __post_init__(self):
        if self.depth < 1:
            raise ConfigError(f"depth must be >= 1, got {self.depth}")
        if self.width < 1:
            raise ConfigError(f"width must be >= 1, got {self.width}")
        if self.epochs < 1:
            raise ConfigError(f"epochs must be >= 1, got {self.epochs}")
        if not 0.0 <= self.loss_alpha <= 1.0:
            raise ConfigError(f"loss_alpha must be in [0, 1], got {self.loss_alpha}")
        if self.history_n < 1:
            raise ConfigError(f"history_n must be >= 1, got {self.history_n}")
        if self.poisson_lambda <= 0:
            raise ConfigError(f"poisson_lambda must be positive, got {self.poisson_lambda}")
        if self.normalization not in NORMALIZATIONS:
            raise ConfigError(
                f"normalization must be one of {NORMALIZATIONS}, got {self.normalization!r}"
            )
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")

    def to_dict(self) -> dict:
        return asdict(self)


def config_from_dict(data: dict) -> TrainConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"config must be a JSON object, got {type(data).__name__}")
    allowed = set(TrainConfig.__dataclass_fields__)
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    try:
        return TrainConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from exc


def load_train_config(path) -> TrainConfig:
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON ({exc})") from exc
    return config_from_dict(data)
