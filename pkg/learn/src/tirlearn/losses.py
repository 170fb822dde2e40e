"""Loss terms: MSE mimicry plus a mean-intensity temporal regularizer.

The regularizer is 0.5 * (m_t - mean(history))^2 where m_t is the
current output's mean intensity in [0, 1] and history holds the means
of the last n outputs. It penalizes frame-mean jumps, which is what
reads as flicker; alpha blends it with the MSE term.
"""

from __future__ import annotations

import math
from collections import deque

from .config import TrainConfig  # noqa: F401  (re-export convenience)
from .errors import ConfigError, EmptyHistory, ShapeMismatch


class MeanHistory:
    """Ring buffer of the last n output mean intensities, values in [0, 1]."""

    def __init__(self, n: int):
        if n < 1:
            raise ConfigError(f"history length must be >= 1, got {n}")
        self.n = n
        self._values: deque[float] = deque(maxlen=n)

    def push(self, value: float) -> None:
        # predictions can transiently stray outside [0, 1]; keep the
        # buffer on the metric's scale
        self._values.append(min(1.0, max(0.0, float(value))))

    def mean(self) -> float:
        if not self._values:
            raise EmptyHistory("no output means recorded yet")
        return math.fsum(self._values) / len(self._values)

    def clear(self) -> None:
        self._values.clear()

    def __len__(self) -> int:
        return len(self._values)

    def __iter__(self):
        return iter(self._values)


def temporal_reg_loss(mean_t, history: MeanHistory):
    """0.5 * (mean_t - mean(history))^2; averages over what is buffered.

    mean_t may be a float or a scalar tensor; gradients flow through
    mean_t only, the history is plain numbers by construction.
    """
    ref = history.mean()
    return 0.5 * (mean_t - ref) ** 2


def total_loss(pred, target, mean_t, history: MeanHistory, alpha: float):
    """alpha * MSE(pred, target) + (1 - alpha) * temporal term.

    At alpha = 1 the temporal term is not evaluated and the result is
    exactly the MSE.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ConfigError(f"alpha must be in [0, 1], got {alpha}")
    if tuple(pred.shape) != tuple(target.shape):
        raise ShapeMismatch(f"pred {tuple(pred.shape)} vs target {tuple(target.shape)}")
    mse = ((pred - target) ** 2).mean()
    if alpha >= 1.0:
        return mse
    return alpha * mse + (1.0 - alpha) * temporal_reg_loss(mean_t, history)
