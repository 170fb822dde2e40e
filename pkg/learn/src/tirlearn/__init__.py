"""Learned tone mapping: U-Net mimicry of the optimized retinex targets
with joint denoising and mean-intensity temporal regularization."""

from .config import TrainConfig, config_from_dict, load_train_config
from .data import MANIFEST_FORMAT, PairsDataset, load_u8, load_u16, save_u8
from .errors import (
    BadManifest,
    ConfigError,
    DataError,
    EmptyHistory,
    InvalidShape,
    LearnError,
    ShapeMismatch,
)
from .infer import infer
from .losses import MeanHistory, temporal_reg_loss, total_loss
from .noise import centered_poisson, noisy_as_clean_augment
from .train import TrainResult, load_model, save_model, train
from .unet import ToneMapNet, build_model

__version__ = "0.1.0"

__all__ = [
    "TrainConfig",
    "config_from_dict",
    "load_train_config",
    "MANIFEST_FORMAT",
    "PairsDataset",
    "load_u16",
    "load_u8",
    "save_u8",
    "LearnError",
    "ConfigError",
    "DataError",
    "InvalidShape",
    "ShapeMismatch",
    "BadManifest",
    "EmptyHistory",
    "infer",
    "MeanHistory",
    "temporal_reg_loss",
    "total_loss",
    "centered_poisson",
    "noisy_as_clean_augment",
    "TrainResult",
    "train",
    "save_model",
    "load_model",
    "ToneMapNet",
    "build_model",
    "__version__",
]
