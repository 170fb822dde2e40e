"""Tone mapping and quality evaluation for 16-bit thermal infrared sequences."""

from .enhance import (
    ClaheConfig,
    TemporalState,
    clahe,
    deflicker_update,
    hist_equalize,
    histogram_match,
    rescale_to_ldr,
    sigma_clip,
    simplest_color_balance,
)
from .imgio import (
    HdrFrame,
    Histogram,
    LdrFrame,
    RealPlane,
    histogram,
    linear_downscale,
    list_sequence,
    load_hdr,
    load_ldr,
    save_hdr,
    save_ldr,
)
from .metrics import (
    MetricsReport,
    TmqiBreakdown,
    contrast_loss,
    evaluate_sequence,
    exposure,
    noise_visibility,
    temporal_incoherence,
    tmqi,
)
from .pipeline import (
    PipelineConfig,
    export_training_pairs,
    poisson_noise,
    run_sequence,
    tonemap_frame,
)
from .retinex import (
    RetinexConfig,
    gaussian_blur,
    multi_scale_retinex,
    single_scale_retinex,
)

__version__ = "0.1.0"

__all__ = [
    "ClaheConfig",
    "HdrFrame",
    "Histogram",
    "LdrFrame",
    "MetricsReport",
    "PipelineConfig",
    "RealPlane",
    "RetinexConfig",
    "TemporalState",
    "TmqiBreakdown",
    "clahe",
    "contrast_loss",
    "deflicker_update",
    "evaluate_sequence",
    "exposure",
    "export_training_pairs",
    "gaussian_blur",
    "hist_equalize",
    "histogram",
    "histogram_match",
    "linear_downscale",
    "list_sequence",
    "load_hdr",
    "load_ldr",
    "multi_scale_retinex",
    "noise_visibility",
    "poisson_noise",
    "rescale_to_ldr",
    "run_sequence",
    "save_hdr",
    "save_ldr",
    "sigma_clip",
    "simplest_color_balance",
    "single_scale_retinex",
    "temporal_incoherence",
    "tmqi",
    "tonemap_frame",
]
