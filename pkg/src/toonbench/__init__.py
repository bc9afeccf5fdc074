"""toonbench: evaluation toolkit for alpha-mask background removal."""

from .mask import abs_diff, binarize, load_mask, save_mask
from .metrics import (
    MetricId,
    MetricValue,
    PixelAccuracyBreakdown,
    PixelAccuracyConfig,
    boundary_iou,
    e_measure,
    evaluate_all,
    f_measure,
    mae,
    mse,
    pixel_accuracy,
    s_measure,
    weighted_f_measure,
)
from .loss import LossBreakdown, LossWeights, bce_score, composite_loss, iou_loss, mae_loss, ssim_loss

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "load_mask",
    "save_mask",
    "binarize",
    "abs_diff",
    "MetricId",
    "MetricValue",
    "PixelAccuracyConfig",
    "PixelAccuracyBreakdown",
    "pixel_accuracy",
    "mae",
    "mse",
    "f_measure",
    "e_measure",
    "s_measure",
    "weighted_f_measure",
    "boundary_iou",
    "evaluate_all",
    "LossWeights",
    "LossBreakdown",
    "ssim_loss",
    "mae_loss",
    "iou_loss",
    "bce_score",
    "composite_loss",
]
