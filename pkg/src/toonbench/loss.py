"""Forward-only scoring of the training objective.

The composite score is a weighted sum of SSIM, MAE and soft-IoU losses
(defaults 10 / 90 / 0.25); binary cross-entropy is reported alongside
but never summed in.  No gradients, no training loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import metrics
from .errors import BothEmptyError, TooSmallError
from .kernels import conv2d_valid, gaussian2d
from .mask import check_pair

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_C1 = 0.01**2
SSIM_C2 = 0.03**2
BCE_EPS = 1e-7


@dataclass(frozen=True)
class LossWeights:
    ssim: float = 10.0
    mae: float = 90.0
    iou: float = 0.25

    def __post_init__(self):
        if self.ssim < 0 or self.mae < 0 or self.iou < 0:
            raise ValueError("loss weights must be non-negative")


@dataclass(frozen=True)
class LossBreakdown:
    ssim: float
    mae: float
    iou: float
    bce: float
    total: float


def ssim_loss(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """1 - mean structural similarity over 11x11 Gaussian windows."""
    p, g = check_pair(prediction, ground_truth)
    h, w = p.shape
    if h < SSIM_WINDOW or w < SSIM_WINDOW:
        raise TooSmallError(f"masks must be at least {SSIM_WINDOW}x{SSIM_WINDOW}, got {h}x{w}")
    x = p.astype(np.float64) / 255.0
    y = g.astype(np.float64) / 255.0
    k = gaussian2d(SSIM_WINDOW, SSIM_SIGMA)
    mu_x = conv2d_valid(x, k)
    mu_y = conv2d_valid(y, k)
    var_x = conv2d_valid(x * x, k) - mu_x * mu_x
    var_y = conv2d_valid(y * y, k) - mu_y * mu_y
    cov = conv2d_valid(x * y, k) - mu_x * mu_y
    ssim_map = ((2.0 * mu_x * mu_y + SSIM_C1) * (2.0 * cov + SSIM_C2)) / (
        (mu_x * mu_x + mu_y * mu_y + SSIM_C1) * (var_x + var_y + SSIM_C2)
    )
    return min(1.0, max(0.0, 1.0 - float(ssim_map.mean())))


def mae_loss(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Identical to the MAE metric on normalized masks."""
    return metrics.mae(prediction, ground_truth)


def iou_loss(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Soft IoU loss on normalized masks.

    inter = sum(p*g), union = sum(p + g - p*g).  Continuous in the
    prediction; exactly zero only for equal binary masks.
    """
    p, g = check_pair(prediction, ground_truth)
    pn = p.astype(np.float64) / 255.0
    gn = g.astype(np.float64) / 255.0
    inter = float((pn * gn).sum())
    union = float((pn + gn - pn * gn).sum())
    if union == 0.0:
        raise BothEmptyError("soft IoU undefined for two all-zero masks")
    return 1.0 - inter / union


def bce_score(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Binary cross-entropy between normalized masks, clamped at zero.

    The 1e-7 guard inside the logs can push a perfect prediction a hair
    below zero; the clamp keeps the score non-negative.
    """
    p, g = check_pair(prediction, ground_truth)
    pn = p.astype(np.float64) / 255.0
    gn = g.astype(np.float64) / 255.0
    val = -(gn * np.log(pn + BCE_EPS) + (1.0 - gn) * np.log(1.0 - pn + BCE_EPS)).mean()
    return max(0.0, float(val))


def composite_loss(
    prediction: np.ndarray,
    ground_truth: np.ndarray,
    weights: LossWeights = LossWeights(),
) -> LossBreakdown:
    """Weighted sum of the three component losses, BCE reported aside."""
    s = ssim_loss(prediction, ground_truth)
    m = mae_loss(prediction, ground_truth)
    i = iou_loss(prediction, ground_truth)
    b = bce_score(prediction, ground_truth)
    total = weights.ssim * s + weights.mae * m + weights.iou * i
    return LossBreakdown(ssim=s, mae=m, iou=i, bce=b, total=total)
