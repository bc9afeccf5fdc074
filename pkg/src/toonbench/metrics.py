"""Mask-pair quality metrics.

Eight scores per prediction/ground-truth pair: pixel accuracy, boundary
IoU, weighted F-measure, E-measure, S-measure, MAE, F-measure, and MSE.
Pixel accuracy tolerates small alpha deviations and forgives
one-pixel-wide artifacts by eroding the error mask before counting.

Degenerate ground truths (no foreground) are an error for PA, F and WF;
E and S fall back to their defined degenerate rules; MAE/MSE are always
defined.  evaluate_all never aborts a batch: per-metric errors are
carried as absent values with a reason.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyBandsError, EmptyForegroundError, ToonbenchError
from .mask import check_pair
from .morphology import ERROR_MASK_ELEMENT, boundary_band, erode

EPS = 1e-8  # precision guard in the weighted F-measure
FG_THRESHOLD = 128  # alpha strictly above this counts as foreground
F_BETA_SQ = 0.3
WF_BETA_SQ = 1.0
WF_KERNEL_SIZE = 7
WF_KERNEL_SIGMA = 5.0
WF_DECAY = math.log(0.5) / 5.0  # background-error weight decays with distance
SM_ALPHA = 0.5  # object/region balance of the structure measure
BIOU_DILATION_RATIO = 0.02  # band radius as a fraction of the image diagonal


class MetricId(enum.Enum):
    PA = "PA"
    BIOU = "BIoU"
    WF = "WF"
    E = "E"
    S = "S"
    MAE = "MAE"
    F = "F"
    MSE = "MSE"


#: Report column order: the seven headline metrics, then MSE.
TABLE_ORDER = (
    MetricId.PA,
    MetricId.BIOU,
    MetricId.WF,
    MetricId.E,
    MetricId.S,
    MetricId.MAE,
    MetricId.F,
    MetricId.MSE,
)

LOWER_BETTER = frozenset({MetricId.MAE, MetricId.MSE})


def higher_is_better(metric: MetricId) -> bool:
    return metric not in LOWER_BETTER


@dataclass(frozen=True)
class MetricValue:
    metric: MetricId
    value: float | None
    error: str | None = None

    @property
    def direction(self) -> str:
        return "lowerBetter" if self.metric in LOWER_BETTER else "higherBetter"


@dataclass(frozen=True)
class PixelAccuracyConfig:
    delta: int = 10
    foreground_threshold: int = 128
    erosion_iterations: int = 1

    def __post_init__(self):
        if not 0 <= self.delta <= 255:
            raise ValueError(f"delta must be in [0, 255], got {self.delta}")
        if not 0 <= self.foreground_threshold <= 255:
            raise ValueError(f"foreground_threshold must be in [0, 255], got {self.foreground_threshold}")
        if self.erosion_iterations < 0:
            raise ValueError("erosion_iterations must be >= 0")


@dataclass(frozen=True)
class PixelAccuracyBreakdown:
    incorrect_pixels: int
    foreground_pixels: int
    score: float


def pixel_accuracy(
    prediction: np.ndarray,
    ground_truth: np.ndarray,
    cfg: PixelAccuracyConfig = PixelAccuracyConfig(),
) -> PixelAccuracyBreakdown:
    """Squared fraction of pixels within `delta` of the ground truth.

    The per-pixel error mask (|pred - gt| > delta) is eroded
    `erosion_iterations` times with the full 3x3 square (frame treated
    as background) before counting, so isolated and one-pixel-wide
    artifacts do not count as errors.  Normalized by the ground-truth
    foreground size; the ratio is clamped at zero before squaring.
    """
    p, g = check_pair(prediction, ground_truth)
    n_fg = int((g > cfg.foreground_threshold).sum())
    if n_fg == 0:
        raise EmptyForegroundError("ground truth has no foreground pixel")
    err = np.abs(p.astype(np.int16) - g.astype(np.int16)) > cfg.delta
    err = erode(err, ERROR_MASK_ELEMENT, cfg.erosion_iterations)
    incorrect = int(err.sum())
    score = max(0.0, 1.0 - incorrect / n_fg) ** 2
    return PixelAccuracyBreakdown(incorrect, n_fg, score)


def mae(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Mean absolute difference on [0, 1]-normalized masks."""
    p, g = check_pair(prediction, ground_truth)
    diff = np.abs(p.astype(np.int64) - g.astype(np.int64))
    return float(int(diff.sum())) / (diff.size * 255)


def mse(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Mean squared difference on [0, 1]-normalized masks."""
    p, g = check_pair(prediction, ground_truth)
    diff = np.abs(p.astype(np.int64) - g.astype(np.int64))
    return float(int((diff * diff).sum())) / (diff.size * 255 * 255)


def _fbeta(tp: np.ndarray, pp: np.ndarray, n_gt: int, beta_sq: float) -> np.ndarray:
    vals = np.zeros(tp.shape[0], np.float64)
    ok = tp > 0
    prec = tp[ok] / pp[ok]
    rec = tp[ok] / n_gt
    vals[ok] = (1.0 + beta_sq) * prec * rec / (beta_sq * prec + rec)
    return vals


def f_measure(prediction: np.ndarray, ground_truth: np.ndarray, statistic: str = "max") -> float:
    """F-beta (beta^2 = 0.3) swept over all 256 binarization thresholds.

    The reported statistic is the maximum over thresholds by default;
    "mean" averages over the full sweep instead.
    """
    p, g = check_pair(prediction, ground_truth)
    gtb = g > FG_THRESHOLD
    n_gt = int(gtb.sum())
    if n_gt == 0:
        raise EmptyForegroundError("ground truth has no foreground pixel")
    tp, pp = kernels.suffix_counts(p, gtb)
    vals = _fbeta(tp, pp, n_gt, F_BETA_SQ)
    return float(vals.max()) if statistic == "max" else float(vals.mean())


def e_measure(prediction: np.ndarray, ground_truth: np.ndarray, statistic: str = "max") -> float:
    """Enhanced-alignment score swept over all 256 thresholds.

    Each threshold compares the binarized prediction with the binarized
    ground truth through mean-biased alignment; degenerate ground
    truths score the prediction's background (all-background) or
    foreground (all-foreground) fraction directly.
    """
    p, g = check_pair(prediction, ground_truth)
    gtb = g > FG_THRESHOLD
    n = p.size
    n_gt = int(gtb.sum())
    tp, pp = kernels.suffix_counts(p, gtb)
    tp = tp.astype(np.float64)
    pp = pp.astype(np.float64)
    if n_gt == 0:
        ems = (n - pp) / n
    elif n_gt == n:
        ems = pp / n
    else:
        mp = pp / n
        mg = n_gt / n
        counts = (tp, pp - tp, n_gt - tp, (n - pp) - (n_gt - tp))
        phis = ((1.0 - mp, 1.0 - mg), (1.0 - mp, -mg), (-mp, 1.0 - mg), (-mp, -mg))
        total = np.zeros(256, np.float64)
        for cnt, (phi_p, phi_g) in zip(counts, phis):
            den = phi_p * phi_p + phi_g * phi_g
            align = np.divide(2.0 * phi_p * phi_g, den, out=np.zeros(256), where=den > 0)
            total += (align + 1.0) ** 2 / 4.0 * cnt
        ems = total / n
    return float(ems.max()) if statistic == "max" else float(ems.mean())


def s_measure(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Structure measure: object- plus region-aware similarity.

    Prediction is normalized to [0, 1], ground truth binarized at 128.
    All-background ground truth scores 1 - mean(pred); all-foreground
    scores mean(pred).  The result is clamped to [0, 1].
    """
    p, g = check_pair(prediction, ground_truth)
    pn = p.astype(np.float64) / 255.0
    gtb = g > FG_THRESHOLD
    n = pn.size
    n_fg = int(gtb.sum())
    if n_fg == 0:
        s = 1.0 - float(pn.mean())
    elif n_fg == n:
        s = float(pn.mean())
    else:
        s = SM_ALPHA * _s_object(pn, gtb) + (1.0 - SM_ALPHA) * _s_region(pn, gtb)
    return min(1.0, max(0.0, s))


def _dispersion_similarity(vals: np.ndarray) -> float:
    x = float(vals.mean())
    sigma = float(vals.std(ddof=1)) if vals.size > 1 else 0.0
    return 2.0 * x / (x * x + 1.0 + sigma)


def _s_object(pn: np.ndarray, gtb: np.ndarray) -> float:
    u = gtb.sum() / gtb.size
    fg_score = _dispersion_similarity(pn[gtb])
    bg_score = _dispersion_similarity((1.0 - pn)[~gtb])
    return u * fg_score + (1.0 - u) * bg_score


def _structural_similarity(pq: np.ndarray, gq: np.ndarray) -> float:
    n = pq.size
    if n == 0:
        return 0.0
    x = float(pq.mean())
    y = float(gq.mean())
    if n > 1:
        sx = float(((pq - x) ** 2).sum()) / (n - 1)
        sy = float(((gq - y) ** 2).sum()) / (n - 1)
        sxy = float(((pq - x) * (gq - y)).sum()) / (n - 1)
    else:
        sx = sy = sxy = 0.0
    num = 4.0 * x * y * sxy
    den = (x * x + y * y) * (sx + sy)
    if num != 0.0:
        return num / den
    return 1.0 if den == 0.0 else 0.0


def _center_cut(mean_index: float, size: int) -> int:
    """Block boundary nearest to the centroid, ties toward the center.

    Symmetric by construction: cut(size-1-mean) == size - cut(mean), so
    the quadrant decomposition mirrors exactly under flips/rotations.
    """
    b = mean_index + 0.5
    lo = math.floor(b)
    frac = b - lo
    if frac > 0.5 or (frac == 0.5 and lo < size / 2):
        return lo + 1
    return lo


def _s_region(pn: np.ndarray, gtb: np.ndarray) -> float:
    h, w = gtb.shape
    ys, xs = np.nonzero(gtb)
    cy = _center_cut(float(ys.mean()), h)
    cx = _center_cut(float(xs.mean()), w)
    n = h * w
    w1 = (cx * cy) / n
    w2 = ((w - cx) * cy) / n
    w3 = (cx * (h - cy)) / n
    w4 = 1.0 - w1 - w2 - w3
    gq = gtb.astype(np.float64)
    return (
        w1 * _structural_similarity(pn[:cy, :cx], gq[:cy, :cx])
        + w2 * _structural_similarity(pn[:cy, cx:], gq[:cy, cx:])
        + w3 * _structural_similarity(pn[cy:, :cx], gq[cy:, :cx])
        + w4 * _structural_similarity(pn[cy:, cx:], gq[cy:, cx:])
    )


def _wf_kernel() -> np.ndarray:
    return kernels.gaussian2d(WF_KERNEL_SIZE, WF_KERNEL_SIGMA)


def weighted_f_measure(prediction: np.ndarray, ground_truth: np.ndarray) -> float:
    """Distance-weighted F-measure (beta^2 = 1).

    Background errors are folded back onto the nearest foreground pixel
    (distance ties resolved to the smallest error so the score does not
    depend on orientation), smoothed with a 7x7 Gaussian, and weighted
    by a distance-decaying importance before forming precision/recall.
    """
    p, g = check_pair(prediction, ground_truth)
    gtb = g > FG_THRESHOLD
    n_fg = int(gtb.sum())
    if n_fg == 0:
        raise EmptyForegroundError("ground truth has no foreground pixel")
    pn = p.astype(np.float64) / 255.0
    err = np.abs(pn - gtb.astype(np.float64))

    _, inv = np.unique(err, return_inverse=True)
    d2, win = kernels.edt_argmin(gtb, inv.reshape(err.shape).astype(np.int64))
    bg = ~gtb
    folded = err.copy()
    folded[bg] = err.ravel()[win[bg]]
    smoothed = kernels.conv2d_same(folded, _wf_kernel())
    min_err = np.where(gtb & (smoothed < err), smoothed, err)
    dist = np.sqrt(d2.astype(np.float64))
    importance = np.where(bg, 2.0 - np.exp(WF_DECAY * dist), 1.0)
    weighted = min_err * importance

    tp_w = n_fg - float(weighted[gtb].sum())
    fp_w = float(weighted[bg].sum())
    recall = 1.0 - float(weighted[gtb].mean())
    precision = tp_w / (tp_w + fp_w + EPS)
    den = WF_BETA_SQ * precision + recall
    if den <= 0.0:
        return 0.0
    return (1.0 + WF_BETA_SQ) * precision * recall / den


def boundary_iou(
    prediction: np.ndarray,
    ground_truth: np.ndarray,
    dilation_ratio: float = BIOU_DILATION_RATIO,
) -> float:
    """IoU restricted to inner boundary bands of both binarized masks.

    Band radius is max(1, round(dilation_ratio * diagonal)).  The image
    frame does not count as a boundary, so a mask that fills the whole
    canvas has an empty band.
    """
    p, g = check_pair(prediction, ground_truth)
    pb = p > FG_THRESHOLD
    gb = g > FG_THRESHOLD
    h, w = p.shape
    radius = max(1, int(math.floor(dilation_ratio * math.sqrt(h * h + w * w) + 0.5)))
    band_p = boundary_band(pb, radius)
    band_g = boundary_band(gb, radius)
    union = int((band_p | band_g).sum())
    if union == 0:
        raise EmptyBandsError("both boundary bands are empty")
    return int((band_p & band_g).sum()) / union


def evaluate_all(
    prediction: np.ndarray,
    ground_truth: np.ndarray,
    cfg: PixelAccuracyConfig = PixelAccuracyConfig(),
    biou_dilation_ratio: float = BIOU_DILATION_RATIO,
) -> list[MetricValue]:
    """All eight metrics in report order; per-metric errors never abort.

    A metric that cannot be computed (e.g. empty foreground) yields a
    MetricValue with value None and the error reason.
    """
    p, g = check_pair(prediction, ground_truth)
    evaluators = {
        MetricId.PA: lambda: pixel_accuracy(p, g, cfg).score,
        MetricId.BIOU: lambda: boundary_iou(p, g, biou_dilation_ratio),
        MetricId.WF: lambda: weighted_f_measure(p, g),
        MetricId.E: lambda: e_measure(p, g),
        MetricId.S: lambda: s_measure(p, g),
        MetricId.MAE: lambda: mae(p, g),
        MetricId.F: lambda: f_measure(p, g),
        MetricId.MSE: lambda: mse(p, g),
    }
    out = []
    for mid in TABLE_ORDER:
        try:
            out.append(MetricValue(mid, float(evaluators[mid]())))
        except ToonbenchError as exc:
            reason = type(exc).__name__.removesuffix("Error")
            out.append(MetricValue(mid, None, reason))
    return out
