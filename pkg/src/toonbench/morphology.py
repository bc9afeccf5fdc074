"""Binary morphology: erosion, dilation, boundary bands, distance fields.

All operations are pure functions over bool arrays.  Out-of-bounds
handling is explicit because it decides whether the image frame counts
as an object boundary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptyMaskError


class Shape(enum.Enum):
    SQUARE3 = "square3x3"
    CROSS3 = "cross3x3"


class OutOfBounds(enum.Enum):
    BACKGROUND = "asBackground"
    FOREGROUND = "asForeground"


@dataclass(frozen=True)
class StructuringElement:
    shape: Shape = Shape.SQUARE3
    out_of_bounds: OutOfBounds = OutOfBounds.BACKGROUND


# Error-mask erosion treats the frame as background so one-pixel
# artifacts on the border are removed like any other.
ERROR_MASK_ELEMENT = StructuringElement(Shape.SQUARE3, OutOfBounds.BACKGROUND)
# Band erosion treats the frame as foreground so a cutout touching the
# canvas edge does not earn a boundary band there.
BAND_ELEMENT = StructuringElement(Shape.SQUARE3, OutOfBounds.FOREGROUND)


@dataclass(frozen=True)
class DistanceField:
    """Exact Euclidean distances to the nearest set pixel.

    nearest holds row-major flat indices; among equidistant set pixels
    the smallest flat index wins, so the field is fully deterministic.
    """

    distances: np.ndarray
    nearest: np.ndarray


def _check_bits(mask: np.ndarray) -> np.ndarray:
    b = np.asarray(mask)
    if b.ndim != 2 or b.dtype != np.bool_:
        raise ValueError(f"expected 2-D bool mask, got {b.dtype} {b.shape}")
    return b


def erode(mask: np.ndarray, se: StructuringElement = ERROR_MASK_ELEMENT, iterations: int = 1) -> np.ndarray:
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    out = _check_bits(mask)
    cross = se.shape is Shape.CROSS3
    oob = se.out_of_bounds is OutOfBounds.FOREGROUND
    for _ in range(iterations):
        out = kernels.erode_once(out, cross, oob)
    return out.copy() if out is mask else out


def dilate(mask: np.ndarray, se: StructuringElement = ERROR_MASK_ELEMENT, iterations: int = 1) -> np.ndarray:
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    out = _check_bits(mask)
    cross = se.shape is Shape.CROSS3
    oob = se.out_of_bounds is OutOfBounds.FOREGROUND
    for _ in range(iterations):
        out = kernels.dilate_once(out, cross, oob)
    return out.copy() if out is mask else out


def boundary_band(mask: np.ndarray, radius: int) -> np.ndarray:
    """Set pixels within `radius` of the mask's boundary (inner band)."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    b = _check_bits(mask)
    return b & ~erode(b, BAND_ELEMENT, radius)


def distance_transform(mask: np.ndarray) -> DistanceField:
    """Exact Euclidean distance transform with nearest-pixel indices."""
    b = _check_bits(mask)
    if not b.any():
        raise EmptyMaskError("distance transform of an empty mask")
    h, w = b.shape
    flat_rank = (np.arange(h * w, dtype=np.int64)).reshape(h, w)
    d2, win = kernels.edt_argmin(b, flat_rank)
    return DistanceField(distances=np.sqrt(d2.astype(np.float64)), nearest=win)
