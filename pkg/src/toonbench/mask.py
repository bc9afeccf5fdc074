"""Alpha-mask representation and comparison primitives.

An alpha mask is a (height, width) uint8 array: 0 background, 255
foreground, intermediate values partial transparency.  Binary masks are
(height, width) bool arrays.  Predictions and ground truths use the
same representation and are only ever compared at equal dimensions.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DecodeError, ShapeMismatchError, ZeroDimensionError

# Rec.601 luma, scaled by 1000 for exact integer rounding
_LUMA_R, _LUMA_G, _LUMA_B = 299, 587, 114


def require_mask(arr: np.ndarray) -> np.ndarray:
    """Validate an alpha mask array (2-D uint8, nonzero dimensions)."""
    a = np.asarray(arr)
    if a.ndim != 2:
        raise ShapeMismatchError(f"mask must be 2-D, got shape {a.shape}")
    if a.dtype != np.uint8:
        raise ShapeMismatchError(f"mask must be uint8, got {a.dtype}")
    if a.shape[0] == 0 or a.shape[1] == 0:
        raise ZeroDimensionError(f"mask has zero dimension: {a.shape}")
    return a


def check_pair(prediction: np.ndarray, ground_truth: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Validate a prediction/ground-truth pair of equal dimensions."""
    p = require_mask(prediction)
    g = require_mask(ground_truth)
    if p.shape != g.shape:
        raise ShapeMismatchError(f"prediction {p.shape} vs ground truth {g.shape}")
    return p, g


def load_mask(path: str | os.PathLike) -> np.ndarray:
    """Decode a PNG file into an alpha mask.

    8-bit grayscale is copied verbatim; images with an alpha channel
    contribute that channel; RGB falls back to integer-rounded Rec.601
    luminance; 16-bit grayscale is rescaled to 8-bit (divide by 257,
    round half up).  Anything that is not a PNG is rejected.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_mask(data, source=str(path))


def decode_mask(data: bytes, source: str = "<bytes>") -> np.ndarray:
    """Decode in-memory PNG bytes; same rules as load_mask."""
    try:
        img = Image.open(io.BytesIO(data))
        img.load()
    except (UnidentifiedImageError, OSError, SyntaxError) as exc:
        raise DecodeError(f"{source}: {exc}") from exc
    if img.format != "PNG":
        raise DecodeError(f"{source}: expected PNG, got {img.format}")
    if img.width == 0 or img.height == 0:
        raise ZeroDimensionError(f"{source}: {img.width}x{img.height}")

    mode = img.mode
    if mode == "L":
        return np.asarray(img, dtype=np.uint8)
    if mode in ("LA", "RGBA"):
        return np.asarray(img)[..., -1].astype(np.uint8)
    if mode == "RGB":
        rgb = np.asarray(img).astype(np.int64)
        luma = (_LUMA_R * rgb[..., 0] + _LUMA_G * rgb[..., 1] + _LUMA_B * rgb[..., 2] + 500) // 1000
        return luma.astype(np.uint8)
    if mode in ("I", "I;16", "I;16B", "I;16L"):
        raw = np.asarray(img).astype(np.int64)
        if raw.min() < 0 or raw.max() > 65535:
            raise DecodeError(f"{source}: sample values outside 16-bit range")
        return ((2 * raw + 257) // 514).astype(np.uint8)
    raise DecodeError(f"{source}: unsupported PNG color mode {mode!r}")


def save_mask(mask: np.ndarray, path: str | os.PathLike) -> None:
    """Write an alpha mask as an 8-bit grayscale PNG."""
    m = require_mask(mask)
    Image.fromarray(m, mode="L").save(path, format="PNG")


def binarize(mask: np.ndarray, threshold: int = 128) -> np.ndarray:
    """Bits set where the value strictly exceeds the threshold."""
    if not 0 <= threshold <= 255:
        raise ValueError(f"threshold must be in [0, 255], got {threshold}")
    return require_mask(mask) > threshold


def abs_diff(prediction: np.ndarray, ground_truth: np.ndarray) -> np.ndarray:
    """Per-pixel absolute difference of two masks, as uint8."""
    p, g = check_pair(prediction, ground_truth)
    return np.abs(p.astype(np.int16) - g.astype(np.int16)).astype(np.uint8)
