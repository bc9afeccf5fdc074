"""Hot pixel kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time via the TOONBENCH_KERNELS
environment variable: "numba" (require the jit backend), "numpy"
(force the fallback), or "auto" (default: numba when importable).
Both backends are bit-identical; see tests/test_kernels.py.
"""

import os

import numpy as np

__all__ = [
    "BACKEND",
    "erode_once",
    "dilate_once",
    "suffix_counts",
    "conv2d_same",
    "conv2d_valid",
    "edt_argmin",
    "gaussian2d",
]

_choice = os.environ.get("TOONBENCH_KERNELS", "auto").lower()
if _choice not in ("auto", "numba", "numpy"):
    raise ValueError(f"TOONBENCH_KERNELS must be auto|numba|numpy, got {_choice!r}")

if _choice == "numpy":
    from . import _numpy as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise
        from . import _numpy as _impl

        BACKEND = "numpy"

erode_once = _impl.erode_once
dilate_once = _impl.dilate_once
suffix_counts = _impl.suffix_counts
conv2d_same = _impl.conv2d_same
conv2d_valid = _impl.conv2d_valid
edt_argmin = _impl.edt_argmin


def gaussian2d(size: int, sigma: float) -> np.ndarray:
    """Normalized isotropic Gaussian kernel of odd size."""
    half = (size - 1) / 2
    ax = np.arange(size, dtype=np.float64) - half
    g = np.exp(-(ax[:, None] ** 2 + ax[None, :] ** 2) / (2.0 * sigma * sigma))
    return g / g.sum()
