import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def bench_fixture(tmp_path_factory):
    from .fixture_builder import build_fixture

    return build_fixture(tmp_path_factory.mktemp("fixture"))


def random_gray(rng, h=16, w=16) -> np.ndarray:
    return rng.integers(0, 256, (h, w), dtype=np.uint8)


def random_gray_fg(rng, h=16, w=16) -> np.ndarray:
    """Random grayscale ground truth guaranteed to have foreground."""
    g = random_gray(rng, h, w)
    if not (g > 128).any():
        g[rng.integers(0, h), rng.integers(0, w)] = 200
    return g


def random_binary_mixed(rng, h=16, w=16, lo=0.2, hi=0.8) -> np.ndarray:
    """Random 0/255 mask with a moderate foreground fraction."""
    while True:
        m = (rng.random((h, w)) < rng.uniform(lo, hi)).astype(np.uint8) * 255
        frac = (m > 128).mean()
        if lo <= frac <= hi:
            return m


def blob_mask(h, w, cy, cx, radius) -> np.ndarray:
    """Solid disc, 0/255."""
    ys, xs = np.ogrid[:h, :w]
    return (((ys - cy) ** 2 + (xs - cx) ** 2) <= radius * radius).astype(np.uint8) * 255
