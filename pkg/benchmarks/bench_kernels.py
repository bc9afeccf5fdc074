#!/usr/bin/env python3
"""Compare the numba and numpy kernel backends on realistic mask sizes.

Usage: python benchmarks/bench_kernels.py [--side 1024] [--repeat 5]

Also cross-checks that both backends return identical results on the
benchmark inputs before timing them.
"""

import argparse
import time

import numpy as np

from toonbench.kernels import _numba, _numpy, gaussian2d


def _timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--side", type=int, default=1024)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    side = args.side
    ys, xs = np.ogrid[:side, :side]
    disc = ((ys - side // 2) ** 2 + (xs - side // 2) ** 2) <= (side // 3) ** 2
    mask = disc ^ (rng.random((side, side)) < 0.001)
    pred = rng.integers(0, 256, (side, side), dtype=np.uint8)
    img = rng.random((side, side))
    k7 = gaussian2d(7, 5.0)
    rank = np.arange(side * side, dtype=np.int64).reshape(side, side)

    cases = [
        ("erode_once", lambda m: m.erode_once(mask, False, False)),
        ("dilate_once", lambda m: m.dilate_once(mask, False, True)),
        ("suffix_counts", lambda m: m.suffix_counts(pred, mask)),
        ("conv2d_same 7x7", lambda m: m.conv2d_same(img, k7)),
        ("edt_argmin", lambda m: m.edt_argmin(mask, rank)),
    ]

    print(f"side={side}, repeat={args.repeat} (best-of)")
    print(f"{'kernel':<18}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, call in cases:
        a = call(_numba)  # also triggers jit compilation before timing
        b = call(_numpy)
        if isinstance(a, tuple):
            assert all(np.array_equal(x, y) for x, y in zip(a, b)), name
        else:
            assert np.array_equal(a, b), name
        t_nb = _timeit(lambda: call(_numba), args.repeat)
        t_np = _timeit(lambda: call(_numpy), args.repeat)
        print(f"{name:<18}{t_nb * 1e3:>10.2f}ms{t_np * 1e3:>10.2f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
