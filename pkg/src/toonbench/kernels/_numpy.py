"""Pure-numpy fallback kernels.

Vectorized where natural; the distance-transform envelope pass reuses
the shared single-source implementation so results match the numba
backend bit for bit.
"""

import numpy as np

from ._fh import envelope_row

_SQUARE_OFFSETS = [(dy, dx) for dy in (-1, 0, 1) for dx in (-1, 0, 1)]
_CROSS_OFFSETS = [(dy, dx) for (dy, dx) in _SQUARE_OFFSETS if dy == 0 or dx == 0]


def _neighborhood_reduce(mask, cross, pad_value, reduce_all):
    h, w = mask.shape
    pad = np.full((h + 2, w + 2), pad_value, np.bool_)
    pad[1 : 1 + h, 1 : 1 + w] = mask
    offsets = _CROSS_OFFSETS if cross else _SQUARE_OFFSETS
    out = None
    for dy, dx in offsets:
        view = pad[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w]
        if out is None:
            out = view.copy()
        elif reduce_all:
            out &= view
        else:
            out |= view
    return out


def erode_once(mask, cross, oob_set):
    return _neighborhood_reduce(mask, cross, oob_set, reduce_all=True)


def dilate_once(mask, cross, oob_set):
    return _neighborhood_reduce(mask, cross, oob_set, reduce_all=False)


def suffix_counts(pred, gt):
    pp_hist = np.bincount(pred.ravel(), minlength=256).astype(np.int64)
    tp_hist = np.bincount(pred[gt].ravel(), minlength=256).astype(np.int64)
    # counts of pixels with value > t, i.e. suffix sums excluding bin t
    pp = np.zeros(256, np.int64)
    tp = np.zeros(256, np.int64)
    pp[:-1] = np.cumsum(pp_hist[::-1])[::-1][1:]
    tp[:-1] = np.cumsum(tp_hist[::-1])[::-1][1:]
    return tp, pp


def conv2d_same(img, k):
    h, w = img.shape
    kh, kw = k.shape
    ph = kh // 2
    pw = kw // 2
    pad = np.zeros((h + kh - 1, w + kw - 1), np.float64)
    pad[ph : ph + h, pw : pw + w] = img
    out = np.zeros((h, w), np.float64)
    for i in range(kh):
        for j in range(kw):
            out += pad[i : i + h, j : j + w] * k[i, j]
    return out


def conv2d_valid(img, k):
    h, w = img.shape
    kh, kw = k.shape
    oh = h - kh + 1
    ow = w - kw + 1
    out = np.zeros((oh, ow), np.float64)
    for i in range(kh):
        for j in range(kw):
            out += img[i : i + oh, j : j + ow] * k[i, j]
    return out


def edt_argmin(bits, rank):
    h, w = bits.shape
    m = h * w + 1
    rows = np.arange(h, dtype=np.int64)[:, None]
    cols = np.arange(w, dtype=np.int64)[None, :]
    big = np.int64(1) << 62

    idx_up = np.where(bits, rows, np.int64(-1))
    up = np.maximum.accumulate(idx_up, axis=0)
    idx_dn = np.where(bits, rows, np.int64(h))
    dn = np.minimum.accumulate(idx_dn[::-1], axis=0)[::-1]
    valid = bits.any(axis=0)

    du = rows - up
    a_up = np.where(up >= 0, du * du, big)
    dd = dn - rows
    a_dn = np.where(dn < h, dd * dd, big)
    rk_up = np.take_along_axis(rank, np.clip(up, 0, None), axis=0)
    rk_dn = np.take_along_axis(rank, np.clip(dn, None, h - 1), axis=0)
    choose_up = (a_up < a_dn) | ((a_up == a_dn) & (rk_up <= rk_dn))

    a2c = np.where(choose_up, a_up, a_dn)
    rkc = np.where(choose_up, rk_up, rk_dn)
    repc = np.where(choose_up, np.clip(up, 0, None), np.clip(dn, None, h - 1)) * w + cols

    d2 = np.empty((h, w), np.int64)
    win = np.empty((h, w), np.int64)
    for y in range(h):
        envelope_row(valid, a2c[y], rkc[y], repc[y], m, d2[y], win[y])
    return d2, win
