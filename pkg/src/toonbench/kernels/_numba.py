"""numba-jitted pixel kernels.

Loop structure mirrors the accumulation order of the numpy fallback so
both backends produce bit-identical results (verified by tests).
"""

import numpy as np
from numba import njit

from ._fh import envelope_row

_envelope_row = njit(cache=True, nogil=True)(envelope_row)


@njit(cache=True, nogil=True)
def erode_once(mask, cross, oob_set):
    h, w = mask.shape
    out = np.empty((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            keep = True
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    if cross and dy != 0 and dx != 0:
                        continue
                    yy = y + dy
                    xx = x + dx
                    if 0 <= yy < h and 0 <= xx < w:
                        v = mask[yy, xx]
                    else:
                        v = oob_set
                    if not v:
                        keep = False
                        break
                if not keep:
                    break
            out[y, x] = keep
    return out


@njit(cache=True, nogil=True)
def dilate_once(mask, cross, oob_set):
    h, w = mask.shape
    out = np.empty((h, w), np.bool_)
    for y in range(h):
        for x in range(w):
            hit = False
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    if cross and dy != 0 and dx != 0:
                        continue
                    yy = y + dy
                    xx = x + dx
                    if 0 <= yy < h and 0 <= xx < w:
                        v = mask[yy, xx]
                    else:
                        v = oob_set
                    if v:
                        hit = True
                        break
                if hit:
                    break
            out[y, x] = hit
    return out


@njit(cache=True, nogil=True)
def suffix_counts(pred, gt):
    """Per threshold t in 0..255: counts of pixels with value > t.

    Returns (tp, pp): tp[t] counts pred > t within gt, pp[t] counts
    pred > t anywhere.
    """
    tp_hist = np.zeros(256, np.int64)
    pp_hist = np.zeros(256, np.int64)
    h, w = pred.shape
    for y in range(h):
        for x in range(w):
            v = pred[y, x]
            pp_hist[v] += 1
            if gt[y, x]:
                tp_hist[v] += 1
    tp = np.zeros(256, np.int64)
    pp = np.zeros(256, np.int64)
    for t in range(254, -1, -1):
        tp[t] = tp[t + 1] + tp_hist[t + 1]
        pp[t] = pp[t + 1] + pp_hist[t + 1]
    return tp, pp


@njit(cache=True, nogil=True)
def conv2d_same(img, k):
    """Zero-padded same-size correlation (kernels here are symmetric)."""
    h, w = img.shape
    kh, kw = k.shape
    ph = kh // 2
    pw = kw // 2
    pad = np.zeros((h + kh - 1, w + kw - 1), np.float64)
    pad[ph : ph + h, pw : pw + w] = img
    out = np.zeros((h, w), np.float64)
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for i in range(kh):
                for j in range(kw):
                    acc += pad[y + i, x + j] * k[i, j]
            out[y, x] = acc
    return out


@njit(cache=True, nogil=True)
def conv2d_valid(img, k):
    h, w = img.shape
    kh, kw = k.shape
    oh = h - kh + 1
    ow = w - kw + 1
    out = np.zeros((oh, ow), np.float64)
    for y in range(oh):
        for x in range(ow):
            acc = 0.0
            for i in range(kh):
                for j in range(kw):
                    acc += img[y + i, x + j] * k[i, j]
            out[y, x] = acc
    return out


@njit(cache=True, nogil=True)
def edt_argmin(bits, rank):
    """Exact squared Euclidean distance to the nearest set pixel.

    Ties in distance are broken by the smallest rank value; the winner's
    flat index is returned alongside the squared distance.  Requires at
    least one set pixel (caller checks) and rank values < h*w + 1.
    """
    h, w = bits.shape
    m = h * w + 1
    a2c = np.empty((h, w), np.int64)
    rkc = np.empty((h, w), np.int64)
    repc = np.empty((h, w), np.int64)
    valid = np.zeros(w, np.bool_)
    up = np.empty(h, np.int64)
    dn = np.empty(h, np.int64)
    for c in range(w):
        has = False
        last = -1
        for y in range(h):
            if bits[y, c]:
                last = y
                has = True
            up[y] = last
        nxt = -1
        for y in range(h - 1, -1, -1):
            if bits[y, c]:
                nxt = y
            dn[y] = nxt
        valid[c] = has
        if not has:
            continue
        for y in range(h):
            ru = up[y]
            rd = dn[y]
            if ru < 0:
                r = rd
            elif rd < 0:
                r = ru
            else:
                du = y - ru
                dd = rd - y
                if du * du < dd * dd:
                    r = ru
                elif dd * dd < du * du:
                    r = rd
                elif rank[ru, c] <= rank[rd, c]:
                    r = ru
                else:
                    r = rd
            dy = y - r
            a2c[y, c] = dy * dy
            rkc[y, c] = rank[r, c]
            repc[y, c] = r * w + c
    d2 = np.empty((h, w), np.int64)
    win = np.empty((h, w), np.int64)
    for y in range(h):
        _envelope_row(valid, a2c[y], rkc[y], repc[y], m, d2[y], win[y])
    return d2, win
