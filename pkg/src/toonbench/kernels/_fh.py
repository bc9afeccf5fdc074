"""Lower-envelope pass shared by both distance-transform backends.

Single-source so the numba backend jits exactly the code the numpy
fallback runs; the two must stay bit-identical.

For one image row, minimises over valid columns c:

    F_c(x) = m * ((x - c)^2 + a2[c]) + rk[c]

i.e. squared Euclidean distance first, integer tie rank second.  All
boundary comparisons are done in exact int64 rational arithmetic: the
intersection of the parabolas at columns u < v is

    s = (m*A + B) / (2*m*(v - u)),  A = (v^2 - u^2) + a2[v] - a2[u],
                                    B = rk[v] - rk[u]

and is stored as the triple (A, B, v - u).  Exactness holds while
m * A * W fits in int64, true for images up to ~4096 px per side.
"""

import numpy as np


def envelope_row(valid, a2, rk, rep, m, d2_out, win_out):
    w = a2.shape[0]
    vcol = np.empty(w, np.int64)  # parabola columns on the envelope
    za = np.empty(w, np.int64)  # left-boundary rational, A part
    zb = np.empty(w, np.int64)  # ... B part
    zd = np.empty(w, np.int64)  # ... denominator part; 0 marks -inf sentinel
    top = -1
    for q in range(w):
        if not valid[q]:
            continue
        while top >= 0:
            u = vcol[top]
            sa = (q * q - u * u) + (a2[q] - a2[u])
            sb = rk[q] - rk[u]
            sd = q - u
            if zd[top] == 0:
                break  # s > -inf always
            # pop while s <= z[top]: sign of m*(sa*zd - za*sd) + (sb*zd - zb*sd)
            t = m * (sa * zd[top] - za[top] * sd) + (sb * zd[top] - zb[top] * sd)
            if t > 0:
                break
            top -= 1
        if top < 0:
            top = 0
            vcol[0] = q
            zd[0] = 0
        else:
            u = vcol[top]
            top += 1
            vcol[top] = q
            za[top] = (q * q - u * u) + (a2[q] - a2[u])
            zb[top] = rk[q] - rk[u]
            zd[top] = q - u
    k = 0
    for x in range(w):
        # advance while z[k+1] < x (strict: an exact tie stays on the left)
        while k < top and m * (za[k + 1] - 2 * x * zd[k + 1]) + zb[k + 1] < 0:
            k += 1
        c = vcol[k]
        d2_out[x] = (x - c) * (x - c) + a2[c]
        win_out[x] = rep[c]
