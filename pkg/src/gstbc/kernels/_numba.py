"""Numba-compiled versions of the search hot kernels.

Same contracts as ``_numpy``; explicit loops instead of vectorized fancy
indexing, compiled with ``@njit(cache=True)``.  All arithmetic is integer
arithmetic on the single-thread encodings, so both backends are exact and
must agree bit-for-bit (enforced by the test suite and the benchmark).
"""

from __future__ import annotations

import numpy as np
from numba import njit

OVERFLOW_LIMIT = np.int64(1) << 40


@njit(cache=True)
def anticommute_table(perm, ph):
    nc, n = perm.shape
    out = np.zeros((nc, nc), dtype=np.uint8)
    for i in range(nc):
        for k in range(nc):
            ok = True
            for r in range(n):
                pab = perm[k, perm[i, r]]
                pba = perm[i, perm[k, r]]
                if pab != pba:
                    ok = False
                    break
                eab = (ph[i, r] + ph[k, perm[i, r]]) % 4
                eba = (ph[k, r] + ph[i, perm[k, r]]) % 4
                if (eab - eba) % 4 != 2:
                    ok = False
                    break
            if ok:
                out[i, k] = 1
    return out


@njit(cache=True)
def middle_table(perm, ph, anchor):
    nc, n = perm.shape
    out = np.zeros((nc, nc), dtype=np.uint8)
    px = np.empty((nc, n), dtype=perm.dtype)
    ex = np.empty((nc, n), dtype=ph.dtype)
    for k in range(nc):
        for r in range(n):
            px[k, r] = perm[anchor, perm[k, r]]
            ex[k, r] = (ph[k, r] + ph[anchor, perm[k, r]]) % 4
    pm = np.empty(n, dtype=perm.dtype)
    em = np.empty(n, dtype=ph.dtype)
    for k in range(nc):
        for l in range(nc):
            for r in range(n):
                pm[r] = perm[l, px[k, r]]
                em[r] = (ex[k, r] + ph[l, px[k, r]]) % 4
            ok = True
            for r in range(n):
                if pm[pm[r]] != r:
                    ok = False
                    break
                if (em[r] + em[pm[r]] + 2) % 4 != 0:
                    ok = False
                    break
            if ok:
                out[k, l] = 1
    return out


@njit(cache=True)
def flatten_encoded(perm, ph):
    nc, n = perm.shape
    out = np.zeros((nc, 2 * n * n), dtype=np.int64)
    for i in range(nc):
        for r in range(n):
            e = ph[i, r]
            c = perm[i, r]
            if e == 0:
                out[i, r * n + c] = 1
            elif e == 2:
                out[i, r * n + c] = -1
            elif e == 1:
                out[i, n * n + r * n + c] = 1
            else:
                out[i, n * n + r * n + c] = -1
    return out


@njit(cache=True)
def anchor_product_vectors(perm, ph, anchor):
    nc, n = perm.shape
    pprod = np.empty((nc, n), dtype=perm.dtype)
    eprod = np.empty((nc, n), dtype=ph.dtype)
    for i in range(nc):
        for r in range(n):
            pprod[i, r] = perm[anchor, perm[i, r]]
            eprod[i, r] = (ph[i, r] + ph[anchor, perm[i, r]]) % 4
    return flatten_encoded(pprod, eprod)


@njit(cache=True)
def reduce_row(basis, pivots, nrows, row):
    dim = basis.shape[1]
    v = row.astype(np.int64).copy()
    for t in range(nrows):
        p = pivots[t]
        if v[p] != 0:
            bp = basis[t, p]
            vp = v[p]
            mx = np.int64(0)
            for c in range(dim):
                v[c] = v[c] * bp - basis[t, c] * vp
                a = v[c] if v[c] >= 0 else -v[c]
                if a > mx:
                    mx = a
            if mx >= OVERFLOW_LIMIT:
                return -1
            if mx > 0:
                g = np.int64(0)
                for c in range(dim):
                    a = v[c] if v[c] >= 0 else -v[c]
                    if a:
                        while a:
                            g, a = a, g % a
                        if g == 1:
                            break
                if g > 1:
                    for c in range(dim):
                        v[c] //= g
    piv = -1
    for c in range(dim):
        if v[c] != 0:
            piv = c
            break
    if piv == -1:
        return 0
    basis[nrows] = v
    pivots[nrows] = piv
    return 1


@njit(cache=True)
def quotient_rank(basis, pivots, nrows, rows):
    cap = nrows + rows.shape[0]
    scratch = np.zeros((cap, basis.shape[1]), dtype=np.int64)
    spiv = np.zeros(cap, dtype=np.int64)
    for t in range(nrows):
        scratch[t] = basis[t]
        spiv[t] = pivots[t]
    count = nrows
    added = 0
    for i in range(rows.shape[0]):
        r = reduce_row(scratch, spiv, count, rows[i])
        if r == 1:
            count += 1
            added += 1
        elif r == -1:
            return rows.shape[0]
    return added


@njit(cache=True)
def hermitian_int_det(gr, gi):
    n = gr.shape[0]
    ar = gr.astype(np.int64).copy()
    ai = gi.astype(np.int64).copy()
    sign = np.int64(1)
    prev_re = np.int64(1)
    prev_im = np.int64(0)
    for col in range(n - 1):
        piv = -1
        for r in range(col, n):
            if ar[r, col] != 0 or ai[r, col] != 0:
                piv = r
                break
        if piv == -1:
            return np.int64(0)
        if piv != col:
            for c in range(n):
                ar[col, c], ar[piv, c] = ar[piv, c], ar[col, c]
                ai[col, c], ai[piv, c] = ai[piv, c], ai[col, c]
            sign = -sign
        pr = ar[col, col]
        pi = ai[col, col]
        den = prev_re * prev_re + prev_im * prev_im
        for r in range(col + 1, n):
            lr = ar[r, col]
            li = ai[r, col]
            for c in range(col + 1, n):
                nr = ar[r, c] * pr - ai[r, c] * pi - (lr * ar[col, c] - li * ai[col, c])
                ni = ar[r, c] * pi + ai[r, c] * pr - (lr * ai[col, c] + li * ar[col, c])
                ar[r, c] = (nr * prev_re + ni * prev_im) // den
                ai[r, c] = (ni * prev_re - nr * prev_im) // den
        prev_re = pr
        prev_im = pi
    return sign * ar[n - 1, n - 1]


@njit(cache=True)
def min_gram_det(weights_re, weights_im, diffs):
    m, rows, cols = weights_re.shape
    nd = diffs.shape[0]
    total = 1
    for _ in range(m):
        total *= nd
    best = np.int64(-1)
    best_at = np.int64(-1)
    digits = np.zeros(m, dtype=np.int64)
    dre = np.zeros((rows, cols), dtype=np.int64)
    dim = np.zeros((rows, cols), dtype=np.int64)
    gr = np.zeros((cols, cols), dtype=np.int64)
    gi = np.zeros((cols, cols), dtype=np.int64)
    for step in range(1, total):
        pos = 0
        while True:
            old = diffs[digits[pos]]
            digits[pos] += 1
            if digits[pos] == nd:
                digits[pos] = 0
                delta = diffs[0] - old
                for r in range(rows):
                    for c in range(cols):
                        dre[r, c] += delta * weights_re[pos, r, c]
                        dim[r, c] += delta * weights_im[pos, r, c]
                pos += 1
            else:
                delta = diffs[digits[pos]] - old
                for r in range(rows):
                    for c in range(cols):
                        dre[r, c] += delta * weights_re[pos, r, c]
                        dim[r, c] += delta * weights_im[pos, r, c]
                break
        for i in range(cols):
            for k in range(cols):
                sr = np.int64(0)
                si = np.int64(0)
                for r in range(rows):
                    sr += dre[r, i] * dre[r, k] + dim[r, i] * dim[r, k]
                    si += dre[r, i] * dim[r, k] - dim[r, i] * dre[r, k]
                gr[i, k] = sr
                gi[i, k] = si
        d = hermitian_int_det(gr, gi)
        if best < 0 or d < best:
            best = d
            best_at = step
            if best == 0:
                break
    return best, best_at
