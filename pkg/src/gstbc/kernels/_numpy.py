"""Pure-numpy reference implementations of the search hot kernels.

Candidates are single-thread matrices with unit entries, encoded as integer
arrays: ``perm[i, r]`` is the column of the nonzero entry in row ``r`` of
candidate ``i`` and ``ph[i, r]`` its phase as a power of j (0..3).  All
arithmetic below is integer arithmetic on these encodings, so results are
exact; this module is the fallback selected when numba is disabled or
unavailable.
"""

from __future__ import annotations

import numpy as np


def compose(p1, e1, p2, e2):
    """Encoding of the matrix product M1 @ M2 of two single-thread matrices."""
    return p2[p1], (e1 + e2[p1]) % 4


def anticommute_table(perm, ph):
    """t[i, k] = 1 iff M_i M_k == -M_k M_i, for all candidate pairs."""
    nc = perm.shape[0]
    out = np.zeros((nc, nc), dtype=np.uint8)
    for i in range(nc):
        pab = perm[:, perm[i]]                       # (M_i M_k).perm for all k
        eab = (ph[i][None, :] + ph[:, perm[i]]) % 4
        pba = perm[i][perm]                          # (M_k M_i).perm for all k
        eba = (ph + ph[i][perm]) % 4
        out[i] = (pab == pba).all(axis=1) & ((eab - eba) % 4 == 2).all(axis=1)
    return out


def middle_table(perm, ph, anchor):
    """t[k, l] = 1 iff M_k @ M_anchor @ M_l is anti-hermitian.

    For unitary matrices this is equivalent to the triple product squaring
    to -I, which is the pairwise compatibility test of the seed search.
    """
    nc, n = perm.shape
    pa, ea = perm[anchor], ph[anchor]
    px = pa[perm]                                    # M_k @ M_anchor
    ex = (ph + ea[perm]) % 4
    idx = np.arange(n)
    out = np.zeros((nc, nc), dtype=np.uint8)
    for k in range(nc):
        pm = perm[:, px[k]]                          # rows: l
        em = (ex[k][None, :] + ph[:, px[k]]) % 4
        pmp = np.take_along_axis(pm, pm, axis=1)
        emp = np.take_along_axis(em, pm, axis=1)
        out[k] = (pmp == idx).all(axis=1) & ((em + emp + 2) % 4 == 0).all(axis=1)
    return out


def flatten_encoded(perm, ph):
    """Real flattening of each encoded candidate: row-major real parts then
    row-major imaginary parts, entries in {-1, 0, 1}."""
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


def anchor_product_vectors(perm, ph, anchor):
    """Flattened real vectors of M_l @ M_anchor for every candidate l."""
    pa, ea = perm[anchor], ph[anchor]
    pprod = pa[perm]
    eprod = (ph + ea[perm]) % 4
    return flatten_encoded(pprod, eprod)


# Integer row-elimination workspace.  Rows are reduced against the current
# basis only; existing basis rows are never modified, so the caller can use
# plain push/pop stack discipline while backtracking.

OVERFLOW_LIMIT = np.int64(1) << 40


def reduce_row(basis, pivots, nrows, row):
    """Reduce ``row`` against ``basis[:nrows]``; if independent, append it
    (gcd-normalized) at index ``nrows`` and return 1.  Return 0 if dependent,
    -1 on (improbable) integer-overflow risk."""
    v = row.astype(np.int64).copy()
    for t in range(nrows):
        p = pivots[t]
        if v[p]:
            b = basis[t]
            v = v * b[p] - b * v[p]
            m = np.abs(v).max()
            if m >= OVERFLOW_LIMIT:
                return -1
            if m:
                g = np.gcd.reduce(v[v != 0])
                if g > 1:
                    v //= g
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return 0
    basis[nrows] = v
    pivots[nrows] = nz[0]
    return 1


def quotient_rank(basis, pivots, nrows, rows):
    """Rank of ``rows`` modulo the span of ``basis[:nrows]`` (the basis is
    left untouched).  Used as an upper bound on how many further independent
    members a search branch can still add."""
    cap = nrows + rows.shape[0]
    scratch = np.zeros((cap, basis.shape[1]), dtype=np.int64)
    spiv = np.zeros(cap, dtype=np.int64)
    scratch[:nrows] = basis[:nrows]
    spiv[:nrows] = pivots[:nrows]
    count = nrows
    added = 0
    for i in range(rows.shape[0]):
        r = reduce_row(scratch, spiv, count, rows[i])
        if r == 1:
            count += 1
            added += 1
        elif r == -1:
            return rows.shape[0]  # bound stays safe: give up on tightening
    return added


def gram_matrix(delta_re, delta_im):
    """G = X^H X for an integer complex matrix given as (re, im) planes."""
    gr = delta_re.T @ delta_re + delta_im.T @ delta_im
    gi = delta_re.T @ delta_im - delta_im.T @ delta_re
    return gr.astype(np.int64), gi.astype(np.int64)


def hermitian_int_det(gr, gi):
    """Exact determinant of a hermitian Gaussian-integer matrix via
    fraction-free elimination; the result is a rational integer."""
    n = gr.shape[0]
    ar = gr.astype(np.int64).copy()
    ai = gi.astype(np.int64).copy()
    sign = 1
    prev_re, prev_im = np.int64(1), np.int64(0)
    for col in range(n - 1):
        piv = -1
        for r in range(col, n):
            if ar[r, col] or ai[r, col]:
                piv = r
                break
        if piv == -1:
            return np.int64(0)
        if piv != col:
            ar[[col, piv]] = ar[[piv, col]]
            ai[[col, piv]] = ai[[piv, col]]
            sign = -sign
        pr, pi = ar[col, col], ai[col, col]
        for r in range(col + 1, n):
            lr, li = ar[r, col], ai[r, col]
            for c in range(col + 1, n):
                nr = ar[r, c] * pr - ai[r, c] * pi - (lr * ar[col, c] - li * ai[col, c])
                ni = ar[r, c] * pi + ai[r, c] * pr - (lr * ai[col, c] + li * ar[col, c])
                # divide exactly by the previous pivot (fraction-free step)
                den = prev_re * prev_re + prev_im * prev_im
                ar[r, c] = (nr * prev_re + ni * prev_im) // den
                ai[r, c] = (ni * prev_re - nr * prev_im) // den
        prev_re, prev_im = pr, pi
    return sign * ar[n - 1, n - 1]


def min_gram_det(weights_re, weights_im, diffs):
    """Minimum of det(DX^H DX) over all nonzero difference vectors, where
    DX = sum_i d_i W_i with d_i ranging over ``diffs`` (which includes 0).

    Returns (min_det, odometer_index_of_minimizer).  Stops early at zero,
    the smallest possible value for a Gram determinant.
    """
    m, rows, cols = weights_re.shape
    nd = diffs.shape[0]
    total = nd ** m
    best = np.int64(-1)
    best_at = np.int64(-1)
    digits = np.zeros(m, dtype=np.int64)
    dre = np.zeros((rows, cols), dtype=np.int64)
    dim = np.zeros((rows, cols), dtype=np.int64)
    for step in range(1, total):
        # odometer increment; maintain DX incrementally
        pos = 0
        while True:
            old = diffs[digits[pos]]
            digits[pos] += 1
            if digits[pos] == nd:
                digits[pos] = 0
                new = diffs[0]
                dre += (new - old) * weights_re[pos]
                dim += (new - old) * weights_im[pos]
                pos += 1
            else:
                new = diffs[digits[pos]]
                dre += (new - old) * weights_re[pos]
                dim += (new - old) * weights_im[pos]
                break
        gr, gi = gram_matrix(dre, dim)
        d = hermitian_int_det(gr, gi)
        if best < 0 or d < best:
            best = d
            best_at = step
            if best == 0:
                break
    return best, best_at
