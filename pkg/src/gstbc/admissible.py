"""Enumeration of admissible cross-term matrices.

A weight matrix class of single-thread matrices (one nonzero entry per row
and per column) with entries in {1, -1, j, -j} forces every cross-group
product of weight matrices into the same class, further constrained to be
unitary, anti-hermitian and squaring to -I.  Written in the anti-hermitian
basis, such a matrix has real coefficients a_k with sum of squares one, each
quantized to (n - 2k)/n for n = 2**a.  This module enumerates that finite
set completely.

Two independent enumeration routes are implemented and cross-checked:

* coefficient space -- every coefficient vector over the quantized domain
  with unit square-sum, filtered by the matrix-level invariants (production
  route for a <= 2);
* structure space -- directly over symmetric single-thread supports with
  unit entries (cheap; the only practical route for a = 3, where the
  coefficient space is astronomically large).

The two routes provably describe the same set; the test suite checks the
sets are identical for a in {1, 2}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import NamedTuple, Optional

import numpy as np

from . import clifford
from .exact import ExactMatrix, GaussianRational, ShapeError, UNIT_PHASES

__all__ = [
    "coefficient_domain",
    "coeffs_admissible",
    "ThreadProfile",
    "single_thread_profile",
    "Candidate",
    "enumerate_candidates",
    "encode_candidates",
    "A3_COST_WARNING",
]

A3_COST_WARNING = (
    "enumeration for a=3 walks ~2e5 candidates over 8x8 matrices and is "
    "noticeably slow; pass allow_large=True to opt in"
)


def coefficient_domain(a: int) -> tuple:
    """All values (n - 2k)/n with magnitude <= 1, n = 2**a, descending.

    Values outside [-1, 1] cannot occur because the squares must sum to 1.
    """
    if a < 1:
        raise ValueError("antenna exponent a must be >= 1")
    n = 2 ** a
    return tuple(Fraction(n - 2 * k, n) for k in range(0, n + 1))


class ThreadProfile(NamedTuple):
    """Shape data of a single-thread unit matrix.

    ``row_threads`` gives, per row, the 1-based index of the disjoint
    permutation (thread) containing that row's nonzero position.
    ``thread_index`` is set only when the whole support coincides with one
    of those permutations; general admissible matrices may interleave
    several (the quantized-coefficient class contains such blends).
    """

    perm: tuple            # column of the nonzero entry, per row
    phase_quarters: tuple  # power of j of that entry, per row
    row_threads: tuple     # 1-based thread id per row (row XOR column + 1)

    @property
    def thread_index(self) -> Optional[int]:
        first = self.row_threads[0]
        return first if all(t == first for t in self.row_threads) else None

    @property
    def threads(self) -> tuple:
        return tuple(sorted(set(self.row_threads)))


def single_thread_profile(matrix: ExactMatrix) -> Optional[ThreadProfile]:
    """Profile of ``matrix`` if it has exactly one nonzero entry per row and
    per column with all nonzero entries in {1, -1, j, -j}; None otherwise."""
    if not matrix.is_square:
        return None
    n = matrix.rows
    perm = []
    quarters = []
    for r in range(n):
        hits = [c for c in range(n) if matrix.entry(r, c)]
        if len(hits) != 1:
            return None
        c = hits[0]
        value = matrix.entry(r, c)
        try:
            q = UNIT_PHASES.index(value)
        except ValueError:
            return None
        perm.append(c)
        quarters.append(q)
    if len(set(perm)) != n:
        return None
    return ThreadProfile(tuple(perm), tuple(quarters),
                         tuple((r ^ c) + 1 for r, c in enumerate(perm)))


def coeffs_admissible(b: clifford.CliffordBasis, coeffs) -> bool:
    """Coefficient-level admissibility: the squares sum to 1 and the sum of
    a_k a_l alpha_k alpha_l over commuting pairs k < l vanishes exactly.

    For real coefficients these two conditions hold iff the combination is
    unitary and squares to -I.
    """
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != len(b):
        raise ShapeError(f"need {len(b)} coefficients, got {len(coeffs)}")
    if sum(c * c for c in coeffs) != 1:
        return False
    support = [i + 1 for i, c in enumerate(coeffs) if c]
    return _commuting_pair_sum_is_zero(b, [(k, coeffs[k - 1]) for k in support])


def _commuting_pair_sum_is_zero(b: clifford.CliffordBasis, sparse) -> bool:
    """sparse: list of (1-based basis index, nonzero Fraction)."""
    table = _product_table(b.a)
    acc: dict = {}
    for (k, ak), (l, al) in combinations(sparse, 2):
        if not b.commutes(k, l):
            continue
        phase_q, m = table[(k, l)]
        cur = acc.get(m, GaussianRational(0))
        acc[m] = cur + UNIT_PHASES[phase_q] * GaussianRational(ak * al)
    return all(v.is_zero for v in acc.values())


@lru_cache(maxsize=None)
def _product_table(a: int) -> dict:
    """(k, l) -> (phase quarter, m) with alpha_k alpha_l = j^quarter alpha_m."""
    b = clifford.basis(a)
    out = {}
    for k in range(1, len(b) + 1):
        for l in range(1, len(b) + 1):
            if k == l:
                continue
            scalar, m = b.product(k, l)
            out[(k, l)] = (UNIT_PHASES.index(scalar), m)
    return out


@dataclass(frozen=True)
class Candidate:
    """One admissible matrix with its coefficient and thread metadata.

    ``support`` holds the 1-based basis indices of the nonzero coefficients
    and ``coeff_values`` the corresponding values, in support order.
    """

    a: int
    perm: tuple
    phase_quarters: tuple
    support: tuple
    coeff_values: tuple
    _matrix_cache: list = field(default_factory=list, repr=False, compare=False, hash=False)

    @property
    def n(self) -> int:
        return 2 ** self.a

    @property
    def matrix(self) -> ExactMatrix:
        if not self._matrix_cache:
            n = self.n
            ent = [GaussianRational(0)] * (n * n)
            for r in range(n):
                ent[r * n + self.perm[r]] = UNIT_PHASES[self.phase_quarters[r]]
            self._matrix_cache.append(ExactMatrix(n, n, ent))
        return self._matrix_cache[0]

    @property
    def coeffs(self) -> tuple:
        """Full coefficient vector over the whole basis (mostly zero)."""
        full = [Fraction(0)] * (self.n * self.n)
        for k, v in zip(self.support, self.coeff_values):
            full[k - 1] = v
        return tuple(full)

    @property
    def row_threads(self) -> tuple:
        return tuple((r ^ c) + 1 for r, c in enumerate(self.perm))

    @property
    def thread_index(self) -> Optional[int]:
        rt = self.row_threads
        return rt[0] if all(t == rt[0] for t in rt) else None

    @property
    def threads(self) -> tuple:
        return tuple(sorted(set(self.row_threads)))

    def negated(self) -> "Candidate":
        return Candidate(self.a, self.perm,
                         tuple((q + 2) % 4 for q in self.phase_quarters),
                         self.support, tuple(-v for v in self.coeff_values))

    def sort_key(self) -> tuple:
        return (len(self.support), self.support, tuple(-v for v in self.coeff_values))


def enumerate_candidates(a: int, method: str = "auto", allow_large: bool = False) -> tuple:
    """The complete, duplicate-free, canonically ordered list of admissible
    matrices for n = 2**a antennas.

    ``method`` selects the route: "coeff" (coefficient space), "structure"
    (single-thread supports) or "auto".  The two routes yield identical sets;
    "auto" uses the coefficient route for a <= 2 and the structure route for
    a = 3, the latter only with ``allow_large=True``.
    """
    if a < 1:
        raise ValueError("antenna exponent a must be >= 1")
    if method == "auto":
        method = "coeff" if a <= 2 else "structure"
    if method not in ("coeff", "structure"):
        raise ValueError(f"unknown enumeration method {method!r}")
    if a == 3 and not allow_large:
        raise ValueError(A3_COST_WARNING)
    if a > 3 or (a == 3 and method == "coeff"):
        raise ValueError("enumeration supported for a in {1, 2} and, via the "
                         "structure route with allow_large=True, a = 3")
    return _enumerate_cached(a, method)


@lru_cache(maxsize=None)
def _enumerate_cached(a: int, method: str) -> tuple:
    if method == "coeff":
        encodings = _coefficient_route(a)
    else:
        encodings = _structure_route(a)
    cands = _attach_coefficients(a, encodings)
    cands.sort(key=Candidate.sort_key)
    assert len({(c.perm, c.phase_quarters) for c in cands}) == len(cands)
    return tuple(cands)


def _coefficient_route(a: int) -> list:
    """Filter every coefficient vector over the quantized domain with unit
    square-sum down to single-thread unit-entry results."""
    b = clifford.basis(a)
    n = 2 ** a
    nb = len(b)
    magnitudes = [c for c in coefficient_domain(a) if c > 0]
    encodings = []
    seen = set()
    basis_enc = _basis_encodings(a)
    for pattern in _value_patterns(magnitudes):
        size = len(pattern)
        for support in combinations(range(1, nb + 1), size):
            for magset in _distinct_permutations(pattern):
                for signs in product((1, -1), repeat=size):
                    values = tuple(s * m for s, m in zip(signs, magset))
                    sparse = list(zip(support, values))
                    if not _commuting_pair_sum_is_zero(b, sparse):
                        continue
                    enc = _sparse_to_encoding(n, basis_enc, sparse)
                    if enc is None or enc in seen:
                        continue
                    seen.add(enc)
                    encodings.append(enc)
    return encodings


def _value_patterns(magnitudes) -> list:
    """All non-increasing tuples of positive magnitudes whose squares sum
    to 1 (the possible magnitude multisets of a coefficient vector)."""
    out = []

    def rec(remaining: Fraction, start: int, acc: list) -> None:
        if remaining == 0:
            out.append(tuple(acc))
            return
        for i in range(start, len(magnitudes)):
            m = magnitudes[i]
            if m * m <= remaining:
                acc.append(m)
                rec(remaining - m * m, i, acc)
                acc.pop()

    rec(Fraction(1), 0, [])
    return out


def _distinct_permutations(values) -> list:
    return sorted(set(permutations(values)))


@lru_cache(maxsize=None)
def _basis_encodings(a: int) -> tuple:
    """(perm, quarters) for every basis element, 1-based positions shifted
    to a 0-based tuple index."""
    b = clifford.basis(a)
    out = []
    for el in b:
        profile = single_thread_profile(el.matrix)
        assert profile is not None
        out.append((profile.perm, profile.phase_quarters))
    return tuple(out)


def _sparse_to_encoding(n: int, basis_enc, sparse):
    """Sum the sparse combination and keep it only if the result is a
    single-thread matrix with unit entries (encoded form), else None."""
    cells: dict = {}
    for k, value in sparse:
        perm, quarters = basis_enc[k - 1]
        for r in range(n):
            pos = (r, perm[r])
            cur = cells.get(pos, GaussianRational(0))
            cells[pos] = cur + UNIT_PHASES[quarters[r]] * GaussianRational(value)
    out_perm = [-1] * n
    out_quarters = [0] * n
    used_cols = 0
    for (r, c), val in cells.items():
        if val.is_zero:
            continue
        try:
            q = UNIT_PHASES.index(val)
        except ValueError:
            return None
        if out_perm[r] != -1:
            return None
        out_perm[r] = c
        out_quarters[r] = q
        used_cols |= 1 << c
    if -1 in out_perm or used_cols != (1 << n) - 1:
        return None
    return tuple(out_perm), tuple(out_quarters)


def _structure_route(a: int) -> list:
    """Directly enumerate symmetric single-thread supports with unit entries.

    Anti-hermitianity forces the support permutation to be an involution,
    fixed points to carry +-j and paired positions to carry value pairs
    (v, -conj(v)); such a matrix is automatically unitary and squares to -I.
    """
    n = 2 ** a
    encodings = []
    for cycles in _involutions(n):
        fixed = [c[0] for c in cycles if len(c) == 1]
        pairs = [c for c in cycles if len(c) == 2]
        for fixed_q in product((1, 3), repeat=len(fixed)):
            for pair_q in product(range(4), repeat=len(pairs)):
                perm = [0] * n
                quarters = [0] * n
                for r, q in zip(fixed, fixed_q):
                    perm[r] = r
                    quarters[r] = q
                for (r, c), q in zip(pairs, pair_q):
                    perm[r] = c
                    quarters[r] = q
                    perm[c] = r
                    quarters[c] = (2 - q) % 4
                encodings.append((tuple(perm), tuple(quarters)))
    return encodings


def _involutions(n: int):
    def rec(remaining):
        if not remaining:
            yield []
            return
        first = remaining[0]
        rest = remaining[1:]
        for tail in rec(rest):
            yield [(first,)] + tail
        for i, partner in enumerate(rest):
            others = rest[:i] + rest[i + 1:]
            for tail in rec(others):
                yield [(first, partner)] + tail
    yield from rec(list(range(n)))


def _attach_coefficients(a: int, encodings: list) -> list:
    """Recover each candidate's (support, values) from traces against the
    basis, vectorized: a_k * n = tr(alpha_k^H M) which, for single-thread
    operands, is a row-overlap sum of unit phases."""
    n = 2 ** a
    basis_enc = _basis_encodings(a)
    perm = np.array([e[0] for e in encodings], dtype=np.int64)
    quarters = np.array([e[1] for e in encodings], dtype=np.int64)
    numerators = np.zeros((len(encodings), len(basis_enc)), dtype=np.int64)
    for k, (bperm, bq) in enumerate(basis_enc):
        bp = np.array(bperm, dtype=np.int64)
        bqa = np.array(bq, dtype=np.int64)
        match = perm == bp[None, :]
        qd = (quarters - bqa[None, :]) % 4
        re = np.where(match & (qd == 0), 1, 0) - np.where(match & (qd == 2), 1, 0)
        im = np.where(match & (qd == 1), 1, 0) - np.where(match & (qd == 3), 1, 0)
        assert not im.sum(axis=1).any(), "coefficients of an admissible matrix must be real"
        numerators[:, k] = re.sum(axis=1)
    out = []
    for i, enc in enumerate(encodings):
        nz = np.nonzero(numerators[i])[0]
        support = tuple(int(k) + 1 for k in nz)
        values = tuple(Fraction(int(numerators[i, k]), n) for k in nz)
        out.append(Candidate(a, enc[0], enc[1], support, values))
    return out


def encode_candidates(candidates) -> tuple:
    """Pack candidates into kernel-ready integer arrays plus the negation
    pairing: returns (perm[N,n], quarters[N,n], neg_index[N], positive_reps).

    ``positive_reps`` are the indices whose canonical key precedes their
    negation's, i.e. whose leading nonzero coefficient is positive.
    """
    perm = np.array([c.perm for c in candidates], dtype=np.int64)
    quarters = np.array([c.phase_quarters for c in candidates], dtype=np.int64)
    index_of = {(c.perm, c.phase_quarters): i for i, c in enumerate(candidates)}
    neg = np.empty(len(candidates), dtype=np.int64)
    for i, c in enumerate(candidates):
        neg_key = (c.perm, tuple((q + 2) % 4 for q in c.phase_quarters))
        neg[i] = index_of[neg_key]
    pos = [i for i in range(len(candidates)) if i < neg[i]]
    return perm, quarters, neg, pos
