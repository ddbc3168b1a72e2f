"""Exhaustive depth-first search for multi-group decodable code seeds.

A seed is the generating set from which a whole g-group code is rebuilt:
one anchor matrix (the cross product of the first weight matrices of groups
one and two), the cross products tied to the remaining first-group weights,
and the cross products tied to the remaining weights of groups two and up,
the latter carrying a block label per member.  Seeds must satisfy, exactly:

1. every member is admissible (unitary, anti-hermitian, squares to -I,
   single-thread with unit entries);
2. member @ anchor @ member' is anti-hermitian for every (first-group,
   right-side) pair -- equivalent to the triple product squaring to -I;
3. the first-group members together with -I and the right-side members
   multiplied by the anchor are linearly independent over the reals;
4. right-side members in different blocks anticommute pairwise (the anchor
   belongs to the first block).

The search walks candidates in canonical order, keeps each member list
strictly increasing, and (by default) extends only sign-canonical
representatives: flipping the sign of any member preserves validity, so each
orbit under per-member negation is counted once.  Results are re-sorted
after any parallel merge, making output independent of worker count.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .admissible import encode_candidates, enumerate_candidates, single_thread_profile
from .exact import ExactMatrix, rank_over_reals, reduce_against_basis

__all__ = [
    "VerificationError",
    "GroupSignature",
    "Seed",
    "StbcCode",
    "find_seeds",
    "split_right_group",
    "reconstruct_weights",
    "remove_columns",
    "max_rate_search",
    "MaxRateResult",
]


class VerificationError(ValueError):
    """A constructed object violates one of its defining conditions."""

    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        super().__init__(f"{condition}{': ' + detail if detail else ''}")


@dataclass(frozen=True)
class GroupSignature:
    """Group sizes (n_1, ..., n_g) of a multi-group code."""

    sizes: tuple

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.sizes)
        object.__setattr__(self, "sizes", sizes)
        if len(sizes) < 2:
            raise ValueError("need at least two groups")
        if any(s < 1 for s in sizes):
            raise ValueError("group sizes must be positive")

    @property
    def groups(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return sum(self.sizes)

    @property
    def symmetric(self) -> bool:
        return len(set(self.sizes)) == 1

    def rate(self, a: int) -> Fraction:
        """Complex symbols per channel use for the signalling period 2**a."""
        return Fraction(self.total, 2 * 2 ** a)


@dataclass(frozen=True)
class Seed:
    """A validated generating set, stored as candidate indices.

    ``group1`` are the first-group members beyond the anchor; ``group2`` the
    right-side members beyond the anchor, with ``block_labels`` giving each
    right-side member's 0-based block (the anchor always sits in block 0).
    """

    a: int
    signature: GroupSignature
    candidates: tuple = field(repr=False, hash=False, compare=False)
    anchor: int
    group1: tuple
    group2: tuple
    block_labels: tuple

    def sort_key(self) -> tuple:
        return (self.anchor, self.group1, self.group2, self.block_labels)

    @property
    def anchor_candidate(self) -> Candidate:
        return self.candidates[self.anchor]

    @property
    def group1_candidates(self) -> tuple:
        return tuple(self.candidates[i] for i in self.group1)

    @property
    def group2_candidates(self) -> tuple:
        return tuple(self.candidates[i] for i in self.group2)

    def right_blocks(self) -> list:
        """Right-side members per block, anchor included in block 0."""
        blocks = [[] for _ in self.signature.sizes[1:]]
        blocks[0].append(self.anchor_candidate)
        for idx, label in zip(self.group2, self.block_labels):
            blocks[label].append(self.candidates[idx])
        return blocks

    def validate(self) -> None:
        """From-scratch re-validation of all four conditions with exact
        matrix arithmetic, independent of the incremental search path."""
        anchor = self.anchor_candidate.matrix
        lefts = [c.matrix for c in self.group1_candidates]
        rights = [c.matrix for c in self.group2_candidates]
        n = anchor.rows
        for m in [anchor] + lefts + rights:
            if not (m.is_unitary() and m.squares_to_minus_identity()
                    and m.is_anti_hermitian() and single_thread_profile(m)):
                raise VerificationError("admissible-members")
        for k in lefts:
            for l in rights:
                if not (k @ anchor @ l).squares_to_minus_identity():
                    raise VerificationError("triple-product-squares-to-minus-identity")
        fam = [anchor] + lefts + [ExactMatrix.identity(n).scale(-1)] \
            + [r @ anchor for r in rights]
        if rank_over_reals(fam) != len(fam):
            raise VerificationError("real-linear-independence")
        blocks = self.right_blocks()
        for bi in range(len(blocks)):
            for bj in range(bi + 1, len(blocks)):
                for x in blocks[bi]:
                    for y in blocks[bj]:
                        if not (x.matrix @ y.matrix + y.matrix @ x.matrix).is_zero():
                            raise VerificationError("cross-block-anticommutation")
        sizes = self.signature.sizes
        if len(self.group1) != sizes[0] - 1:
            raise VerificationError("signature-shape")
        for b, blk in enumerate(blocks):
            if len(blk) != sizes[1 + b]:
                raise VerificationError("signature-shape")


class _RankStack:
    """Strict stack of real-flattened members with exact integer
    elimination.  Kernel-backed int64 rows for a <= 2; arbitrary-precision
    Python integers otherwise."""

    def __init__(self, a: int, dim: int, capacity: int):
        self.use_python = a >= 3
        if self.use_python:
            self.rows: list = []
            self.pivots: list = []
        else:
            self.basis = np.zeros((capacity, dim), dtype=np.int64)
            self.pivs = np.zeros(capacity, dtype=np.int64)
        self.nrows = 0

    def push(self, vector) -> bool:
        if self.use_python:
            red = reduce_against_basis([int(x) for x in vector], self.rows, self.pivots)
            if red is None:
                return False
            self.rows.append(red)
            self.pivots.append(next(i for i, x in enumerate(red) if x))
            self.nrows += 1
            return True
        r = kernels.reduce_row(self.basis, self.pivs, self.nrows, vector)
        if r == -1:
            raise RuntimeError("integer elimination exceeded the int64 safety bound")
        if r == 1:
            self.nrows += 1
            return True
        return False

    def pop(self) -> None:
        self.nrows -= 1
        if self.use_python:
            self.rows.pop()
            self.pivots.pop()


_IDENTITY_VECTOR_CACHE: dict = {}


def _identity_vector(n: int):
    v = _IDENTITY_VECTOR_CACHE.get(n)
    if v is None:
        v = np.zeros(2 * n * n, dtype=np.int64)
        for i in range(n):
            v[i * n + i] = 1
        _IDENTITY_VECTOR_CACHE[n] = v
    return v


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _rows_to_masks(table: np.ndarray, scope: int) -> list:
    """Bitmask per row of a boolean table, restricted to ``scope`` bits."""
    out = []
    for row in table:
        m = 0
        for i in _bits(scope):
            if row[i]:
                m |= 1 << i
        out.append(m)
    return out


class _SeedSearch:
    """One search instance: fixed candidate list, signature and options."""

    def __init__(self, a: int, signature: GroupSignature, candidates,
                 sign_reduction: bool, limit: Optional[int], count_only: bool):
        self.a = a
        self.n = 2 ** a
        self.signature = signature
        self.candidates = tuple(candidates)
        self.sign_reduction = sign_reduction
        self.limit = limit
        self.count_only = count_only
        self.perm, self.quarters, self.neg, pos = encode_candidates(self.candidates)
        indices = pos if sign_reduction else range(len(self.candidates))
        self.pool_mask = reduce(lambda m, i: m | (1 << i), indices, 0)
        self.flat = kernels.flatten_encoded(self.perm, self.quarters)
        anti = kernels.anticommute_table(self.perm, self.quarters)
        self.anti_masks = _rows_to_masks(anti, self.pool_mask)
        self.blocks = signature.sizes[1:]
        self.n1 = signature.sizes[0]
        self.n2tot = sum(self.blocks)
        self.count = 0
        self.found: list = []

    # -- driver -----------------------------------------------------------
    def run(self, anchors: Optional[Sequence[int]] = None):
        if anchors is None:
            anchors = list(_bits(self.pool_mask))
        for anchor in anchors:
            self._search_anchor(anchor)
            if self._done():
                break
        return self.count, self.found

    def _done(self) -> bool:
        return self.limit is not None and self.count >= self.limit

    def _emit(self, anchor, left, chosen):
        self.count += 1
        if not self.count_only:
            self.found.append(Seed(
                self.a, self.signature, self.candidates, anchor,
                tuple(left), tuple(i for i, _ in chosen), tuple(b for _, b in chosen)))

    # -- per-anchor search --------------------------------------------------
    def _search_anchor(self, anchor: int):
        mid = kernels.middle_table(self.perm, self.quarters, anchor)
        mid_masks = _rows_to_masks(mid, self.pool_mask)
        right_vecs = kernels.anchor_product_vectors(self.perm, self.quarters, anchor)
        dim = 2 * self.n * self.n
        rank = _RankStack(self.a, dim, capacity=dim + 2)
        pushed = rank.push(self.flat[anchor])
        assert pushed
        pushed = rank.push(_identity_vector(self.n))
        if not pushed:
            rank.pop()
            return
        self._phase_left(anchor, mid_masks, right_vecs, rank, [], self.pool_mask)
        rank.pop()
        rank.pop()

    def _phase_left(self, anchor, mid_masks, right_vecs, rank, left, cand_right):
        if len(left) == self.n1 - 1:
            fill = [0] * len(self.blocks)
            fill[0] = 1  # anchor occupies the first right block
            amasks = [~0] * len(self.blocks)
            amasks[0] = self.anti_masks[anchor]
            self._phase_right(anchor, right_vecs, rank, left, cand_right, [], fill, amasks, -1)
            return
        start = left[-1] + 1 if left else 0
        for k in _bits(self.pool_mask >> start << start):
            m2 = cand_right & mid_masks[k]
            if _popcount(m2) < self.n2tot - 1:
                continue
            if not rank.push(self.flat[k]):
                continue
            left.append(k)
            self._phase_left(anchor, mid_masks, right_vecs, rank, left, m2)
            left.pop()
            rank.pop()
            if self._done():
                return

    def _phase_right(self, anchor, right_vecs, rank, left, cand_right,
                     chosen, fill, amasks, last):
        if len(chosen) == self.n2tot - 1:
            self._emit(anchor, left, chosen)
            return
        remaining = self.n2tot - 1 - len(chosen)
        avail = cand_right >> (last + 1) << (last + 1)
        if _popcount(avail) < remaining:
            return
        for l in _bits(avail):
            for b in range(len(self.blocks)):
                if fill[b] >= self.blocks[b]:
                    continue
                if fill[b] == 0 and any(
                        self.blocks[b2] == self.blocks[b] and fill[b2] == 0
                        for b2 in range(b)):
                    continue  # canonical order among equal-size empty blocks
                ok = True
                for b2 in range(len(self.blocks)):
                    if b2 != b and fill[b2] and not (amasks[b2] >> l) & 1:
                        ok = False
                        break
                if not ok:
                    continue
                if not rank.push(right_vecs[l]):
                    continue
                fill[b] += 1
                old = amasks[b]
                amasks[b] = old & self.anti_masks[l] if fill[b] > 1 else self.anti_masks[l]
                chosen.append((l, b))
                self._phase_right(anchor, right_vecs, rank, left, cand_right,
                                  chosen, fill, amasks, l)
                chosen.pop()
                amasks[b] = old
                fill[b] -= 1
                rank.pop()
                if self._done():
                    return
            if self._done():
                return


def _popcount(x: int) -> int:
    return x.bit_count()


def find_seeds(a: int, signature, candidates=None, limit: Optional[int] = None,
               sign_reduction: bool = True, workers: int = 1,
               count_only: bool = False):
    """All seeds for the given signature (exhaustive up to the documented
    canonical reduction when ``limit`` is None), sorted canonically.

    ``sign_reduction=False`` disables the per-member sign canonicalization;
    the unreduced count is exactly 2**(members) times the reduced one, which
    the test suite uses as a pruning-correctness check.  ``count_only``
    returns only the number of seeds.  ``workers`` splits the anchor roots
    across processes (ignored when a ``limit`` makes early exit cheaper);
    merged results are re-sorted, so output never depends on scheduling.
    """
    if not isinstance(signature, GroupSignature):
        signature = GroupSignature(tuple(signature))
    if candidates is None:
        candidates = enumerate_candidates(a)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or limit is not None:
        search = _SeedSearch(a, signature, candidates, sign_reduction, limit, count_only)
        count, found = search.run()
    else:
        search = _SeedSearch(a, signature, candidates, sign_reduction, None, count_only)
        anchors = list(_bits(search.pool_mask))
        chunks = [anchors[i::workers] for i in range(workers)]
        args = [(a, signature.sizes, candidates, sign_reduction, count_only, chunk)
                for chunk in chunks if chunk]
        with multiprocessing.Pool(len(args)) as pool:
            parts = pool.map(_worker_run, args)
        count = sum(p[0] for p in parts)
        found = [seed for p in parts for seed in p[1]]
    if count_only:
        return count
    found.sort(key=Seed.sort_key)
    if limit is not None:
        found = found[:limit]
    return found


def _worker_run(packed):
    a, sizes, candidates, sign_reduction, count_only, anchors = packed
    search = _SeedSearch(a, GroupSignature(sizes), candidates, sign_reduction,
                         None, count_only)
    return search.run(anchors)


def split_right_group(seed: Seed, sub_sizes) -> list:
    """Refine a 2-group seed into multi-group seeds whose right side splits
    into blocks of the given sizes with pairwise cross-block
    anticommutation.  Conditions 1-3 are untouched by the refinement."""
    sub_sizes = tuple(int(s) for s in sub_sizes)
    if len(seed.signature.sizes) != 2:
        raise ValueError("split_right_group expects a 2-group seed")
    if sum(sub_sizes) != seed.signature.sizes[1]:
        raise ValueError(f"sub-group sizes must sum to {seed.signature.sizes[1]}")
    if any(s < 1 for s in sub_sizes):
        raise ValueError("sub-group sizes must be positive")
    members = seed.group2
    anti = {}
    for i in (seed.anchor,) + members:
        mi = seed.candidates[i].matrix
        for k in (seed.anchor,) + members:
            mk = seed.candidates[k].matrix
            anti[(i, k)] = (mi @ mk + mk @ mi).is_zero()
    new_signature = GroupSignature((seed.signature.sizes[0],) + sub_sizes)
    results = []

    def rec(pos, fill, labels, block_members):
        if pos == len(members):
            results.append(Seed(seed.a, new_signature, seed.candidates,
                                seed.anchor, seed.group1, members, tuple(labels)))
            return
        l = members[pos]
        for b in range(len(sub_sizes)):
            if fill[b] >= sub_sizes[b]:
                continue
            if fill[b] == 0 and any(sub_sizes[b2] == sub_sizes[b] and fill[b2] == 0
                                    for b2 in range(b)):
                continue
            if any(not anti[(l, other)]
                   for b2 in range(len(sub_sizes)) if b2 != b
                   for other in block_members[b2]):
                continue
            fill[b] += 1
            block_members[b].append(l)
            labels.append(b)
            rec(pos + 1, fill, labels, block_members)
            labels.pop()
            block_members[b].pop()
            fill[b] -= 1

    fill = [1] + [0] * (len(sub_sizes) - 1)
    if sub_sizes[0] < 1:
        return []
    rec(0, fill, [], [[seed.anchor]] + [[] for _ in sub_sizes[1:]])
    results.sort(key=Seed.sort_key)
    return results


@dataclass(frozen=True)
class StbcCode:
    """Weight matrices of a code, partitioned into decoding groups."""

    a: int
    rows: int
    cols: int
    groups: tuple          # tuple of tuples of ExactMatrix
    provenance: Optional[dict] = None

    @property
    def group_sizes(self) -> tuple:
        return tuple(len(g) for g in self.groups)

    @property
    def rate(self) -> Fraction:
        return Fraction(sum(self.group_sizes), 2 * self.rows)

    @property
    def weights(self) -> list:
        return [m for g in self.groups for m in g]


def reconstruct_weights(seed: Seed, a1: Optional[ExactMatrix] = None) -> StbcCode:
    """Assemble the code's weight matrices from a seed and a choice of the
    first weight matrix (identity by default).

    The first weight matrix must itself belong to the single-thread
    unit-entry class, otherwise the result cannot: right-side weights are
    its products with admissible matrices.  The result is re-verified
    against every code-level invariant before being returned.
    """
    n = 2 ** seed.a
    if a1 is None:
        a1 = ExactMatrix.identity(n)
    if (a1.rows, a1.cols) != (n, n):
        raise VerificationError("first-weight-shape", f"need {n}x{n}")
    if single_thread_profile(a1) is None:
        raise VerificationError("first-weight-class",
                                "the first weight matrix must be single-thread with unit entries")
    anchor = seed.anchor_candidate.matrix
    b_first = anchor.conj_transpose() @ a1
    group_one = [a1] + [c.matrix @ b_first for c in seed.group1_candidates]
    right_blocks = [[] for _ in seed.signature.sizes[1:]]
    right_blocks[0].append(b_first)
    for idx, label in zip(seed.group2, seed.block_labels):
        right_blocks[label].append(seed.candidates[idx].matrix.conj_transpose() @ a1)
    code = StbcCode(seed.a, n, n, tuple([tuple(group_one)] + [tuple(b) for b in right_blocks]),
                    provenance={"kind": "reconstructed",
                                "anchor_index": seed.anchor,
                                "group1_indices": list(seed.group1),
                                "group2_indices": list(seed.group2),
                                "block_labels": list(seed.block_labels)})
    from .codecheck import verify_code
    verify_code(code)
    return code


def remove_columns(code: StbcCode, keep: Sequence[int]) -> StbcCode:
    """Restrict every weight matrix to the kept columns (0-based).

    The cross-group condition survives any column selection exactly;
    real-linear independence does not and is re-verified, failing with a
    verification error if the rank drops.
    """
    keep = list(keep)
    if not keep:
        raise VerificationError("column-selection", "must keep at least one column")
    if len(set(keep)) != len(keep):
        raise VerificationError("column-selection", "duplicate column index")
    groups = tuple(tuple(m.select_columns(keep) for m in g) for g in code.groups)
    new = StbcCode(code.a, code.rows, len(keep), groups,
                   provenance={"kind": "column-removal", "kept_columns": keep,
                               "parent": code.provenance})
    from .codecheck import check_cross_group, check_independence
    result = check_cross_group(new)
    assert result.ok, "column selection cannot break the cross-group condition"
    if not check_independence(new):
        raise VerificationError("real-linear-independence",
                                "column removal made the weight matrices dependent")
    return new


@dataclass(frozen=True)
class MaxRateResult:
    """Outcome of a maximum-rate search."""

    a: int
    groups: int
    symmetric: bool
    max_rate: Fraction
    best_signatures: tuple      # all signatures attaining the maximum
    witnesses: dict             # signature -> StbcCode
    empty_level: tuple          # the signatures proven empty just above


def max_rate_search(a: int, groups: int, symmetric: bool,
                    min_group_size: int = 2, workers: int = 1,
                    candidates=None) -> MaxRateResult:
    """Largest achievable total group size for the given group count.

    Signature totals are walked upward: removing a member of a valid seed
    leaves a valid seed, so achievable totals are downward-closed and the
    first total whose signatures are all empty bounds everything above it.
    One witness per maximal signature is reconstructed (first weight =
    identity).

    ``min_group_size`` defaults to 2 (at least one complex symbol per
    group), the convention under which the published maximum rates hold;
    singleton real-symbol groups admit strictly higher-rate multi-group
    codes and can be explored by passing 1.
    """
    if groups < 2:
        raise ValueError("need at least two groups")
    if candidates is None:
        candidates = enumerate_candidates(a)
    n = 2 ** a
    hard_cap = 2 * n * n  # condition 3 bounds the member count by the real dimension
    best_total = None
    best = {}
    total = groups * min_group_size
    empty_level: tuple = ()
    while total <= hard_cap + 1:
        sigs = list(_level_signatures(total, groups, symmetric, min_group_size))
        if not sigs:
            total += 1  # no signature has this total (e.g. odd totals, symmetric)
            continue
        level_hits = []
        for sig in sigs:
            found = find_seeds(a, sig, candidates=candidates, limit=1, workers=workers)
            if found:
                level_hits.append((sig, found[0]))
        if not level_hits:
            empty_level = tuple(sigs)
            break
        best_total = total
        best = {sig: seed for sig, seed in level_hits}
        total += 1
    if best_total is None:
        raise VerificationError("max-rate", "no seed exists at the minimal signature level")
    witnesses = {sig: reconstruct_weights(seed) for sig, seed in best.items()}
    return MaxRateResult(a, groups, symmetric, Fraction(best_total, 2 * n),
                         tuple(best.keys()), witnesses, empty_level)


def _level_signatures(total: int, groups: int, symmetric: bool, min_size: int):
    """Canonical signatures with the given total: first group smallest,
    remaining sizes ascending.  Any code admits a seed in this designation
    (group labels are interchangeable), so searching it is exhaustive."""
    if symmetric:
        if total % groups == 0 and total // groups >= min_size:
            yield GroupSignature((total // groups,) * groups)
        return
    for parts in _partitions(total, groups, min_size):
        yield GroupSignature(parts)


def _partitions(total: int, parts: int, minimum: int):
    """Non-decreasing integer partitions of ``total`` into ``parts`` parts."""
    if parts == 1:
        if total >= minimum:
            yield (total,)
        return
    for first in range(minimum, total // parts + 1):
        for rest in _partitions(total - first, parts - 1, first):
            yield (first,) + rest
