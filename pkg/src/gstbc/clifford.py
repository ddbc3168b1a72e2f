"""Unitary anticommuting generator families and the anti-hermitian matrix basis.

For ``n = 2**a`` transmit antennas there are exactly ``2a+1`` unitary matrix
representations of pairwise-anticommuting generators that square to ``-I``.
They are assembled from Kronecker products of three 2x2 blocks.  Products of
the first ``2a`` generators over index subsets, phased so that every element
is anti-hermitian, yield a basis of the full ``n x n`` complex matrix algebra;
that basis is what the admissible-matrix enumeration and the code search are
built on.

Every basis element has a single "thread": exactly one nonzero unit entry per
row and column, with position pattern ``column = row XOR s`` for a fixed
shift ``s``.  The ``2**a`` shift permutations partition the basis evenly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Optional

from .exact import ExactMatrix, GaussianRational, UNIT_PHASES

__all__ = [
    "SIGMA1",
    "SIGMA2",
    "SIGMA3",
    "generators",
    "phase_power",
    "BasisElement",
    "CliffordBasis",
    "basis",
    "thread_permutations",
    "ThreadDecomposition",
    "thread_decompose",
]

SIGMA1 = ExactMatrix.from_rows([[0, 1], [-1, 0]])
SIGMA2 = ExactMatrix.from_rows([[0, "j"], ["j", 0]])
SIGMA3 = ExactMatrix.from_rows([[1, 0], [0, -1]])


def _kron_chain(blocks) -> ExactMatrix:
    out = ExactMatrix.identity(1)
    for b in blocks:
        out = out.kron(b)
    return out


@lru_cache(maxsize=None)
def generators(a: int, sign_gamma1: int = 1) -> tuple:
    """The ordered family R_1 .. R_{2a+1} of n x n matrices, n = 2**a.

    R_1 = sign * j * SIGMA3^(x a); for k = 1..a,
    R_{2k}   = I_{2^(a-k)} (x) SIGMA1 (x) SIGMA3^(x (k-1)),
    R_{2k+1} = I_{2^(a-k)} (x) SIGMA2 (x) SIGMA3^(x (k-1)).
    """
    if a < 1:
        raise ValueError("antenna exponent a must be >= 1")
    if sign_gamma1 not in (1, -1):
        raise ValueError("sign_gamma1 must be +1 or -1")
    gens = [_kron_chain([SIGMA3] * a).scale(GaussianRational(0, sign_gamma1))]
    for k in range(1, a + 1):
        prefix = [ExactMatrix.identity(2 ** (a - k))]
        tail = [SIGMA3] * (k - 1)
        gens.append(_kron_chain(prefix + [SIGMA1] + tail))
        gens.append(_kron_chain(prefix + [SIGMA2] + tail))
    return tuple(gens)


def phase_power(m: int) -> int:
    """Power of j applied to a generator product of m factors so the result
    is anti-hermitian: ((m mod 4) - 1)((m mod 4) - 2)/2, reduced mod 4.

    The modulo is applied before the arithmetic; that is what makes the
    phase for m = 4 equal +j rather than -j.
    """
    if m < 0:
        raise ValueError("m must be >= 0")
    m4 = m % 4
    return ((m4 - 1) * (m4 - 2) // 2) % 4


@dataclass(frozen=True)
class BasisElement:
    """One basis element: j^phase_power * R_{k_1} ... R_{k_m}."""

    index: int                 # 1-based position within the basis
    gen_subset: tuple          # sorted generator indices, () for the scaled identity
    phase_power: int           # power of j applied
    matrix: ExactMatrix


class CliffordBasis:
    """The ordered anti-hermitian basis of the n x n matrices, n = 2**a.

    Order: scaled identity, single generators R_1..R_{2a}, then products by
    ascending subset size, lexicographic within each size.
    """

    def __init__(self, a: int, elements: tuple):
        self.a = a
        self.n = 2 ** a
        self.elements = elements
        self._by_matrix = {el.matrix: el.index for el in elements}

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def element(self, index: int) -> BasisElement:
        """1-based access matching the published numbering."""
        return self.elements[index - 1]

    def matrix(self, index: int) -> ExactMatrix:
        return self.elements[index - 1].matrix

    @property
    def matrices(self) -> list:
        return [el.matrix for el in self.elements]

    def product(self, k: int, l: int) -> tuple:
        """Resolve alpha_k @ alpha_l as (scalar, m) with scalar in
        {1,-1,j,-j} and m >= 2, by exact comparison against the basis.

        The two operands must differ: the product of an element with itself
        is -I, which is not a scalar multiple of any basis element.
        """
        if k == l:
            raise ValueError("product of a basis element with itself is -I, not a basis multiple")
        prod = self.matrix(k) @ self.matrix(l)
        # the product lives on the XOR-composed thread; only same-thread
        # elements can match, and only up to a unit phase
        shift = _thread_shift(prod)
        for el in self.elements:
            if _thread_shift(el.matrix) != shift:
                continue
            ratio = _unit_ratio(prod, el.matrix)
            if ratio is not None:
                return ratio, el.index
        raise AssertionError("basis product closure violated")  # unreachable

    def commutes(self, k: int, l: int) -> bool:
        """Whether alpha_k and alpha_l commute, decided combinatorially from
        the generator subsets (production path; the matrix-level check is
        kept in the test suite as an oracle)."""
        sk = self.element(k).gen_subset
        sl = self.element(l).gen_subset
        swaps = len(sk) * len(sl) - len(set(sk) & set(sl))
        return swaps % 2 == 0


def _thread_shift(matrix: ExactMatrix) -> Optional[int]:
    shift = None
    for r in range(matrix.rows):
        for c in range(matrix.cols):
            if matrix.entry(r, c):
                s = r ^ c
                if shift is None:
                    shift = s
                elif shift != s:
                    return None
    return shift


def _unit_ratio(p: ExactMatrix, q: ExactMatrix) -> Optional[GaussianRational]:
    """If p == phase * q for a unit phase, return it."""
    for phase in UNIT_PHASES:
        if q.scale(phase) == p:
            return phase
    return None


@lru_cache(maxsize=None)
def basis(a: int, sign_gamma1: int = 1) -> CliffordBasis:
    """Build the 2**(2a)-element basis for n = 2**a.

    Either generator sign yields a family with identical properties; the
    default is the one whose a = 2 layout matches the published numbering.
    """
    if a < 1:
        raise ValueError("antenna exponent a must be >= 1")
    gens = generators(a, sign_gamma1)[: 2 * a]
    n = 2 ** a
    elements = []
    ident = ExactMatrix.identity(n).scale(GaussianRational(0, 1))
    elements.append(BasisElement(1, (), phase_power(0), ident))
    idx = 2
    for size in range(1, 2 * a + 1):
        for subset in combinations(range(1, 2 * a + 1), size):
            mat = gens[subset[0] - 1]
            for k in subset[1:]:
                mat = mat @ gens[k - 1]
            d = phase_power(size)
            if d:
                mat = mat.scale(UNIT_PHASES[d])
            elements.append(BasisElement(idx, subset, d, mat))
            idx += 1
    return CliffordBasis(a, tuple(elements))


@lru_cache(maxsize=None)
def thread_permutations(a: int) -> tuple:
    """The 2**a disjoint symmetric permutation matrices T_1..T_{2^a} whose
    supports partition all matrix positions; T_i maps row r to column
    r XOR (i-1).  T_1 = I, each T_i is an involution, and the family is
    closed under products."""
    if a < 1:
        raise ValueError("antenna exponent a must be >= 1")
    n = 2 ** a
    mats = []
    for s in range(n):
        mats.append(ExactMatrix(n, n, [1 if c == r ^ s else 0
                                       for r in range(n) for c in range(n)]))
    return tuple(mats)


@dataclass(frozen=True)
class ThreadDecomposition:
    """A basis element written as T_i @ D with D diagonal and unit entries."""

    thread_index: int          # 1-based index into thread_permutations(a)
    diagonal: ExactMatrix


def thread_decompose(b: CliffordBasis, k: int) -> ThreadDecomposition:
    """Split basis element k as T_i @ D; unique because the element has one
    unit entry per row at column row XOR (i-1)."""
    mat = b.matrix(k)
    shift = _thread_shift(mat)
    if shift is None:
        raise AssertionError("basis element does not occupy a single thread")
    n = b.n
    diag = ExactMatrix(n, n, [mat.entry(c ^ shift, c) if r == c else 0
                              for r in range(n) for c in range(n)])
    return ThreadDecomposition(shift + 1, diag)
