"""Exact complex-rational scalars and small dense matrices.

Every algebraic predicate used by the construction and search layers
(unitarity, anti-hermitianity, squaring to -I, real-linear rank) is decided
here with exact rational arithmetic.  There is no floating-point mode: one
rounding error would silently invalidate a search branch, so none is offered.

Matrices are immutable and hashable; equality is entrywise structural
equality, which is sound because fractions are kept in lowest terms with
positive denominators.

Serialization grammar (used across the whole package for JSON artifacts):
a matrix is an array of rows, each entry a string of the form ``p[/q]``,
``[-]r[/s]j`` or ``p[/q]{+|-}r[/s]j`` with decimal integers, for example
``"1"``, ``"-j"``, ``"1/2"``, ``"1/2-1/2j"``.  Parsing and emission
round-trip exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

__all__ = [
    "ShapeError",
    "GaussianRational",
    "ExactMatrix",
    "parse_scalar",
    "format_scalar",
    "matrix_from_strings",
    "matrix_to_strings",
    "rank_over_reals",
    "det",
]

RationalLike = Union[int, Fraction]
ScalarLike = Union[int, Fraction, "GaussianRational", complex, str]


class ShapeError(ValueError):
    """Raised when matrix dimensions do not admit the requested operation."""


@dataclass(frozen=True, slots=True)
class GaussianRational:
    """A complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    @staticmethod
    def of(value: ScalarLike) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)):
            return GaussianRational(value)
        if isinstance(value, complex):
            re, im = value.real, value.imag
            if re != int(re) or im != int(im):
                raise ValueError(f"non-integral complex literal {value!r}; use Fractions")
            return GaussianRational(int(re), int(im))
        if isinstance(value, str):
            return parse_scalar(value)
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    def __add__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    def __sub__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __mul__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    def __truediv__(self, other: ScalarLike) -> "GaussianRational":
        o = GaussianRational.of(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
J = GaussianRational(0, 1)

#: j^0, j^1, j^2, j^3 -- the four unit phases used by single-thread matrices.
UNIT_PHASES = (ONE, J, GaussianRational(-1), GaussianRational(0, -1))


_FRACTION_RE = re.compile(r"[+-]?\d+(?:/\d+)?")


def _grammar_fraction(term: str) -> Fraction:
    if not _FRACTION_RE.fullmatch(term):
        raise ValueError(f"not an integer fraction: {term!r}")
    return Fraction(term)


def parse_scalar(text: str) -> GaussianRational:
    """Parse ``p[/q]``, ``[+-][r[/s]]j`` or ``p[/q]{+|-}[r[/s]]j`` exactly."""
    s = text.strip()
    if not s:
        raise ValueError("empty scalar string")
    try:
        if not s.endswith("j"):
            return GaussianRational(_grammar_fraction(s))
        body = s[:-1]
        # rightmost top-level sign separates the real and imaginary terms
        for i in range(len(body) - 1, 0, -1):
            if body[i] in "+-" and body[i - 1] not in "+-/":
                return GaussianRational(_grammar_fraction(body[:i]),
                                        _imag_coeff(body[i:]))
        return GaussianRational(0, _imag_coeff(body))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed scalar {text!r}") from exc


def _imag_coeff(term: str) -> Fraction:
    if term in ("", "+"):
        return Fraction(1)
    if term == "-":
        return Fraction(-1)
    return _grammar_fraction(term)


def format_scalar(value: GaussianRational) -> str:
    """Canonical emission; ``parse_scalar`` inverts it exactly."""
    re, im = value.re, value.im
    if im == 0:
        return str(re)
    if re == 0:
        if im == 1:
            return "j"
        if im == -1:
            return "-j"
        return f"{im}j"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)}j"


class ExactMatrix:
    """Immutable dense matrix of GaussianRational entries (row-major)."""

    __slots__ = ("rows", "cols", "entries", "_hash")

    def __init__(self, rows: int, cols: int, entries: Iterable[ScalarLike]):
        ent = tuple(GaussianRational.of(e) for e in entries)
        if rows * cols != len(ent):
            raise ShapeError(f"{rows}x{cols} matrix needs {rows * cols} entries, got {len(ent)}")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # immutability guard
        raise AttributeError("ExactMatrix is immutable")

    def __reduce__(self):
        return (ExactMatrix, (self.rows, self.cols, self.entries))

    # -- construction -----------------------------------------------------
    @staticmethod
    def from_rows(rows: Sequence[Sequence[ScalarLike]]) -> "ExactMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        if any(len(row) != c for row in rows):
            raise ShapeError("ragged rows")
        return ExactMatrix(r, c, [e for row in rows for e in row])

    @staticmethod
    def identity(n: int) -> "ExactMatrix":
        return ExactMatrix(n, n, [ONE if i == k else ZERO for i in range(n) for k in range(n)])

    @staticmethod
    def zeros(rows: int, cols: int) -> "ExactMatrix":
        return ExactMatrix(rows, cols, [ZERO] * (rows * cols))

    # -- access -----------------------------------------------------------
    def entry(self, i: int, k: int) -> GaussianRational:
        return self.entries[i * self.cols + k]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def _require_square(self, op: str) -> None:
        if not self.is_square:
            raise ShapeError(f"{op} requires a square matrix, got {self.rows}x{self.cols}")

    # -- algebra ----------------------------------------------------------
    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for k in range(other.cols):
                acc = ZERO
                for t in range(self.cols):
                    e = ri[t]
                    if e:
                        acc = acc + e * other.entries[t * other.cols + k]
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, out)

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in addition")
        return ExactMatrix(self.rows, self.cols,
                           [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in subtraction")
        return ExactMatrix(self.rows, self.cols,
                           [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-e for e in self.entries])

    def scale(self, scalar: ScalarLike) -> "ExactMatrix":
        s = GaussianRational.of(scalar)
        return ExactMatrix(self.rows, self.cols, [s * e for e in self.entries])

    def conj_transpose(self) -> "ExactMatrix":
        out = [self.entry(i, k).conj() for k in range(self.cols) for i in range(self.rows)]
        return ExactMatrix(self.cols, self.rows, out)

    def transpose(self) -> "ExactMatrix":
        out = [self.entry(i, k) for k in range(self.cols) for i in range(self.rows)]
        return ExactMatrix(self.cols, self.rows, out)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        rr, cc = self.rows * other.rows, self.cols * other.cols
        out = []
        for i in range(rr):
            for k in range(cc):
                out.append(self.entry(i // other.rows, k // other.cols)
                           * other.entry(i % other.rows, k % other.cols))
        return ExactMatrix(rr, cc, out)

    def trace(self) -> GaussianRational:
        self._require_square("trace")
        acc = ZERO
        for i in range(self.rows):
            acc = acc + self.entry(i, i)
        return acc

    def select_columns(self, keep: Sequence[int]) -> "ExactMatrix":
        if not keep:
            raise ShapeError("must keep at least one column")
        if any(k < 0 or k >= self.cols for k in keep):
            raise ShapeError(f"column index out of range for {self.rows}x{self.cols}")
        out = [self.entry(i, k) for i in range(self.rows) for k in keep]
        return ExactMatrix(self.rows, len(keep), out)

    # -- predicates (all exact) --------------------------------------------
    def is_zero(self) -> bool:
        return all(e.is_zero for e in self.entries)

    def is_identity(self) -> bool:
        return self.is_square and self == ExactMatrix.identity(self.rows)

    def is_unitary(self) -> bool:
        self._require_square("is_unitary")
        return (self.conj_transpose() @ self) == ExactMatrix.identity(self.rows)

    def is_anti_hermitian(self) -> bool:
        self._require_square("is_anti_hermitian")
        return self.conj_transpose() == -self

    def squares_to_minus_identity(self) -> bool:
        self._require_square("squares_to_minus_identity")
        return (self @ self) == ExactMatrix.identity(self.rows).scale(-1)

    # -- protocol ----------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.rows, self.cols, self.entries))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"ExactMatrix({self.rows}x{self.cols}, {matrix_to_strings(self)})"


def matrix_from_strings(rows: Sequence[Sequence[str]]) -> ExactMatrix:
    return ExactMatrix.from_rows([[parse_scalar(e) for e in row] for row in rows])


def matrix_to_strings(matrix: ExactMatrix) -> list:
    return [[format_scalar(matrix.entry(i, k)) for k in range(matrix.cols)]
            for i in range(matrix.rows)]


def real_flatten(matrix: ExactMatrix) -> list:
    """Flatten to a real vector: row-major real parts, then row-major
    imaginary parts.  This fixed order makes rank results reproducible."""
    return ([e.re for e in matrix.entries] + [e.im for e in matrix.entries])


def _integer_rows(vectors: list) -> list:
    """Scale each rational vector to integers (scaling preserves rank)."""
    out = []
    for vec in vectors:
        denom_lcm = 1
        for x in vec:
            denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
        out.append([int(x * denom_lcm) for x in vec])
    return out


def rank_over_reals(matrices: Sequence[ExactMatrix]) -> int:
    """Rank of the set over the reals, each matrix flattened by
    ``real_flatten``.  Fraction-free integer elimination, exact."""
    if not matrices:
        return 0
    shape = (matrices[0].rows, matrices[0].cols)
    if any((m.rows, m.cols) != shape for m in matrices):
        raise ShapeError("rank_over_reals requires matrices of equal shape")
    rows = _integer_rows([real_flatten(m) for m in matrices])
    return integer_row_rank(rows)


def integer_row_rank(rows: list) -> int:
    """Rank of integer row vectors by fraction-free elimination with gcd
    normalization (arbitrary-precision, no overflow)."""
    basis: list = []
    pivots: list = []
    for row in rows:
        red = reduce_against_basis(row, basis, pivots)
        if red is not None:
            basis.append(red)
            pivots.append(next(i for i, x in enumerate(red) if x))
    return len(basis)


def reduce_against_basis(row: list, basis: list, pivots: list):
    """Eliminate ``row`` against an integer row basis; return the reduced,
    gcd-normalized row or None if dependent."""
    v = list(row)
    for b, p in zip(basis, pivots):
        if v[p]:
            bp, vp = b[p], v[p]
            v = [x * bp - y * vp for x, y in zip(v, b)]
    g = 0
    for x in v:
        g = gcd(g, x)
        if g == 1:
            break
    if g == 0:
        return None
    if g > 1:
        v = [x // g for x in v]
    return v


def det(matrix: ExactMatrix) -> GaussianRational:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    matrix._require_square("det")
    n = matrix.rows
    if n == 0:
        return ONE
    a = [[matrix.entry(i, k) for k in range(n)] for i in range(n)]
    sign = 1
    prev = ONE
    for col in range(n - 1):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return ZERO
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        for r in range(col + 1, n):
            for c in range(col + 1, n):
                a[r][c] = (a[r][c] * a[col][col] - a[r][col] * a[col][c]) / prev
        prev = a[col][col]
    result = a[n - 1][n - 1]
    return result if sign == 1 else -result
