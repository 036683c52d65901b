"""Exact dense linear algebra over the rationals.

Matrices hold ``fractions.Fraction`` (or plain ``int``) entries; every
operation is exact. Row reduction is delegated to an integer Gauss-Jordan
kernel: the compiled extension ``tpa._rref`` when it was built, otherwise the
pure-Python twin ``tpa._rref_py``. Set ``TPA_PURE_PYTHON=1`` to force the
fallback (used by the kernel benchmark and the cross-backend tests).
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Iterable, NamedTuple, Sequence

if os.environ.get("TPA_PURE_PYTHON") == "1":
    from ._rref_py import rref_int

    KERNEL = "python"
else:
    try:
        from ._rref import rref_int

        KERNEL = "compiled"
    except ImportError:
        from ._rref_py import rref_int

        KERNEL = "python"

Rational = Fraction  # the scalar field is Q; plain ints are accepted everywhere


def parse_rational(s: str) -> Fraction:
    """Parse a rational from its "p/q" (or "p") string form."""
    return Fraction(str(s))


def format_rational(x) -> str:
    """Serialize a rational as "p/q" ("p" when the denominator is 1)."""
    return str(Fraction(x))


def is_zero_vector(v: Sequence) -> bool:
    return all(x == 0 for x in v)


class RrefResult(NamedTuple):
    reduced: "Matrix"
    pivot_cols: tuple[int, ...]
    rank: int


class Matrix:
    """Immutable dense matrix of exact rationals."""

    __slots__ = ("nrows", "ncols", "rows", "_rref")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = [list(r) for r in rows]
        if data:
            width = len(data[0])
            if any(len(r) != width for r in data):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols does not match row width")
            ncols = width
        elif ncols is None:
            ncols = 0
        self.rows = data
        self.nrows = len(data)
        self.ncols = ncols
        self._rref = None

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence]) -> "Matrix":
        cols = [list(c) for c in cols]
        if not cols:
            return cls([], ncols=0)
        n = len(cols[0])
        if any(len(c) != n for c in cols):
            raise ValueError("ragged columns")
        return cls([[c[i] for c in cols] for i in range(n)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def entry(self, i: int, j: int):
        return self.rows[i][j]

    def row(self, i: int) -> list:
        return list(self.rows[i])

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.ncols)]

    def transpose(self) -> "Matrix":
        return Matrix([[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)],
                      ncols=self.nrows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.nrows, self.ncols,
                     tuple(tuple(Fraction(x) for x in r) for r in self.rows)))

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols})"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
                      ncols=self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return Matrix([[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
                      ncols=self.ncols)

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.rows], ncols=self.ncols)

    def scale(self, s) -> "Matrix":
        return Matrix([[s * x for x in r] for r in self.rows], ncols=self.ncols)

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = [[0] * other.ncols for _ in range(self.nrows)]
        for i, row in enumerate(self.rows):
            for k, a in enumerate(row):
                if a:
                    orow = other.rows[k]
                    trow = out[i]
                    for j in range(other.ncols):
                        b = orow[j]
                        if b:
                            trow[j] += a * b
        return Matrix(out, ncols=other.ncols)

    def apply(self, v: Sequence) -> list:
        """Matrix-vector product."""
        if len(v) != self.ncols:
            raise ValueError("dimension mismatch")
        out = [0] * self.nrows
        for j, x in enumerate(v):
            if x:
                for i in range(self.nrows):
                    a = self.rows[i][j]
                    if a:
                        out[i] += a * x
        return out

    def _integer_rows(self) -> list[list[int]]:
        out = []
        for row in self.rows:
            den = 1
            for x in row:
                d = x.denominator
                if d != 1:
                    den = lcm(den, d)
            if den == 1:
                out.append([int(x) for x in row])
            else:
                out.append([int(x * den) for x in row])
        return out

    def rref(self) -> RrefResult:
        """Reduced row echelon form; cached, canonical (RREF over Q is unique)."""
        if self._rref is None:
            reduced, pivots = rref_int(self._integer_rows(), self.ncols)
            rows = []
            for r, irow in enumerate(reduced):
                if r < len(pivots):
                    p = irow[pivots[r]]
                    rows.append(irow if p == 1 else [Fraction(v, p) for v in irow])
                else:
                    rows.append(irow)
            self._rref = RrefResult(Matrix(rows, ncols=self.ncols), tuple(pivots), len(pivots))
        return self._rref

    def rank(self) -> int:
        return self.rref().rank

    def nullspace(self) -> list[list]:
        """Deterministic kernel basis: identity pattern on the free columns."""
        reduced, pivots, rank = self.rref()
        free = [c for c in range(self.ncols) if c not in set(pivots)]
        basis = []
        for f in free:
            v = [0] * self.ncols
            v[f] = 1
            for r, pc in enumerate(pivots):
                x = reduced.rows[r][f]
                if x:
                    v[pc] = -x
            basis.append(v)
        return basis

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        m = self._integer_rows()
        # track the row scalings introduced by denominator clearing
        scale = Fraction(1)
        for orig, cleared in zip(self.rows, m):
            for a, b in zip(orig, cleared):
                if a != 0:
                    scale *= Fraction(b, 1) / Fraction(a)
                    break
            else:
                return Fraction(0)
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return Fraction(sign * m[n - 1][n - 1]) / scale

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        n = self.nrows
        aug = Matrix([list(r) + [1 if i == j else 0 for j in range(n)]
                      for i, r in enumerate(self.rows)], ncols=2 * n)
        reduced, pivots, rank = aug.rref()
        if rank < n or any(p >= n for p in pivots):
            raise ValueError("matrix is singular")
        return Matrix([r[n:] for r in reduced.rows[:n]], ncols=n)


def stack(vectors: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Matrix whose rows are the given vectors; ncols disambiguates the empty case."""
    vectors = [list(v) for v in vectors]
    if not vectors and ncols is None:
        raise ValueError("ncols required for an empty vector list")
    return Matrix(vectors, ncols=ncols if not vectors else len(vectors[0]))


def span_rank(vectors: Sequence[Sequence], ncols: int | None = None) -> int:
    return stack(vectors, ncols).rank()


def row_space_basis(vectors: Sequence[Sequence], ncols: int | None = None) -> list[list]:
    """Canonical basis of the span: the nonzero rows of the RREF."""
    reduced, pivots, rank = stack(vectors, ncols).rref()
    return [reduced.row(i) for i in range(rank)]


def span_equal(b1: Sequence[Sequence], b2: Sequence[Sequence], ncols: int | None = None) -> bool:
    """Whether two families of vectors span the same subspace."""
    b1 = [list(v) for v in b1]
    b2 = [list(v) for v in b2]
    lengths = {len(v) for v in b1} | {len(v) for v in b2}
    if ncols is not None:
        lengths.add(ncols)
    if len(lengths) > 1:
        raise ValueError("dimension mismatch between spanning vectors")
    if not lengths:
        return True
    n = lengths.pop()
    r1 = span_rank(b1, n)
    r2 = span_rank(b2, n)
    return r1 == r2 == span_rank(b1 + b2, n)


def span_contains(basis: Sequence[Sequence], v: Sequence, ncols: int | None = None) -> bool:
    """Whether v lies in the span of the given vectors."""
    n = ncols if ncols is not None else len(v)
    if len(v) != n or any(len(b) != n for b in basis):
        raise ValueError("dimension mismatch")
    if is_zero_vector(v):
        return True
    r = span_rank(basis, n)
    return span_rank(list(basis) + [list(v)], n) == r
