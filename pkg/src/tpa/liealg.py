"""Finite-dimensional Lie algebras presented by structure constants.

Builders for the upper triangular algebra T_n, the full matrix algebra M_n
and its traceless subalgebra sl_n, plus the subspace computations (center,
derived subalgebra) used throughout. Basis conventions are frozen here and
everything downstream depends on them:

* T_n basis: matrix units e(i,j), i <= j, ordered (1,1),(1,2),...,(1,n),
  (2,2),...,(n,n).
* M_n basis: all units e(i,j) in row-major order.
* sl_n basis: off-diagonal units e(i,j) (i != j, row-major), followed by
  e(1,1)-e(i,i) for i = 2..n.

Matrix-unit coordinates (i,j) are 1-based as in the usual e_{ij} notation;
basis indices (and all JSON indices) are 0-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .linalg import (
    Matrix,
    format_rational,
    is_zero_vector,
    parse_rational,
    row_space_basis,
    span_contains,
    span_rank,
    stack,
)


@dataclass(frozen=True)
class BasisLabel:
    """Tag for a basis element: a matrix unit e(i,j) or a named abstract element."""

    kind: str  # "unit" | "abstract"
    i: int = 0
    j: int = 0
    name: str = ""

    @classmethod
    def unit(cls, i: int, j: int) -> "BasisLabel":
        return cls("unit", i=i, j=j)

    @classmethod
    def abstract(cls, name: str) -> "BasisLabel":
        return cls("abstract", name=name)

    def __str__(self) -> str:
        return f"e({self.i},{self.j})" if self.kind == "unit" else self.name


_UNIT_RE = re.compile(r"^e\((\d+),(\d+)\)$")


def label_from_string(s: str) -> BasisLabel:
    m = _UNIT_RE.match(s)
    if m:
        return BasisLabel.unit(int(m.group(1)), int(m.group(2)))
    return BasisLabel.abstract(s)


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^ambient_dim held by its canonical (RREF) basis."""

    ambient_dim: int
    basis: tuple[tuple, ...]

    @classmethod
    def from_spanning(cls, vectors: Sequence[Sequence], ambient_dim: int) -> "Subspace":
        rows = row_space_basis(vectors, ambient_dim)
        return cls(ambient_dim, tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: Sequence) -> bool:
        return self.coordinates(v) is not None

    def coordinates(self, v: Sequence) -> Optional[list]:
        """Coefficients of v in the canonical basis, or None if v is outside."""
        if len(v) != self.ambient_dim:
            raise ValueError("dimension mismatch")
        residue = list(v)
        coeffs = []
        for row in self.basis:
            pc = next(j for j, x in enumerate(row) if x != 0)  # pivot entry is 1
            t = residue[pc]
            coeffs.append(t)
            if t:
                for j, x in enumerate(row):
                    if x:
                        residue[j] -= t * x
        if not is_zero_vector(residue):
            return None
        return coeffs


@dataclass(frozen=True)
class JacobiReport:
    ok: bool
    triple: Optional[tuple[int, int, int]] = None


class LieAlgebra:
    """Lie algebra on Q^dim with bracket [e_i, e_j] = sum_k c[i][j][k] e_k.

    Instances are immutable after construction and hashable by identity; the
    builders below are cached, so repeated lookups share one object (and its
    cached center / derived subalgebra / derivation spaces).
    """

    def __init__(self, labels: Sequence[BasisLabel], c, name: str = "custom"):
        self.dim = len(labels)
        self.labels = tuple(labels)
        self.name = name
        self.c = tuple(tuple(tuple(row) for row in plane) for plane in c)
        if len(self.c) != self.dim or any(
            len(p) != self.dim or any(len(r) != self.dim for r in p) for p in self.c
        ):
            raise ValueError("structure tensor shape mismatch")
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if self.c[i][j][k] != -self.c[j][i][k]:
                        raise ValueError(f"structure constants not antisymmetric at {(i, j, k)}")
        self.index_of = {lab: idx for idx, lab in enumerate(self.labels)}
        self.unit_index = {
            (lab.i, lab.j): idx for idx, lab in enumerate(self.labels) if lab.kind == "unit"
        }
        # sparse views of the tensor, precomputed once
        self._pairs = [
            [[(k, x) for k, x in enumerate(self.c[i][j]) if x] for j in range(self.dim)]
            for i in range(self.dim)
        ]
        self._center: Optional[Subspace] = None
        self._derived: Optional[Subspace] = None

    # matrix size when the labels are matrix units e(i,j)
    @property
    def n(self) -> Optional[int]:
        if not self.unit_index:
            return None
        return max(max(i, j) for i, j in self.unit_index)

    @property
    def delta(self) -> Optional[list]:
        """Coordinates of the identity matrix, when all diagonal units are present."""
        n = self.n
        if n is None or any((i, i) not in self.unit_index for i in range(1, n + 1)):
            return None
        v = [0] * self.dim
        for i in range(1, n + 1):
            v[self.unit_index[(i, i)]] = 1
        return v

    def basis_vector(self, idx: int) -> list:
        v = [0] * self.dim
        v[idx] = 1
        return v

    def unit_vector(self, i: int, j: int) -> list:
        return self.basis_vector(self.unit_index[(i, j)])

    def bracket_basis(self, i: int, j: int) -> list:
        return list(self.c[i][j])

    def bracket(self, x: Sequence, y: Sequence) -> list:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = [0] * self.dim
        for i, a in enumerate(x):
            if a:
                pi = self._pairs[i]
                for j, b in enumerate(y):
                    if b:
                        ab = a * b
                        for k, coeff in pi[j]:
                            out[k] += ab * coeff
        return out

    def ad(self, x: Sequence) -> Matrix:
        """Matrix of [x, -] in the frozen basis (column j = [x, e_j])."""
        return Matrix.from_columns([self.bracket(x, self.basis_vector(j)) for j in range(self.dim)])

    def center(self) -> Subspace:
        """Nullspace of the stacked ad-action: all v with [v, e_j] = 0."""
        if self._center is None:
            rows = []
            for j in range(self.dim):
                for k in range(self.dim):
                    rows.append([self.c[i][j][k] for i in range(self.dim)])
            kernel = stack(rows, self.dim).nullspace()
            self._center = Subspace.from_spanning(kernel, self.dim)
        return self._center

    def derived_subalgebra(self) -> Subspace:
        """Span of all brackets of basis pairs."""
        if self._derived is None:
            vectors = [self.bracket_basis(i, j) for i in range(self.dim) for j in range(i + 1, self.dim)]
            self._derived = Subspace.from_spanning(vectors, self.dim)
        return self._derived

    def is_subalgebra(self, s: Subspace) -> bool:
        basis = [list(b) for b in s.basis]
        for a in basis:
            for b in basis:
                if not span_contains(basis, self.bracket(a, b), self.dim):
                    return False
        return True

    def center_of_subalgebra(self, s: Subspace) -> Subspace:
        """Elements of s commuting with all of s; s must be closed under the bracket."""
        if s.ambient_dim != self.dim:
            raise ValueError("dimension mismatch")
        if not self.is_subalgebra(s):
            raise ValueError("subspace is not closed under the bracket")
        basis = [list(b) for b in s.basis]
        if not basis:
            return s
        # unknowns: coefficients t_a of v = sum_a t_a basis[a]
        rows = []
        for b in basis:
            cols = [self.bracket(a, b) for a in basis]
            for k in range(self.dim):
                rows.append([col[k] for col in cols])
        solutions = stack(rows, len(basis)).nullspace()
        vectors = []
        for t in solutions:
            v = [0] * self.dim
            for coeff, a in zip(t, basis):
                if coeff:
                    for k, x in enumerate(a):
                        if x:
                            v[k] += coeff * x
            vectors.append(v)
        return Subspace.from_spanning(vectors, self.dim)

    def check_jacobi(self) -> JacobiReport:
        """Cyclic-sum check over all basis triples i < j < k."""
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                cij = self.bracket_basis(i, j)
                for k in range(j + 1, self.dim):
                    s = self.bracket(cij, self.basis_vector(k))
                    for t, x in enumerate(self.bracket(self.bracket_basis(j, k), self.basis_vector(i))):
                        s[t] += x
                    for t, x in enumerate(self.bracket(self.bracket_basis(k, i), self.basis_vector(j))):
                        s[t] += x
                    if not is_zero_vector(s):
                        return JacobiReport(False, (i, j, k))
        return JacobiReport(True)

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name}, dim={self.dim})"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------

def _unit_bracket_tensor(labels: Sequence[BasisLabel]) -> list:
    """Structure constants of the commutator on a span of matrix units."""
    dim = len(labels)
    index = {(lab.i, lab.j): idx for idx, lab in enumerate(labels)}

    def put(vec, i, j, coeff):
        if coeff == 0:
            return
        if (i, j) not in index:
            raise ValueError(f"product leaves the span: e({i},{j}) missing")
        vec[index[(i, j)]] += coeff

    c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for a, la in enumerate(labels):
        for b, lb in enumerate(labels):
            vec = [0] * dim
            if la.j == lb.i:
                put(vec, la.i, lb.j, 1)
            if lb.j == la.i:
                put(vec, lb.i, la.j, -1)
            c[a][b] = vec
    return c


@lru_cache(maxsize=None)
def upper_triangular(n: int) -> LieAlgebra:
    """The Lie algebra of upper triangular n x n matrices under the commutator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = [BasisLabel.unit(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    return LieAlgebra(labels, _unit_bracket_tensor(labels), name=f"t{n}")


@lru_cache(maxsize=None)
def full_matrix(n: int) -> LieAlgebra:
    """The Lie algebra of all n x n matrices under the commutator."""
    if n < 1:
        raise ValueError("n must be >= 1")
    labels = [BasisLabel.unit(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    return LieAlgebra(labels, _unit_bracket_tensor(labels), name=f"m{n}")


@lru_cache(maxsize=None)
def special_linear(n: int) -> LieAlgebra:
    """Traceless n x n matrices: off-diagonal units plus e(1,1)-e(i,i), i=2..n."""
    if n < 2:
        raise ValueError("n must be >= 2")
    ambient = full_matrix(n)
    labels = []
    vectors = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                labels.append(BasisLabel.unit(i, j))
                vectors.append(ambient.unit_vector(i, j))
    for i in range(2, n + 1):
        labels.append(BasisLabel.abstract(f"e(1,1)-e({i},{i})"))
        v = [0] * ambient.dim
        v[ambient.unit_index[(1, 1)]] = 1
        v[ambient.unit_index[(i, i)]] = -1
        vectors.append(v)
    coords = Subspace.from_spanning(vectors, ambient.dim)
    # change of basis: canonical subspace coordinates -> our labeled basis
    basis_in_canonical = stack([coords.coordinates(v) for v in vectors])
    to_labeled = basis_in_canonical.transpose().inverse()
    dim = len(labels)
    c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            w = ambient.bracket(vectors[a], vectors[b])
            canonical = coords.coordinates(w)
            if canonical is None:
                raise ValueError("bracket left the traceless subspace")
            c[a][b] = to_labeled.apply(canonical)
    return LieAlgebra(labels, c, name=f"sl{n}")


def abelian(dim: int) -> LieAlgebra:
    """Abelian Lie algebra (zero bracket) with abstract labels x0..x{dim-1}."""
    labels = [BasisLabel.abstract(f"x{k}") for k in range(dim)]
    zero = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    return LieAlgebra(labels, zero, name=f"abelian{dim}")


# ---------------------------------------------------------------------------
# associative structure on matrix-unit algebras
# ---------------------------------------------------------------------------

def unit_product(L: LieAlgebra, x: Sequence, y: Sequence) -> list:
    """Associative matrix product of two elements of a matrix-unit algebra."""
    if len(x) != L.dim or len(y) != L.dim:
        raise ValueError("dimension mismatch")
    out = [0] * L.dim
    for a, va in enumerate(x):
        if va:
            la = L.labels[a]
            for b, vb in enumerate(y):
                if vb:
                    lb = L.labels[b]
                    if la.j == lb.i:
                        idx = L.unit_index.get((la.i, lb.j))
                        if idx is None:
                            raise ValueError(
                                f"product leaves the algebra: e({la.i},{lb.j}) missing")
                        out[idx] += va * vb
    return out


def to_matrix(L: LieAlgebra, v: Sequence) -> Matrix:
    """Realize an element of a matrix-unit algebra as an n x n matrix."""
    n = L.n
    if n is None:
        raise ValueError("algebra has no matrix-unit labels")
    m = [[0] * n for _ in range(n)]
    for idx, x in enumerate(v):
        if x:
            lab = L.labels[idx]
            if lab.kind != "unit":
                raise ValueError("element involves a non-unit basis vector")
            m[lab.i - 1][lab.j - 1] = x
    return Matrix(m, ncols=n)


def from_matrix(L: LieAlgebra, m: Matrix) -> list:
    """Inverse of to_matrix; errors if the matrix uses absent units."""
    n = L.n
    if n is None or m.shape != (n, n):
        raise ValueError("dimension mismatch")
    v = [0] * L.dim
    for i in range(n):
        for j in range(n):
            x = m.entry(i, j)
            if x:
                idx = L.unit_index.get((i + 1, j + 1))
                if idx is None:
                    raise ValueError(f"matrix entry ({i + 1},{j + 1}) has no basis unit")
                v[idx] = x
    return v


def trace(L: LieAlgebra, v: Sequence) -> Fraction:
    n = L.n
    if n is None:
        raise ValueError("algebra has no matrix-unit labels")
    return sum((v[L.unit_index[(i, i)]] for i in range(1, n + 1) if (i, i) in L.unit_index),
               Fraction(0))


# ---------------------------------------------------------------------------
# JSON interchange
# ---------------------------------------------------------------------------

def algebra_to_json(L: LieAlgebra) -> dict:
    """{"dim", "labels", "brackets": [{"i", "j", "coeffs": {k: "p/q"}}]}, i < j only."""
    brackets = []
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            coeffs = {str(k): format_rational(x) for k, x in enumerate(L.c[i][j]) if x}
            if coeffs:
                brackets.append({"i": i, "j": j, "coeffs": coeffs})
    return {"dim": L.dim, "labels": [str(lab) for lab in L.labels], "brackets": brackets}


def algebra_from_json(data: dict) -> LieAlgebra:
    dim = data["dim"]
    labels = [label_from_string(s) for s in data.get("labels", [f"x{k}" for k in range(dim)])]
    if len(labels) != dim:
        raise ValueError("label count does not match dim")
    c = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    for entry in data.get("brackets", []):
        i, j = entry["i"], entry["j"]
        if not 0 <= i < j < dim:
            raise ValueError(f"bracket pair ({i},{j}) must satisfy 0 <= i < j < dim")
        for k, s in entry["coeffs"].items():
            k = int(k)
            if not 0 <= k < dim:
                raise ValueError(f"coefficient index {k} out of range")
            x = parse_rational(s)
            c[i][j][k] = x
            c[j][i][k] = -x
    return LieAlgebra(labels, c, name=data.get("name", "custom"))
