"""Half-derivations, and derivation spaces of arbitrary rational weight.

A weight-w derivation of a Lie algebra L is a linear map f with
f([x,y]) = w([f(x),y] + [x,f(y)]); w = 1/2 gives the half-derivations whose
span controls the transposed Poisson structures on L, and w = 1 recovers
ordinary derivations. The space is computed exactly as the nullspace of one
linear system over the dim^2 matrix entries of f.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .liealg import LieAlgebra, upper_triangular, full_matrix
from .linalg import Matrix, format_rational, parse_rational, stack

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class LinearMap:
    """Linear endomorphism of the algebra; column j of matrix = image of e_j."""

    matrix: Matrix

    def __post_init__(self):
        if self.matrix.nrows != self.matrix.ncols:
            raise ValueError("linear map matrix must be square")

    @property
    def dim(self) -> int:
        return self.matrix.nrows

    @classmethod
    def from_images(cls, images: Sequence[Sequence]) -> "LinearMap":
        return cls(Matrix.from_columns(images))

    @classmethod
    def identity(cls, dim: int) -> "LinearMap":
        return cls(Matrix.identity(dim))

    @classmethod
    def zero(cls, dim: int) -> "LinearMap":
        return cls(Matrix.zeros(dim, dim))

    def apply(self, v: Sequence) -> list:
        return self.matrix.apply(v)

    def column(self, j: int) -> list:
        return self.matrix.column(j)

    def entries_flat(self) -> list:
        """Row-major flattening; the coordinate system of the solver below."""
        return [x for row in self.matrix.rows for x in row]

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "columns": [[format_rational(x) for x in self.column(j)] for j in range(self.dim)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearMap":
        dim = data["dim"]
        cols = data["columns"]
        if len(cols) != dim or any(len(c) != dim for c in cols):
            raise ValueError("column shape does not match dim")
        return cls.from_images([[parse_rational(x) for x in c] for c in cols])


def map_from_flat(dim: int, flat: Sequence) -> LinearMap:
    return LinearMap(Matrix([list(flat[k * dim:(k + 1) * dim]) for k in range(dim)], ncols=dim))


def is_delta_derivation(L: LieAlgebra, phi: LinearMap, weight=HALF) -> bool:
    """Whether phi([x,y]) = weight*([phi x, y] + [x, phi y]) on all basis pairs."""
    if phi.dim != L.dim:
        raise ValueError("dimension mismatch")
    w = Fraction(weight)
    cols = [phi.column(j) for j in range(L.dim)]
    for i in range(L.dim):
        for j in range(i + 1, L.dim):
            lhs = phi.apply(L.bracket_basis(i, j))
            r1 = L.bracket(cols[i], L.basis_vector(j))
            r2 = L.bracket(L.basis_vector(i), cols[j])
            if any(lhs[k] != w * (r1[k] + r2[k]) for k in range(L.dim)):
                return False
    return True


def derivation_system(L: LieAlgebra, weight=HALF) -> Matrix:
    """The linear system whose kernel is the weight-w derivation space.

    Unknowns are the map entries m[k][l] (row-major, index k*dim + l with
    column l = image of e_l). One equation block per basis pair i < j, blocks
    in lexicographic (i, j) order, rows within a block by output coordinate k:

        q * sum_l c[i][j][l] m[k][l]
          - p * sum_l (m[l][i] c[l][j][k] + m[l][j] c[i][l][k]) = 0

    where weight = p/q (the equation is scaled by q to stay integral for
    integer structure constants).
    """
    w = Fraction(weight)
    p, q = w.numerator, w.denominator
    dim = L.dim
    # c[l][j][k] for fixed (j,k), and c[i][l][k] for fixed (i,k)
    by_jk = [[[] for _ in range(dim)] for _ in range(dim)]
    by_ik = [[[] for _ in range(dim)] for _ in range(dim)]
    for a in range(dim):
        for b in range(dim):
            for k, x in enumerate(L.c[a][b]):
                if x:
                    by_jk[b][k].append((a, x))
                    by_ik[a][k].append((b, x))
    rows = []
    for i in range(dim):
        for j in range(i + 1, dim):
            cij = [(l, x) for l, x in enumerate(L.c[i][j]) if x]
            for k in range(dim):
                row = [0] * (dim * dim)
                for l, x in cij:
                    row[k * dim + l] += q * x
                for l, x in by_jk[j][k]:
                    row[l * dim + i] -= p * x
                for l, x in by_ik[i][k]:
                    row[l * dim + j] -= p * x
                rows.append(row)
    return stack(rows, dim * dim)


_space_cache: dict = {}


def delta_derivation_space(L: LieAlgebra, weight=HALF) -> list[LinearMap]:
    """Deterministic basis of the weight-w derivation space of L.

    The basis comes from the canonical nullspace of derivation_system; every
    returned map is re-verified against is_delta_derivation.
    """
    w = Fraction(weight)
    key = (id(L), w)
    cached = _space_cache.get(key)
    if cached is not None and cached[0] is L:
        return cached[1]
    basis = [map_from_flat(L.dim, v) for v in derivation_system(L, w).nullspace()]
    for phi in basis:
        if not is_delta_derivation(L, phi, w):
            raise AssertionError("solver returned a non-derivation; kernel bug")
    _space_cache[key] = (L, basis)
    return basis


def delta_derivation_dim(L: LieAlgebra, weight=HALF) -> int:
    return len(delta_derivation_space(L, weight))


# ---------------------------------------------------------------------------
# the named half-derivations of T_n and M_n
# ---------------------------------------------------------------------------

def alpha_map(n: int) -> LinearMap:
    """On T_n: e(1,1) -> e(1,n), e(n,n) -> -e(1,n), every other unit -> 0."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = upper_triangular(n)
    images = [[0] * L.dim for _ in range(L.dim)]
    e1n = L.unit_index[(1, n)]
    images[L.unit_index[(1, 1)]][e1n] = 1
    images[L.unit_index[(n, n)]][e1n] = -1
    return LinearMap.from_images(images)


def beta_map(n: int, i: int) -> LinearMap:
    """On T_n: e(i,i) -> identity matrix, every other unit -> 0."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= i <= n:
        raise ValueError("index out of range")
    L = upper_triangular(n)
    images = [[0] * L.dim for _ in range(L.dim)]
    images[L.unit_index[(i, i)]] = L.delta
    return LinearMap.from_images(images)


def gamma_map(n: int) -> LinearMap:
    """On M_n: every diagonal unit -> identity matrix, off-diagonal units -> 0."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = full_matrix(n)
    images = [[0] * L.dim for _ in range(L.dim)]
    for i in range(1, n + 1):
        images[L.unit_index[(i, i)]] = L.delta
    return LinearMap.from_images(images)


# ---------------------------------------------------------------------------
# entry-level structure of the computed basis on T_n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EntryLemmaReport:
    ok: bool
    violations: tuple[str, ...]


def _entry(L: LieAlgebra, image: Sequence, k: int, l: int):
    """Coefficient of e(k,l) in an image vector (0 when the unit is absent)."""
    idx = L.unit_index.get((k, l))
    return image[idx] if idx is not None else 0


def verify_entry_lemmas(n: int) -> EntryLemmaReport:
    """Check the entry constraints every half-derivation of T_n must satisfy.

    For each basis map f of the computed space: images of strictly upper
    units are the matching multiples of that unit, diagonal images have equal
    off-(i,i) diagonal entries and vanish strictly above the diagonal except
    at the (1,n) corner for i in {1, n}, and the corner coefficients are tied
    together across all units.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    L = upper_triangular(n)
    violations = []

    def note(tag, m, *idx):
        violations.append(f"{tag} map={m} at {idx}")

    for m, phi in enumerate(delta_derivation_space(L, HALF)):
        img = {(i, j): phi.column(L.unit_index[(i, j)])
               for i in range(1, n + 1) for j in range(i, n + 1)}
        corner = _entry(L, img[(1, n)], 1, n)
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                # f(e_ij) e_ii = 0: column i of the image vanishes
                if any(_entry(L, img[(i, j)], l, i) != 0 for l in range(1, i + 1)):
                    note("upper-image-col", m, i, j)
                # f(e_ii) has no entries in row j right of the diagonal
                if any(_entry(L, img[(i, i)], j, k) != 0 for k in range(j + 1, n + 1)):
                    note("diag-image-row", m, i, j)
                # opposite corner entries of f(e_ii) and f(e_jj) cancel
                if _entry(L, img[(i, i)], i, j) != -_entry(L, img[(j, j)], i, j):
                    note("corner-antisym", m, i, j)
                # f(e_ii) has no entries in column i above the diagonal
                if any(_entry(L, img[(i, i)], l, i) != 0 for l in range(1, i)):
                    note("diag-image-col", m, i, j)
                # f(e_ij) is the expected multiple of e_ij, both expressions
                a1 = _entry(L, img[(i, i)], i, i) - _entry(L, img[(i, i)], j, j)
                a2 = _entry(L, img[(j, j)], j, j) - _entry(L, img[(j, j)], i, i)
                expected = [0] * L.dim
                expected[L.unit_index[(i, j)]] = a1
                if a1 != a2 or img[(i, j)] != expected:
                    note("upper-image-multiple", m, i, j)
                # all strictly-upper coefficients agree with the (1,n) corner
                if _entry(L, img[(i, j)], i, j) != corner:
                    note("corner-coefficient", m, i, j)
        for i in range(1, n + 1):
            # equal diagonal entries away from position (i,i)
            diag = [_entry(L, img[(i, i)], j, j) for j in range(1, n + 1) if j != i]
            if any(d != diag[0] for d in diag):
                note("diag-constancy", m, i)
            # strictly upper entries of f(e_ii) vanish off the allowed corner
            for j in range(1, n + 1):
                for k in range(j + 1, n + 1):
                    if (j, k) == (1, n) and i in (1, n):
                        continue
                    if _entry(L, img[(i, i)], j, k) != 0:
                        note("diag-upper-zero", m, i, j, k)
    return EntryLemmaReport(not violations, tuple(violations))
