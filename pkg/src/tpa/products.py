"""Commutative bilinear products on a Lie algebra and the axioms tying them
to the bracket.

The central check is `is_tp_structure`: a product makes the algebra a
transposed Poisson algebra iff it is commutative, associative, and satisfies
2 z.[x,y] = [z.x, y] + [x, z.y]. The latter holds iff multiplication by
every basis vector is a half-derivation, so the check runs both routes (the
direct triple loop and membership of the multiplication operators in the
computed half-derivation span) and treats any disagreement as an internal
error.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .halfderiv import HALF, LinearMap, delta_derivation_space
from .liealg import LieAlgebra, Subspace, full_matrix, upper_triangular
from .linalg import (
    Matrix,
    format_rational,
    is_zero_vector,
    parse_rational,
    row_space_basis,
    span_rank,
    stack,
)


class BilinearProduct:
    """Symmetric bilinear product on Q^dim: d[i][j] = coordinates of e_i . e_j."""

    __slots__ = ("dim", "d", "_nz")

    def __init__(self, tensor):
        self.d = tuple(tuple(tuple(v) for v in plane) for plane in tensor)
        self.dim = len(self.d)
        if any(len(p) != self.dim or any(len(v) != self.dim for v in p) for p in self.d):
            raise ValueError("product tensor shape mismatch")
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.d[i][j] != self.d[j][i]:
                    raise ValueError(f"product tensor not symmetric at {(i, j)}")
        self._nz = [
            [[(k, x) for k, x in enumerate(self.d[i][j]) if x] for j in range(self.dim)]
            for i in range(self.dim)
        ]

    @classmethod
    def zero(cls, dim: int) -> "BilinearProduct":
        return cls([[[0] * dim for _ in range(dim)] for _ in range(dim)])

    @classmethod
    def from_pairs(cls, dim: int, pairs: dict) -> "BilinearProduct":
        """Build from {(i, j): value vector} with i <= j; symmetry is implied."""
        t = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), v in pairs.items():
            if i > j:
                raise ValueError("pairs must be given with i <= j")
            if len(v) != dim:
                raise ValueError("value length mismatch")
            t[i][j] = list(v)
            t[j][i] = list(v)
        return cls(t)

    def value(self, i: int, j: int) -> list:
        return list(self.d[i][j])

    def apply(self, x: Sequence, y: Sequence) -> list:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("dimension mismatch")
        out = [0] * self.dim
        for i, a in enumerate(x):
            if a:
                nzi = self._nz[i]
                for j, b in enumerate(y):
                    if b:
                        ab = a * b
                        for k, coeff in nzi[j]:
                            out[k] += ab * coeff
        return out

    def multiplication_operator(self, z: Sequence) -> LinearMap:
        """The map x -> z . x (column j = z . e_j)."""
        if len(z) != self.dim:
            raise ValueError("dimension mismatch")
        cols = []
        for j in range(self.dim):
            col = [0] * self.dim
            for i, a in enumerate(z):
                if a:
                    for k, coeff in self._nz[i][j]:
                        col[k] += a * coeff
            cols.append(col)
        return LinearMap.from_images(cols)

    def is_zero(self) -> bool:
        return all(not self._nz[i][j] for i in range(self.dim) for j in range(self.dim))

    def __eq__(self, other) -> bool:
        if not isinstance(other, BilinearProduct):
            return NotImplemented
        return self.dim == other.dim and self.d == other.d

    def __hash__(self):
        return hash(tuple(tuple(tuple(Fraction(x) for x in v) for v in p) for p in self.d))

    def __repr__(self) -> str:
        nonzero = sum(1 for i in range(self.dim) for j in range(i, self.dim) if self._nz[i][j])
        return f"BilinearProduct(dim={self.dim}, nonzero_pairs={nonzero})"

    def to_json(self) -> dict:
        entries = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                coeffs = {str(k): format_rational(x) for k, x in self._nz[i][j]}
                if coeffs:
                    entries.append({"i": i, "j": j, "coeffs": coeffs})
        return {"dim": self.dim, "products": entries}

    @classmethod
    def from_json(cls, data: dict) -> "BilinearProduct":
        dim = data["dim"]
        pairs = {}
        for entry in data.get("products", []):
            i, j = entry["i"], entry["j"]
            if not 0 <= i <= j < dim:
                raise ValueError(f"product pair ({i},{j}) must satisfy 0 <= i <= j < dim")
            v = [0] * dim
            for k, s in entry["coeffs"].items():
                k = int(k)
                if not 0 <= k < dim:
                    raise ValueError(f"coefficient index {k} out of range")
                v[k] = parse_rational(s)
            pairs[(i, j)] = v
        return cls.from_pairs(dim, pairs)


def plain_sum(p1: BilinearProduct, p2: BilinearProduct) -> BilinearProduct:
    """Entry-wise sum; commutative and bracket-compatible, but associativity
    of the sum of two associative products is NOT guaranteed."""
    if p1.dim != p2.dim:
        raise ValueError("dimension mismatch")
    dim = p1.dim
    return BilinearProduct(
        [[[a + b for a, b in zip(p1.d[i][j], p2.d[i][j])] for j in range(dim)] for i in range(dim)]
    )


# ---------------------------------------------------------------------------
# axiom checks
# ---------------------------------------------------------------------------

def check_commutative(p: BilinearProduct) -> Optional[tuple[int, int]]:
    """First (i, j) with e_i.e_j != e_j.e_i, or None. Symmetry is structural
    for constructed products; this re-checks tensors ingested from JSON."""
    for i in range(p.dim):
        for j in range(i + 1, p.dim):
            if p.d[i][j] != p.d[j][i]:
                return (i, j)
    return None


def check_associative(p: BilinearProduct) -> Optional[tuple[int, int, int]]:
    """First basis triple with (e_i.e_j).e_k != e_i.(e_j.e_k), or None."""
    dim = p.dim
    for i in range(dim):
        for j in range(dim):
            nij = p._nz[i][j]
            for k in range(dim):
                lhs = [0] * dim
                for l, x in nij:
                    for t, y in p._nz[l][k]:
                        lhs[t] += x * y
                for l, x in p._nz[j][k]:
                    for t, y in p._nz[i][l]:
                        lhs[t] -= x * y
                if any(lhs):
                    return (i, j, k)
    return None


def check_transposed_leibniz(L: LieAlgebra, p: BilinearProduct) -> Optional[tuple[int, int, int]]:
    """First basis triple (z, x, y) violating 2 z.[x,y] = [z.x, y] + [x, z.y]."""
    if p.dim != L.dim:
        raise ValueError("dimension mismatch")
    dim = L.dim
    basis = [L.basis_vector(t) for t in range(dim)]
    for z in range(dim):
        for x in range(dim):
            zx = p.d[z][x]
            for y in range(x, dim):  # antisymmetric in (x, y); (x, x) checked for z.0 = 0 consistency
                lhs = p.apply(basis[z], L.bracket_basis(x, y))
                rhs1 = L.bracket(zx, basis[y])
                rhs2 = L.bracket(basis[x], p.d[z][y])
                if any(2 * lhs[t] != rhs1[t] + rhs2[t] for t in range(dim)):
                    return (z, x, y)
    return None


def check_poisson_leibniz(L: LieAlgebra, p: BilinearProduct) -> Optional[tuple[int, int, int]]:
    """First basis triple (x, y, z) violating [x.y, z] = x.[y,z] + [x,z].y."""
    if p.dim != L.dim:
        raise ValueError("dimension mismatch")
    dim = L.dim
    basis = [L.basis_vector(t) for t in range(dim)]
    for x in range(dim):
        for y in range(dim):
            xy = p.d[x][y]
            for z in range(dim):
                lhs = L.bracket(xy, basis[z])
                rhs1 = p.apply(basis[x], L.bracket_basis(y, z))
                rhs2 = p.apply(L.bracket_basis(x, z), basis[y])
                if any(lhs[t] != rhs1[t] + rhs2[t] for t in range(dim)):
                    return (x, y, z)
    return None


_mult_span_cache: dict = {}


def _delta_span(L: LieAlgebra):
    """Cached RREF row basis of the flattened half-derivation span of L."""
    key = id(L)
    cached = _mult_span_cache.get(key)
    if cached is not None and cached[0] is L:
        return cached[1]
    flat = [phi.entries_flat() for phi in delta_derivation_space(L, HALF)]
    basis = row_space_basis(flat, L.dim * L.dim) if flat else []
    _mult_span_cache[key] = (L, basis)
    return basis


def multiplications_in_delta_span(L: LieAlgebra, p: BilinearProduct) -> bool:
    """Whether every multiplication operator z -> z.e_i lies in the span of
    the half-derivations of L (checked on the basis multiplications)."""
    if p.dim != L.dim:
        raise ValueError("dimension mismatch")
    basis = _delta_span(L)
    n2 = L.dim * L.dim
    span = Subspace(n2, tuple(tuple(r) for r in basis))
    for i in range(L.dim):
        op = p.multiplication_operator(L.basis_vector(i)).entries_flat()
        if not is_zero_vector(op) and not span.contains(op):
            return False
    return True


def is_poisson_type(L: LieAlgebra, p: BilinearProduct) -> bool:
    """All basis products central, and the derived subalgebra annihilated.

    These two conditions are exactly what survives of an extension by zero of
    a product on a complement of [L,L] with central values.
    """
    if p.dim != L.dim:
        raise ValueError("dimension mismatch")
    z = L.center()
    for i in range(L.dim):
        for j in range(i, L.dim):
            if p._nz[i][j] and not z.contains(p.d[i][j]):
                return False
    for b in L.derived_subalgebra().basis:
        for j in range(L.dim):
            if not is_zero_vector(p.apply(b, L.basis_vector(j))):
                return False
    return True


@dataclass(frozen=True)
class StructureReport:
    commutative: bool
    associative: bool
    transposed_leibniz: bool
    poisson_type: bool
    poisson_leibniz: bool
    trivial: bool
    associative_failure: Optional[tuple[int, int, int]] = None
    transposed_leibniz_failure: Optional[tuple[int, int, int]] = None
    poisson_leibniz_failure: Optional[tuple[int, int, int]] = None

    @property
    def is_tp(self) -> bool:
        return self.commutative and self.associative and self.transposed_leibniz

    def to_json(self) -> dict:
        return {
            "commutative": self.commutative,
            "associative": self.associative,
            "transposed_leibniz": self.transposed_leibniz,
            "is_tp": self.is_tp,
            "poisson_type": self.poisson_type,
            "poisson_leibniz": self.poisson_leibniz,
            "trivial": self.trivial,
            "associative_failure": self.associative_failure,
            "transposed_leibniz_failure": self.transposed_leibniz_failure,
            "poisson_leibniz_failure": self.poisson_leibniz_failure,
        }


def is_tp_structure(L: LieAlgebra, p: BilinearProduct) -> StructureReport:
    """Full axiom report; the bracket-compatibility verdict is computed both
    directly and through half-derivation membership, which must agree."""
    commutative = check_commutative(p) is None
    assoc_fail = check_associative(p)
    leib_fail = check_transposed_leibniz(L, p)
    via_span = multiplications_in_delta_span(L, p)
    if (leib_fail is None) != via_span:
        raise RuntimeError(
            "internal inconsistency: direct compatibility check and "
            "half-derivation membership disagree")
    pois_fail = check_poisson_leibniz(L, p)
    return StructureReport(
        commutative=commutative,
        associative=assoc_fail is None,
        transposed_leibniz=leib_fail is None,
        poisson_type=is_poisson_type(L, p),
        poisson_leibniz=pois_fail is None,
        trivial=p.is_zero(),
        associative_failure=assoc_fail,
        transposed_leibniz_failure=leib_fail,
        poisson_leibniz_failure=pois_fail,
    )


# ---------------------------------------------------------------------------
# extension by zero, orthogonal sums
# ---------------------------------------------------------------------------

def extension_by_zero(L: LieAlgebra, complement: Sequence[Sequence],
                      star: dict) -> BilinearProduct:
    """Product vanishing on [L,L], given by star on a complement of it.

    complement: vectors spanning a complement V of [L,L] in L.
    star: {(a, b): value vector in L coordinates} with a <= b indexing the
    complement vectors; values must be central. The assembled product is
    x.y = star(P x, P y) with P the projection onto V along [L,L]; it is
    rejected if not associative (associativity of star is exactly what it
    needs beyond the structural conditions).
    """
    complement = [list(v) for v in complement]
    derived = L.derived_subalgebra()
    k = len(complement)
    if span_rank(complement, L.dim) != k or k + derived.dim != L.dim or \
            span_rank(complement + [list(b) for b in derived.basis], L.dim) != L.dim:
        raise ValueError("vectors do not form a complement of the derived subalgebra")
    center = L.center()
    values = {}
    for (a, b), v in star.items():
        if not 0 <= a <= b < k:
            raise ValueError("star must be indexed by complement pairs with a <= b")
        if len(v) != L.dim:
            raise ValueError("star value length mismatch")
        if not center.contains(v):
            raise ValueError(f"star value at {(a, b)} is not central")
        values[(a, b)] = list(v)
        values[(b, a)] = list(v)
    # projection coefficients: coordinates of each e_t in the (V, [L,L]) basis
    full = stack(complement + [list(b) for b in derived.basis]).transpose()
    inv = full.inverse()
    proj = [inv.row(a) for a in range(k)]  # proj[a][t] = V-coordinate a of e_t
    tensor = [[[0] * L.dim for _ in range(L.dim)] for _ in range(L.dim)]
    for i in range(L.dim):
        for j in range(i, L.dim):
            out = [0] * L.dim
            for a in range(k):
                pa = proj[a][i]
                if pa:
                    for b in range(k):
                        pb = proj[b][j]
                        if pb:
                            v = values.get((a, b))
                            if v:
                                w = pa * pb
                                for t, x in enumerate(v):
                                    if x:
                                        out[t] += w * x
            tensor[i][j] = out
            tensor[j][i] = out
    p = BilinearProduct(tensor)
    bad = check_associative(p)
    if bad is not None:
        raise ValueError(f"star product is not associative (first failure at {bad})")
    return p


def as_extension_by_zero(L: LieAlgebra, p: BilinearProduct):
    """Split a Poisson-type product as (complement vectors, star dict).

    The complement is the deterministic greedy extension of the derived
    subalgebra by standard basis vectors; the round trip
    extension_by_zero(L, *as_extension_by_zero(L, p)) == p holds for every
    Poisson-type product.
    """
    if not is_poisson_type(L, p):
        raise ValueError("product is not of Poisson type")
    derived = [list(b) for b in L.derived_subalgebra().basis]
    complement = []
    current = list(derived)
    r = len(current)
    for t in range(L.dim):
        if r == L.dim:
            break
        cand = current + [L.basis_vector(t)]
        if span_rank(cand, L.dim) > r:
            complement.append(L.basis_vector(t))
            current = cand
            r += 1
    star = {}
    for a in range(len(complement)):
        for b in range(a, len(complement)):
            v = p.apply(complement[a], complement[b])
            if not is_zero_vector(v):
                star[(a, b)] = v
    return complement, star


def annihilator(p: BilinearProduct) -> Subspace:
    """All x with x.y = 0 for every y."""
    rows = []
    for j in range(p.dim):
        for k in range(p.dim):
            rows.append([p.d[i][j][k] for i in range(p.dim)])
    return Subspace.from_spanning(stack(rows, p.dim).nullspace(), p.dim)


def product_image(p: BilinearProduct) -> Subspace:
    """Span of all basis products e_i . e_j."""
    vectors = [p.d[i][j] for i in range(p.dim) for j in range(i, p.dim)]
    return Subspace.from_spanning(vectors, p.dim)


def are_orthogonal(L: LieAlgebra, p1: BilinearProduct, p2: BilinearProduct) -> bool:
    """Each product's image annihilates the other product."""
    if p1.dim != p2.dim or p1.dim != L.dim:
        raise ValueError("dimension mismatch")
    basis = [L.basis_vector(t) for t in range(L.dim)]
    for a, b in ((p1, p2), (p2, p1)):
        for i in range(L.dim):
            for j in range(i, L.dim):
                v = a.d[i][j]
                if any(x for x in v):
                    for e in basis:
                        if not is_zero_vector(b.apply(v, e)):
                            return False
    return True


def orthogonal_sum(L: LieAlgebra, p1: BilinearProduct, p2: BilinearProduct) -> BilinearProduct:
    if not are_orthogonal(L, p1, p2):
        raise ValueError("products are not orthogonal (use plain_sum to add anyway)")
    return plain_sum(p1, p2)


# ---------------------------------------------------------------------------
# named structures
# ---------------------------------------------------------------------------

def tn_corner_product(n: int) -> BilinearProduct:
    """On T_n: e(1,1).e(1,1) = e(n,n).e(n,n) = e(1,n), e(1,1).e(n,n) = -e(1,n)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = upper_triangular(n)
    e1n = L.unit_vector(1, n)
    i11, inn = L.unit_index[(1, 1)], L.unit_index[(n, n)]
    return BilinearProduct.from_pairs(L.dim, {
        (i11, i11): e1n,
        (min(i11, inn), max(i11, inn)): [-x for x in e1n],
        (inn, inn): e1n,
    })


def tn_diagonal_family(n: int, a, b=0) -> BilinearProduct:
    """On T_n: e(i,i).e(j,j) = a[i][j]*delta, plus the corner pattern scaled
    by b (+b at (1,1) and (n,n), -b at (1,n)); a must be symmetric."""
    L = upper_triangular(n)
    a = [[Fraction(x) for x in row] for row in a]
    if len(a) != n or any(len(r) != n for r in a):
        raise ValueError("a must be n x n")
    if any(a[i][j] != a[j][i] for i in range(n) for j in range(n)):
        raise ValueError("a must be symmetric")
    b = Fraction(b)
    delta = L.delta
    e1n = L.unit_vector(1, n)
    pairs = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            ii, jj = L.unit_index[(i, i)], L.unit_index[(j, j)]
            v = [a[i - 1][j - 1] * x for x in delta]
            if b:
                if (i, j) in ((1, 1), (n, n)):
                    v = [x + b * y for x, y in zip(v, e1n)]
                elif (i, j) == (1, n):
                    v = [x - b * y for x, y in zip(v, e1n)]
            if not is_zero_vector(v):
                pairs[(min(ii, jj), max(ii, jj))] = v
    return BilinearProduct.from_pairs(L.dim, pairs)


def mn_trace_product(n: int, c=1) -> BilinearProduct:
    """On M_n: e(i,i).e(j,j) = c*delta for all i, j."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = full_matrix(n)
    c = Fraction(c)
    value = [c * x for x in L.delta]
    pairs = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            ii, jj = L.unit_index[(i, i)], L.unit_index[(j, j)]
            pairs[(min(ii, jj), max(ii, jj))] = list(value)
    return BilinearProduct.from_pairs(L.dim, pairs)


def _t2_pairs(entries: dict) -> BilinearProduct:
    """Helper: build a T_2 product from {(unit pair): value in unit coords}."""
    L = upper_triangular(2)
    pairs = {}
    for ((i1, j1), (i2, j2)), coeffs in entries.items():
        a, b = L.unit_index[(i1, j1)], L.unit_index[(i2, j2)]
        v = [0] * L.dim
        for (ci, cj), x in coeffs.items():
            v[L.unit_index[(ci, cj)]] += x
        pairs[(min(a, b), max(a, b))] = v
    return BilinearProduct.from_pairs(L.dim, pairs)


def t2_catalog(label: str, c=1) -> BilinearProduct:
    """The nine transposed Poisson structures on T_2, by classification label.

    Poisson type: T09_00 (zero product), T17_0, T10_0. Corner-plus-Poisson:
    T16, T18, T11_0. Non-orthogonal sums with the c-family (c != 0): T17_c,
    T09_0c, T19_c.
    """
    c = Fraction(c)
    e = {"11": (1, 1), "12": (1, 2), "22": (2, 2)}
    one = Fraction(1)
    delta = {e["11"]: one, e["22"]: one}

    def merge(*parts):
        out = {}
        for coeffs in parts:
            for k, v in coeffs.items():
                out[k] = out.get(k, 0) + v
        return {k: v for k, v in out.items() if v}

    if label in ("T17_c", "T09_0c", "T19_c") and c == 0:
        raise ValueError(f"{label} requires c != 0")
    table = {
        "T09_00": {},
        "T17_0": {(e["11"], e["11"]): delta},
        "T10_0": {
            (e["11"], e["11"]): delta,
            (e["11"], e["22"]): {k: -v for k, v in delta.items()},
            (e["22"], e["22"]): delta,
        },
        "T16": {
            (e["11"], e["11"]): {e["12"]: one},
            (e["11"], e["22"]): {e["12"]: -one},
            (e["22"], e["22"]): {e["12"]: one},
        },
        "T18": {
            (e["11"], e["11"]): merge({e["12"]: one}, delta),
            (e["11"], e["22"]): {e["12"]: -one},
            (e["22"], e["22"]): {e["12"]: one},
        },
        "T11_0": {
            (e["11"], e["11"]): merge({e["12"]: one}, delta),
            (e["11"], e["22"]): merge({e["12"]: -one}, {k: -v for k, v in delta.items()}),
            (e["22"], e["22"]): merge({e["12"]: one}, delta),
        },
        "T17_c": {
            (e["11"], e["11"]): {e["11"]: c},
            (e["11"], e["12"]): {e["12"]: c},
            (e["12"], e["22"]): {e["12"]: -c},
            (e["11"], e["22"]): {e["22"]: c},
            (e["22"], e["22"]): {e["22"]: -c},
        },
        "T09_0c": {
            (e["11"], e["11"]): {e["11"]: c},
            (e["11"], e["12"]): {e["12"]: c},
            (e["12"], e["22"]): {e["12"]: -c},
            (e["11"], e["22"]): {e["22"]: c},
            (e["22"], e["22"]): merge({e["22"]: -c}, {k: -c * v for k, v in delta.items()}),
        },
        "T19_c": {
            (e["11"], e["11"]): {e["11"]: c},
            (e["11"], e["12"]): {e["12"]: c},
            (e["12"], e["22"]): {e["12"]: -c},
            (e["11"], e["22"]): {e["11"]: -c},
            (e["22"], e["22"]): {e["11"]: c},
        },
    }
    if label not in table:
        raise ValueError(f"unknown T_2 structure label {label!r}")
    return _t2_pairs(table[label])


T2_LABELS = ("T09_00", "T17_0", "T10_0", "T16", "T18", "T11_0", "T17_c", "T09_0c", "T19_c")
T2_POISSON_TYPE = {"T09_00": True, "T17_0": True, "T10_0": True,
                   "T16": False, "T18": False, "T11_0": False,
                   "T17_c": False, "T09_0c": False, "T19_c": False}


def catalog(name: str, n: int | None = None, c=1) -> BilinearProduct:
    """Named products: "tn_corner" (alias "tn_form2"), "mn_trace",
    "t2:<label>" with the labels of t2_catalog."""
    if name in ("tn_corner", "tn_form2"):
        if n is None:
            raise ValueError("tn_corner requires n")
        return tn_corner_product(n)
    if name == "mn_trace":
        if n is None:
            raise ValueError("mn_trace requires n")
        return mn_trace_product(n, c)
    if name.startswith("t2:"):
        return t2_catalog(name[3:], c)
    raise ValueError(f"unknown catalog name {name!r}")


def catalog_algebra(name: str, n: int | None = None) -> LieAlgebra:
    """The Lie algebra a catalog product lives on."""
    if name in ("tn_corner", "tn_form2"):
        if n is None:
            raise ValueError("tn_corner requires n")
        return upper_triangular(n)
    if name == "mn_trace":
        if n is None:
            raise ValueError("mn_trace requires n")
        return full_matrix(n)
    if name.startswith("t2:"):
        return upper_triangular(2)
    raise ValueError(f"unknown catalog name {name!r}")
