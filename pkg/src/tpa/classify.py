"""Classification machinery for transposed Poisson structures.

Pipeline: parametrize every bracket-compatible commutative product through
the half-derivation basis (`tp_ansatz`, all linear algebra), generate the
quadratic associativity constraints symbolically, sample the constraint
variety over small integers, check the sampled structures against the
predicted support pattern, and normalize representatives by transporting
along Lie algebra automorphisms (inner conjugations, the antidiagonal flip
of T_n, central trace scalings of M_n).

The symbolic layer is deliberately tiny: affine-linear expressions and
degree-2 polynomials with exact rational coefficients over named parameters.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .halfderiv import HALF, LinearMap, delta_derivation_space
from .liealg import (
    LieAlgebra,
    from_matrix,
    full_matrix,
    to_matrix,
    trace,
    upper_triangular,
)
from .linalg import Matrix, is_zero_vector, stack
from .products import (
    BilinearProduct,
    annihilator,
    is_poisson_type,
    is_tp_structure,
    product_image,
)

# ---------------------------------------------------------------------------
# minimal exact symbolic expressions
# ---------------------------------------------------------------------------


class LinExpr:
    """Affine-linear expression: const + sum coeff * parameter."""

    __slots__ = ("const", "terms")

    def __init__(self, const=0, terms: dict | None = None):
        self.const = const
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    def __add__(self, other: "LinExpr") -> "LinExpr":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return LinExpr(self.const + other.const, terms)

    def __sub__(self, other: "LinExpr") -> "LinExpr":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) - v
        return LinExpr(self.const - other.const, terms)

    def scaled(self, s) -> "LinExpr":
        if s == 0:
            return LinExpr(0)
        return LinExpr(s * self.const, {k: s * v for k, v in self.terms.items()})

    def evaluate(self, assignment: dict):
        return self.const + sum(v * assignment[k] for k, v in self.terms.items())

    def is_zero(self) -> bool:
        return self.const == 0 and not self.terms

    def __repr__(self) -> str:
        parts = [str(self.const)] if self.const else []
        parts += [f"{v}*{k}" for k, v in sorted(self.terms.items())]
        return " + ".join(parts) if parts else "0"


class QuadPoly:
    """Polynomial of degree <= 2: monomials are (), (p,), or (p, q) sorted."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {k: v for k, v in (coeffs or {}).items() if v}

    @classmethod
    def from_product(cls, a: LinExpr, b: LinExpr) -> "QuadPoly":
        coeffs: dict = {}

        def add(key, v):
            coeffs[key] = coeffs.get(key, 0) + v

        if a.const and b.const:
            add((), a.const * b.const)
        for k, v in a.terms.items():
            if b.const:
                add((k,), v * b.const)
        for k, v in b.terms.items():
            if a.const:
                add((k,), v * a.const)
        for k1, v1 in a.terms.items():
            for k2, v2 in b.terms.items():
                key = (k1, k2) if k1 <= k2 else (k2, k1)
                add(key, v1 * v2)
        return cls(coeffs)

    def __sub__(self, other: "QuadPoly") -> "QuadPoly":
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) - v
        return QuadPoly(coeffs)

    def __add__(self, other: "QuadPoly") -> "QuadPoly":
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, 0) + v
        return QuadPoly(coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, assignment: dict):
        total = 0
        for key, v in self.coeffs.items():
            term = v
            for p in key:
                x = assignment[p]
                if not x:
                    term = 0
                    break
                term *= x
            total += term
        return total

    def canonical(self) -> tuple:
        """Scale-normalized key (monic in the smallest monomial) for dedup."""
        if not self.coeffs:
            return ()
        items = sorted(self.coeffs.items())
        lead = items[0][1]
        return tuple((k, Fraction(v) / Fraction(lead)) for k, v in items)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*{'*'.join(k) if k else '1'}" for k, v in sorted(self.coeffs.items()))


@dataclass(frozen=True)
class PolyConstraint:
    poly: QuadPoly
    origin: str  # "commutativity" | "associativity"

    def satisfied(self, assignment: dict) -> bool:
        return self.poly.evaluate(assignment) == 0


# ---------------------------------------------------------------------------
# the ansatz: all commutative products compatible with the bracket
# ---------------------------------------------------------------------------


@dataclass
class ParamFamily:
    """Product tensor with entries affine-linear in free parameters.

    Parameters are named p0, p1, ...; provenance maps each name to the
    (basis index i, half-derivation index s) coefficient it pins in the
    expansion  e_i . x = sum_s t[i,s] * D_s(x).
    """

    algebra: LieAlgebra
    params: list[str]
    provenance: dict = field(repr=False)
    tensor: list = field(repr=False)  # tensor[i][j][k]: LinExpr

    @property
    def n_params(self) -> int:
        return len(self.params)

    def instantiate(self, assignment: dict) -> BilinearProduct:
        if set(assignment) != set(self.params):
            raise ValueError("assignment must cover exactly the family parameters")
        dim = self.algebra.dim
        return BilinearProduct(
            [[[self.tensor[i][j][k].evaluate(assignment) for k in range(dim)]
              for j in range(dim)] for i in range(dim)]
        )


def tp_ansatz(L: LieAlgebra) -> ParamFamily:
    """Parametrize all products whose multiplications are half-derivations
    and which are commutative; bracket compatibility is then automatic.

    Unknowns t[i,s] expand multiplication by e_i over the half-derivation
    basis D_s; the linear commutativity constraints are eliminated exactly
    and the family is rewritten over the canonical free parameters.
    """
    dim = L.dim
    basis_maps = delta_derivation_space(L, HALF)
    m = len(basis_maps)
    # D[s][k][l]: entry (k,l) of half-derivation s
    D = [phi.matrix.rows for phi in basis_maps]
    ncols = dim * m

    def unknown(i: int, s: int) -> int:
        return i * m + s

    rows = []
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(dim):
                # (e_i . e_j)_k - (e_j . e_i)_k = sum_s t[i,s] D_s[k][j] - t[j,s] D_s[k][i]
                row = [0] * ncols
                for s in range(m):
                    x = D[s][k][j]
                    if x:
                        row[unknown(i, s)] += x
                    y = D[s][k][i]
                    if y:
                        row[unknown(j, s)] -= y
                rows.append(row)
    system = stack(rows, ncols)
    solutions = system.nullspace()
    params = [f"p{f}" for f in range(len(solutions))]
    # nullspace vectors are indexed by the free columns, in increasing order
    pivot_set = set(system.rref().pivot_cols)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    provenance = {params[f]: divmod(free_cols[f], m) for f in range(len(solutions))}
    tensor = [[[LinExpr(0) for _ in range(dim)] for _ in range(dim)] for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                terms: dict = {}
                for f, v in enumerate(solutions):
                    coeff = 0
                    for s in range(m):
                        t = v[unknown(i, s)]
                        if t:
                            x = D[s][k][j]
                            if x:
                                coeff += t * x
                    if coeff:
                        terms[params[f]] = coeff
                tensor[i][j][k] = LinExpr(0, terms)
    for i in range(dim):
        for j in range(i + 1, dim):
            for k in range(dim):
                if not (tensor[i][j][k] - tensor[j][i][k]).is_zero():
                    raise AssertionError("commutativity elimination left an asymmetry")
    return ParamFamily(algebra=L, params=params, provenance=provenance, tensor=tensor)


def associativity_constraints(L: LieAlgebra, fam: ParamFamily) -> list[PolyConstraint]:
    """Degree-2 constraints from (e_i.e_j).e_k = e_i.(e_j.e_k), deduplicated.

    Assembled over the nonzero entries of the family tensor only; the
    eliminated families are very sparse, so this stays fast at T_5 scale.
    """
    dim = L.dim
    t = fam.tensor
    nz = [[[u for u in range(dim) if not t[i][j][u].is_zero()] for j in range(dim)]
          for i in range(dim)]
    seen = set()
    out = []
    for i in range(dim):
        for j in range(dim):
            nij = nz[i][j]
            for k in range(dim):
                if not nij and not nz[j][k]:
                    continue
                polys = [QuadPoly() for _ in range(dim)]
                touched = set()
                for u in nij:
                    e = t[i][j][u]
                    for l in nz[u][k]:
                        polys[l] = polys[l] + QuadPoly.from_product(e, t[u][k][l])
                        touched.add(l)
                for u in nz[j][k]:
                    e = t[j][k][u]
                    for l in nz[i][u]:
                        polys[l] = polys[l] - QuadPoly.from_product(e, t[i][u][l])
                        touched.add(l)
                for l in sorted(touched):
                    poly = polys[l]
                    if not poly.is_zero():
                        key = poly.canonical()
                        if key not in seen:
                            seen.add(key)
                            out.append(PolyConstraint(poly, "associativity"))
    return out


def satisfies_constraints(constraints: Sequence[PolyConstraint], assignment: dict) -> bool:
    return all(c.satisfied(assignment) for c in constraints)


def sample_solutions(fam: ParamFamily, constraints: Sequence[PolyConstraint],
                     seed: int, count: int,
                     value_range: tuple[int, int] = (-3, 3),
                     max_draws: int | None = None) -> list[tuple[dict, BilinearProduct]]:
    """Seeded search for small-integer points on the constraint variety.

    Draws alternate between dense assignments and sparse ones (most
    parameters zero); sparse draws hit the quadratic variety often enough to
    collect `count` distinct satisfying assignments quickly. Returns
    (assignment, product) pairs; every product passes is_tp_structure.
    """
    rng = random.Random(seed)
    lo, hi = value_range
    nonzero = [v for v in range(lo, hi + 1) if v]
    found = []
    seen = set()
    draws = 0
    if max_draws is None:
        # never draw much more than the assignment space itself holds
        space = (hi - lo + 1) ** min(fam.n_params, 8)
        budget = min(400 * count, 50 * space)
    else:
        budget = max_draws
    while len(found) < count and draws < budget:
        draws += 1
        if draws % 2:
            support = rng.sample(range(fam.n_params),
                                 rng.randint(0, min(2, fam.n_params)))
            assignment = {p: (rng.choice(nonzero) if f in support else 0)
                          for f, p in enumerate(fam.params)}
        else:
            assignment = {p: rng.randint(lo, hi) for p in fam.params}
        key = tuple(assignment[p] for p in fam.params)
        if key in seen:
            continue
        seen.add(key)
        if satisfies_constraints(constraints, assignment):
            found.append((assignment, fam.instantiate(assignment)))
    return found


# ---------------------------------------------------------------------------
# support pattern of structures on T_n
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportPattern:
    matched: bool
    a: Optional[tuple] = None  # n x n symmetric matrix over Q
    b: Optional[Fraction] = None
    violations: tuple[str, ...] = ()


def support_pattern(L: LieAlgebra, p: BilinearProduct) -> SupportPattern:
    """Match a product on T_n against the diagonal-pair pattern.

    Expected shape: products of diagonal units take values in the span of the
    identity matrix and the corner unit e(1,n), with corner coefficients
    (b, -b, b) at the (1,1)x(1,1), (1,1)x(n,n), (n,n)x(n,n) pairs and 0
    elsewhere; every product involving a strictly upper unit vanishes.
    """
    n = L.n
    if n is None or L.name != f"t{n}":
        raise ValueError("support_pattern is defined on the upper triangular algebras")
    if p.dim != L.dim:
        raise ValueError("dimension mismatch")
    diag = [L.unit_index[(i, i)] for i in range(1, n + 1)]
    corner = L.unit_index[(1, n)]
    violations = []
    a = [[Fraction(0)] * n for _ in range(n)]
    corner_coeff = {}
    for idx in range(L.dim):
        for jdx in range(idx, L.dim):
            v = p.d[idx][jdx]
            li, lj = L.labels[idx], L.labels[jdx]
            if li.i != li.j or lj.i != lj.j:
                if not is_zero_vector(v):
                    violations.append(f"nonzero product at non-diagonal pair ({li},{lj})")
                continue
            # decompose v = a*delta + b*e(1,n)
            diag_vals = {v[t] for t in diag}
            rest = [v[t] for t in range(L.dim) if t not in diag and t != corner]
            if len(diag_vals) != 1 or any(rest):
                violations.append(f"product at ({li},{lj}) outside <delta, e(1,n)>")
                continue
            a_val = diag_vals.pop()
            b_val = v[corner] if corner not in diag else 0
            a[li.i - 1][lj.i - 1] = a_val
            a[lj.i - 1][li.i - 1] = a_val
            key = (li.i, lj.i)
            corner_coeff[key] = b_val
            if key not in ((1, 1), (n, n), (1, n)) and b_val != 0:
                violations.append(f"corner coefficient at diagonal pair {key} must vanish")
    if n >= 2 and not violations:
        b11 = corner_coeff.get((1, 1), Fraction(0))
        bnn = corner_coeff.get((n, n), Fraction(0))
        b1n = corner_coeff.get((1, n), Fraction(0))
        if not (b11 == bnn == -b1n):
            violations.append(
                f"corner coefficients {b11},{b1n},{bnn} do not follow the (b,-b,b) signature")
        b = b11
    else:
        b = corner_coeff.get((1, 1), Fraction(0))
    if violations:
        return SupportPattern(False, violations=tuple(violations))
    return SupportPattern(True, a=tuple(tuple(r) for r in a), b=Fraction(b))


# ---------------------------------------------------------------------------
# automorphisms and transport
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Automorphism:
    """Bracket-preserving invertible map, with its exact inverse."""

    kind: str  # "conjugation" | "flip" | "trace_scaling" | "composite"
    map: LinearMap
    inverse: LinearMap

    @property
    def dim(self) -> int:
        return self.map.dim

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other."""
        return Automorphism(
            "composite",
            LinearMap(self.map.matrix * other.map.matrix),
            LinearMap(other.inverse.matrix * self.inverse.matrix),
        )


def is_lie_automorphism(L: LieAlgebra, g: LinearMap) -> bool:
    for i in range(L.dim):
        gi = g.column(i)
        for j in range(i + 1, L.dim):
            if g.apply(L.bracket_basis(i, j)) != L.bracket(gi, g.column(j)):
                return False
    return True


def _checked(L: LieAlgebra, kind: str, m: LinearMap, inv: LinearMap) -> Automorphism:
    if not is_lie_automorphism(L, m):
        raise ValueError(f"{kind} map does not preserve the bracket")
    return Automorphism(kind, m, inv)


def conjugation_automorphism(L: LieAlgebra, u: Sequence) -> Automorphism:
    """x -> u x u^{-1} for an invertible element u of a matrix-unit algebra."""
    um = to_matrix(L, u)
    try:
        um_inv = um.inverse()
    except ValueError:
        raise ValueError("conjugating element is singular") from None
    cols = []
    for b in range(L.dim):
        eb = to_matrix(L, L.basis_vector(b))
        cols.append(from_matrix(L, um * eb * um_inv))
    g = LinearMap.from_images(cols)
    cols_inv = []
    for b in range(L.dim):
        eb = to_matrix(L, L.basis_vector(b))
        cols_inv.append(from_matrix(L, um_inv * eb * um))
    return _checked(L, "conjugation", g, LinearMap.from_images(cols_inv))


def flip_automorphism(n: int) -> Automorphism:
    """The involutive automorphism x -> -J x^T J of T_n (J antidiagonal):
    e(i,j) -> -e(n+1-j, n+1-i)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    L = upper_triangular(n)
    images = []
    for lab in L.labels:
        v = [0] * L.dim
        v[L.unit_index[(n + 1 - lab.j, n + 1 - lab.i)]] = -1
        images.append(v)
    g = LinearMap.from_images(images)
    return _checked(L, "flip", g, g)


def trace_scaling_automorphism(n: int, factor) -> Automorphism:
    """On M_n: identity on traceless matrices, scaling by `factor` on the
    center; e(i,i) -> e(i,i) + (factor-1)/n * delta."""
    factor = Fraction(factor)
    if factor == 0:
        raise ValueError("factor must be nonzero")
    L = full_matrix(n)
    delta = L.delta

    def build(s):
        images = []
        for idx, lab in enumerate(L.labels):
            v = L.basis_vector(idx)
            if lab.i == lab.j:
                v = [x + Fraction(s - 1, n) * d for x, d in zip(v, delta)]
            images.append(v)
        return LinearMap.from_images(images)

    return _checked(L, "trace_scaling", build(factor), build(1 / factor))


def transport(L: LieAlgebra, p: BilinearProduct, g: Automorphism,
              check: bool = True) -> BilinearProduct:
    """The product x * y = g(g^{-1}(x) . g^{-1}(y)).

    With check=True (default) and a TP input, the output report is verified
    to stay TP, which also re-validates g end to end.
    """
    if p.dim != L.dim or g.dim != L.dim:
        raise ValueError("dimension mismatch")
    pre = [g.inverse.column(t) for t in range(L.dim)]
    tensor = [[None] * L.dim for _ in range(L.dim)]
    for i in range(L.dim):
        for j in range(i, L.dim):
            v = g.map.apply(p.apply(pre[i], pre[j]))
            tensor[i][j] = v
            tensor[j][i] = v
    out = BilinearProduct(tensor)
    if check:
        before = is_tp_structure(L, p).is_tp
        if before and not is_tp_structure(L, out).is_tp:
            raise RuntimeError("transport destroyed the TP property; map is not an automorphism")
    return out


# ---------------------------------------------------------------------------
# normal forms and invariants
# ---------------------------------------------------------------------------

POISSON_TYPE = "poisson_type"
CORNER_SUM = "corner_plus_poisson"


def normalize_tn(L: LieAlgebra, p: BilinearProduct) -> tuple[str, BilinearProduct]:
    """Canonical representative of a TP structure on T_n, n > 2.

    Reads the corner coefficient b off the support pattern; b = 0 gives a
    Poisson-type structure (already canonical), b != 0 is rescaled to b = 1
    by conjugating with (1/b - 1)e(1,1) + delta.
    """
    n = L.n
    if n is None or n <= 2 or L.name != f"t{n}":
        raise ValueError("normalize_tn applies to T_n with n > 2")
    if not is_tp_structure(L, p).is_tp:
        raise ValueError("product is not a transposed Poisson structure")
    pattern = support_pattern(L, p)
    if not pattern.matched:
        raise RuntimeError(
            "TP structure violates the diagonal support pattern: " + "; ".join(pattern.violations))
    if pattern.b == 0:
        return POISSON_TYPE, p
    u = [0] * L.dim
    for i in range(1, n + 1):
        u[L.unit_index[(i, i)]] = 1
    u[L.unit_index[(1, 1)]] += 1 / pattern.b - 1
    g = conjugation_automorphism(L, u)
    canonical = transport(L, p, g, check=False)
    after = support_pattern(L, canonical)
    if not after.matched or after.b != 1:
        raise RuntimeError("corner normalization failed to reach b = 1")
    return CORNER_SUM, canonical


def delta_membership_count(L: LieAlgebra, p: BilinearProduct) -> Optional[int]:
    """Number of ordered diagonal-unit pairs (i,j) with e(i,i).e(j,j) in the
    span of the identity matrix; None when the algebra has no full diagonal."""
    n = L.n
    delta = L.delta
    if n is None or delta is None:
        return None
    d0 = L.unit_index[(1, 1)]
    count = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            v = p.d[L.unit_index[(i, i)]][L.unit_index[(j, j)]]
            lam = v[d0]
            if all(x == lam * d for x, d in zip(v, delta)):
                count += 1
    return count


def invariant_signature(L: LieAlgebra, p: BilinearProduct) -> tuple:
    """Automorphism-invariant fingerprint of a TP structure.

    Components: trivial flag, Poisson-type flag, dim of the product image,
    dim of the product annihilator, corner flag (on T_n: whether the support
    pattern matches and has b != 0; None off T_n or on pattern mismatch),
    and the count of ordered diagonal pairs whose product is a multiple of
    the identity (None when there is no full diagonal).
    """
    corner_flag: Optional[bool] = None
    n = L.n
    if n is not None and L.name == f"t{n}":
        pattern = support_pattern(L, p)
        corner_flag = (pattern.b != 0) if pattern.matched else None
    return (
        p.is_zero(),
        is_poisson_type(L, p),
        product_image(p).dim,
        annihilator(p).dim,
        corner_flag,
        delta_membership_count(L, p),
    )


# ---------------------------------------------------------------------------
# isomorphism witnesses (refutation-only separation)
# ---------------------------------------------------------------------------


def find_isomorphism_witness(L: LieAlgebra, p1: BilinearProduct, p2: BilinearProduct,
                             numerators: range = range(-3, 4),
                             denominators: tuple[int, ...] = (1, 2, 3)) -> Optional[Automorphism]:
    """Bounded search for an automorphism g with transport(p1, g) == p2.

    Searches conjugations by elements with small rational entries, optionally
    composed with the flip (on T_n). A hit proves the structures isomorphic;
    exhaustion proves nothing.
    """
    n = L.n
    if n is None:
        raise ValueError("witness search is implemented for matrix-unit algebras")
    values = sorted({Fraction(a, b) for a in numerators for b in denominators})
    tri_positions = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)
                     if (i, j) in L.unit_index]
    flips = [None]
    if L.name == f"t{n}" and n >= 2:
        flips.append(flip_automorphism(n))

    def candidates(pos: int, current: list):
        if pos == len(tri_positions):
            yield list(current)
            return
        i, j = tri_positions[pos]
        for v in values:
            if i == j and v == 0:
                continue
            current.append(((i, j), v))
            yield from candidates(pos + 1, current)
            current.pop()

    for assignment in candidates(0, []):
        u = [0] * L.dim
        for (i, j), v in assignment:
            if v:
                u[L.unit_index[(i, j)]] = v
        try:
            g = conjugation_automorphism(L, u)
        except ValueError:
            continue
        for f in flips:
            gf = g if f is None else g.compose(f)
            if transport(L, p1, gf, check=False) == p2:
                return gf
    return None


def separate_structures(L: LieAlgebra, p1: BilinearProduct, p2: BilinearProduct,
                        **search_bounds) -> str:
    """"distinct" (signatures differ), "isomorphic" (witness found), or
    "not separated" (neither; no non-isomorphism claim is made)."""
    if invariant_signature(L, p1) != invariant_signature(L, p2):
        return "distinct"
    if find_isomorphism_witness(L, p1, p2, **search_bounds) is not None:
        return "isomorphic"
    return "not separated"
