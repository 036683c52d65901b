import random
from fractions import Fraction

import pytest

from tpa.classify import (
    CORNER_SUM,
    POISSON_TYPE,
    LinExpr,
    QuadPoly,
    associativity_constraints,
    conjugation_automorphism,
    delta_membership_count,
    find_isomorphism_witness,
    flip_automorphism,
    invariant_signature,
    normalize_tn,
    sample_solutions,
    satisfies_constraints,
    separate_structures,
    support_pattern,
    tp_ansatz,
    trace_scaling_automorphism,
    transport,
)
from tpa.liealg import abelian, full_matrix, upper_triangular
from tpa.products import (
    BilinearProduct,
    check_associative,
    check_transposed_leibniz,
    is_tp_structure,
    mn_trace_product,
    multiplications_in_delta_span,
    t2_catalog,
    tn_corner_product,
    tn_diagonal_family,
)


# -- symbolic layer ----------------------------------------------------------

def test_linexpr_arithmetic():
    a = LinExpr(1, {"x": 2})
    b = LinExpr(0, {"x": -2, "y": 1})
    s = a + b
    assert s.evaluate({"x": 7, "y": 3}) == 4
    assert (a - a).is_zero()
    assert a.scaled(0).is_zero()


def test_quadpoly_product_and_dedup_key():
    a = LinExpr(1, {"x": 1})
    b = LinExpr(0, {"y": 2})
    p = QuadPoly.from_product(a, b)
    assert p.evaluate({"x": 3, "y": 5}) == (1 + 3) * 10
    doubled = p + p
    assert doubled.canonical() == p.canonical()
    assert (p - p).is_zero()


# -- ansatz ------------------------------------------------------------------

def test_t3_ansatz_has_seven_parameters():
    L = upper_triangular(3)
    fam = tp_ansatz(L)
    assert fam.n_params == 7


def test_t3_ansatz_instantiations_are_compatible():
    rng = random.Random(2)
    L = upper_triangular(3)
    fam = tp_ansatz(L)
    for _ in range(10):
        assignment = {p: rng.randint(-3, 3) for p in fam.params}
        prod = fam.instantiate(assignment)
        assert check_transposed_leibniz(L, prod) is None
        assert multiplications_in_delta_span(L, prod)


def test_m2_ansatz_is_the_c_family():
    M = full_matrix(2)
    fam = tp_ansatz(M)
    assert fam.n_params == 1
    name = fam.params[0]
    prod = fam.instantiate({name: Fraction(3)})
    c = prod.value(M.unit_index[(1, 1)], M.unit_index[(1, 1)])[M.unit_index[(1, 1)]]
    assert c != 0
    assert prod == mn_trace_product(2, c)
    assert associativity_constraints(M, fam) == []


def test_abelian_dim1_family_is_unconstrained():
    L = abelian(1)
    fam = tp_ansatz(L)
    assert fam.n_params == 1
    assert associativity_constraints(L, fam) == []
    prod = fam.instantiate({fam.params[0]: 5})
    assert prod.value(0, 0) == [5]


def test_t3_constraints_never_involve_the_corner_parameter():
    L = upper_triangular(3)
    fam = tp_ansatz(L)
    corner_param = None
    for name in fam.params:
        probe = fam.instantiate({p: (1 if p == name else 0) for p in fam.params})
        pattern = support_pattern(L, probe)
        if pattern.matched and pattern.b != 0:
            corner_param = name
    assert corner_param is not None
    for constraint in associativity_constraints(L, fam):
        for key in constraint.poly.coeffs:
            assert corner_param not in key


@pytest.mark.parametrize("build,n", [(upper_triangular, 2), (upper_triangular, 3),
                                     (full_matrix, 2)])
def test_constraints_match_associativity_oracle(build, n):
    rng = random.Random(100 + n)
    L = build(n)
    fam = tp_ansatz(L)
    constraints = associativity_constraints(L, fam)
    agreements = 0
    for _ in range(50):
        assignment = {p: rng.randint(-2, 2) for p in fam.params}
        prod = fam.instantiate(assignment)
        assert satisfies_constraints(constraints, assignment) == \
            (check_associative(prod) is None)
        agreements += 1
    assert agreements == 50


def test_sampling_is_deterministic_and_tp():
    L = upper_triangular(3)
    fam = tp_ansatz(L)
    cons = associativity_constraints(L, fam)
    s1 = sample_solutions(fam, cons, seed=5, count=30)
    s2 = sample_solutions(fam, cons, seed=5, count=30)
    assert [a for a, _ in s1] == [a for a, _ in s2]
    assert len(s1) == 30
    for _, prod in s1:
        assert is_tp_structure(L, prod).is_tp


# -- support pattern ---------------------------------------------------------

def test_support_pattern_of_corner():
    L = upper_triangular(4)
    pattern = support_pattern(L, tn_corner_product(4))
    assert pattern.matched
    assert pattern.b == 1
    assert all(x == 0 for row in pattern.a for x in row)


def test_support_pattern_reads_diagonal_part():
    L = upper_triangular(3)
    a = [[0, 0, 0], [0, 1, 0], [0, 0, 0]]
    pattern = support_pattern(L, tn_diagonal_family(3, a, 0))
    assert pattern.matched and pattern.b == 0
    assert pattern.a[1][1] == 1 and pattern.a[0][0] == 0


def test_support_pattern_rejects_upper_support():
    L = upper_triangular(2)
    pattern = support_pattern(L, t2_catalog("T17_c", c=1))
    assert not pattern.matched
    assert pattern.violations


def test_support_pattern_rejects_bad_corner_signature():
    L = upper_triangular(3)
    i11 = L.unit_index[(1, 1)]
    p = BilinearProduct.from_pairs(L.dim, {(i11, i11): L.unit_vector(1, 3)})
    pattern = support_pattern(L, p)
    assert not pattern.matched
    assert any("signature" in v for v in pattern.violations)


# -- automorphisms -----------------------------------------------------------

def test_conjugation_by_identity():
    L = upper_triangular(3)
    g = conjugation_automorphism(L, L.delta)
    assert g.map.matrix == g.inverse.matrix
    assert g.map.apply(L.unit_vector(1, 2)) == L.unit_vector(1, 2)


def test_conjugation_scales_first_row():
    # conjugation by diag(1/2, 1, 1) halves e(1,j) for j > 1 and fixes e(1,1)
    L = upper_triangular(3)
    u = [0] * L.dim
    for i in range(1, 4):
        u[L.unit_index[(i, i)]] = 1
    u[L.unit_index[(1, 1)]] = Fraction(1, 2)
    g = conjugation_automorphism(L, u)
    assert g.map.apply(L.unit_vector(1, 2)) == [Fraction(1, 2) * x for x in L.unit_vector(1, 2)]
    assert g.map.apply(L.unit_vector(1, 1)) == L.unit_vector(1, 1)
    assert g.map.apply(L.unit_vector(2, 3)) == L.unit_vector(2, 3)


def test_conjugation_frozen_example():
    # u = delta + e12 on T_2 sends e11 to e11 - e12
    L = upper_triangular(2)
    u = [1, 1, 1]
    g = conjugation_automorphism(L, u)
    assert g.map.apply(L.unit_vector(1, 1)) == [1, -1, 0]


def test_conjugation_rejects_singular():
    L = upper_triangular(2)
    with pytest.raises(ValueError, match="singular"):
        conjugation_automorphism(L, [0, 1, 1])


def test_flip_images():
    L2 = upper_triangular(2)
    f2 = flip_automorphism(2)
    assert f2.map.apply(L2.unit_vector(1, 1)) == [-x for x in L2.unit_vector(2, 2)]
    L3 = upper_triangular(3)
    f3 = flip_automorphism(3)
    assert f3.map.apply(L3.unit_vector(1, 3)) == [-x for x in L3.unit_vector(1, 3)]
    # involution
    twice = f3.compose(f3)
    for j in range(L3.dim):
        assert twice.map.apply(L3.basis_vector(j)) == L3.basis_vector(j)


def test_transport_by_identity():
    L = upper_triangular(3)
    p = tn_corner_product(3)
    g = conjugation_automorphism(L, L.delta)
    assert transport(L, p, g) == p


def test_transport_rescales_corner_coefficient():
    L = upper_triangular(3)
    p = tn_diagonal_family(3, [[0] * 3] * 3, b=2)
    u = [0] * L.dim
    for i in range(1, 4):
        u[L.unit_index[(i, i)]] = 1
    u[L.unit_index[(1, 1)]] = Fraction(1, 2)  # (1/b - 1) e11 + delta at b = 2
    q = transport(L, p, conjugation_automorphism(L, u))
    assert support_pattern(L, q).b == 1


def test_trace_scaling_normalizes_c():
    for c in (2, -3):
        g = trace_scaling_automorphism(2, c)
        M = full_matrix(2)
        assert transport(M, mn_trace_product(2, c), g) == mn_trace_product(2, 1)


def test_trace_scaling_rejects_zero():
    with pytest.raises(ValueError, match="nonzero"):
        trace_scaling_automorphism(2, 0)


# -- normal forms and invariants ----------------------------------------------

def test_normalize_tags_and_idempotence():
    L = upper_triangular(3)
    poisson = tn_diagonal_family(3, [[1, 1, 0], [1, 1, 0], [0, 0, 0]], 0)
    tag, canon = normalize_tn(L, poisson)
    assert tag == POISSON_TYPE and canon == poisson
    corner = tn_diagonal_family(3, [[1, 1, 0], [1, 1, 0], [0, 0, 0]], 3)
    tag, canon = normalize_tn(L, corner)
    assert tag == CORNER_SUM
    assert support_pattern(L, canon).b == 1
    tag2, canon2 = normalize_tn(L, canon)
    assert tag2 == CORNER_SUM and canon2 == canon


def test_normalize_zero_product():
    L = upper_triangular(3)
    tag, canon = normalize_tn(L, BilinearProduct.zero(L.dim))
    assert tag == POISSON_TYPE and canon.is_zero()


def test_normalize_rejects_non_tp():
    L = upper_triangular(3)
    i11 = L.unit_index[(1, 1)]
    p = BilinearProduct.from_pairs(L.dim, {(i11, i11): L.basis_vector(i11)})
    with pytest.raises(ValueError, match="not a transposed Poisson"):
        normalize_tn(L, p)


def test_delta_membership_counts():
    L = upper_triangular(3)
    assert delta_membership_count(L, tn_corner_product(3)) == 5  # 9 - 4
    poisson = tn_diagonal_family(3, [[1, 2, 0], [2, 4, 0], [0, 0, 0]], 0)
    assert delta_membership_count(L, poisson) == 9


def test_signature_separates_tn_forms():
    for n in (3, 4):
        L = upper_triangular(n)
        corner = tn_corner_product(n)
        poisson = tn_diagonal_family(n, [[1 if i == j == 0 else 0 for j in range(n)]
                                         for i in range(n)], 0)
        assert invariant_signature(L, corner) != invariant_signature(L, poisson)


def test_signature_invariant_under_flip():
    L = upper_triangular(3)
    p = tn_corner_product(3)
    q = transport(L, p, flip_automorphism(3))
    assert invariant_signature(L, q) == invariant_signature(L, p)
    assert support_pattern(L, q).b == -1  # the flip negates b, not the flag


def test_separate_t2_groups():
    L = upper_triangular(2)
    assert separate_structures(L, t2_catalog("T17_0"), t2_catalog("T16")) == "distinct"
    assert separate_structures(L, t2_catalog("T16"), t2_catalog("T17_c", c=1)) == "distinct"


def test_witness_search_finds_known_conjugation():
    L = upper_triangular(2)
    p = t2_catalog("T16")
    u = [1, 1, 1]  # delta + e12
    q = transport(L, p, conjugation_automorphism(L, u))
    witness = find_isomorphism_witness(L, p, q, numerators=range(-1, 2), denominators=(1,))
    assert witness is not None
    assert transport(L, p, witness, check=False) == q


def test_witness_search_gives_up_honestly():
    # distinct c values in the third family share a signature; the bounded
    # search must not fabricate a witness
    L = upper_triangular(2)
    p1 = t2_catalog("T17_c", c=1)
    p2 = t2_catalog("T17_c", c=2)
    assert invariant_signature(L, p1) == invariant_signature(L, p2)
    assert separate_structures(
        L, p1, p2, numerators=range(-1, 2), denominators=(1, 2)) == "not separated"
