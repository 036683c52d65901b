import random
from fractions import Fraction

import pytest

from tpa.halfderiv import HALF, delta_derivation_space
from tpa.liealg import full_matrix, trace, upper_triangular
from tpa.linalg import is_zero_vector
from tpa.products import (
    BilinearProduct,
    T2_LABELS,
    T2_POISSON_TYPE,
    annihilator,
    are_orthogonal,
    as_extension_by_zero,
    catalog,
    catalog_algebra,
    check_associative,
    check_commutative,
    check_poisson_leibniz,
    check_transposed_leibniz,
    extension_by_zero,
    is_poisson_type,
    is_tp_structure,
    mn_trace_product,
    multiplications_in_delta_span,
    orthogonal_sum,
    plain_sum,
    product_image,
    t2_catalog,
    tn_corner_product,
    tn_diagonal_family,
)


def e11_squared_product(dim=3):
    """On T_2: e11.e11 = e11, everything else zero."""
    L = upper_triangular(2)
    i = L.unit_index[(1, 1)]
    return BilinearProduct.from_pairs(L.dim, {(i, i): L.basis_vector(i)})


def test_zero_product_axioms():
    L = upper_triangular(3)
    p = BilinearProduct.zero(L.dim)
    r = is_tp_structure(L, p)
    assert r.is_tp and r.trivial and r.poisson_type and r.poisson_leibniz


def test_associativity_of_mn_structure():
    assert check_associative(mn_trace_product(2)) is None


def test_e11_squared_is_associative_but_not_compatible():
    L = upper_triangular(2)
    p = e11_squared_product()
    assert check_associative(p) is None
    # LHS 2 e11.[e11,e12] = 0, RHS [e11.e11, e12] = e12
    assert check_transposed_leibniz(L, p) == (0, 0, 1)
    assert not is_tp_structure(L, p).is_tp


def test_corner_structure_satisfies_compatibility():
    L = upper_triangular(3)
    assert check_transposed_leibniz(L, tn_corner_product(3)) is None


def test_multiplication_operator_examples():
    L = upper_triangular(3)
    p = BilinearProduct.zero(L.dim)
    assert p.multiplication_operator([0] * L.dim).is_zero()
    # corner structure: multiplication by e11 sends e11 -> e13, e33 -> -e13
    op = tn_corner_product(3).multiplication_operator(L.unit_vector(1, 1))
    assert op.column(L.unit_index[(1, 1)]) == L.unit_vector(1, 3)
    assert op.column(L.unit_index[(3, 3)]) == [-x for x in L.unit_vector(1, 3)]
    assert op.column(L.unit_index[(2, 2)]) == [0] * L.dim
    # trace structure on M_2: multiplication by e11 is the gamma map
    M = full_matrix(2)
    op = mn_trace_product(2).multiplication_operator(M.unit_vector(1, 1))
    from tpa.halfderiv import gamma_map
    assert op == gamma_map(2)


@pytest.mark.parametrize("label", T2_LABELS)
def test_t2_catalog_is_tp_with_stated_poisson_flags(label):
    L = upper_triangular(2)
    r = is_tp_structure(L, t2_catalog(label, c=2))
    assert r.is_tp
    assert r.poisson_type == T2_POISSON_TYPE[label]
    assert r.trivial == (label == "T09_00")


def test_t2_catalog_frozen_tensors():
    L = upper_triangular(2)
    i11, i12, i22 = (L.unit_index[(1, 1)], L.unit_index[(1, 2)], L.unit_index[(2, 2)])
    t18 = t2_catalog("T18")
    assert t18.value(i11, i11) == [1, 1, 1]  # e12 + delta
    assert t18.value(i11, i22) == [0, -1, 0]
    assert t18.value(i22, i22) == [0, 1, 0]
    t19 = t2_catalog("T19_c", c=3)
    assert t19.value(i11, i22) == [-3, 0, 0]
    assert t19.value(i22, i22) == [3, 0, 0]
    assert t19.value(i11, i12) == [0, 3, 0]


def test_t2_catalog_validation():
    with pytest.raises(ValueError, match="c != 0"):
        t2_catalog("T17_c", c=0)
    with pytest.raises(ValueError, match="unknown"):
        t2_catalog("T99")


def test_catalog_dispatch():
    assert catalog("tn_form2", n=4) == tn_corner_product(4)
    assert catalog("tn_corner", n=4) == tn_corner_product(4)
    assert catalog("mn_trace", n=2) == mn_trace_product(2, 1)
    assert catalog_algebra("t2:T16") is upper_triangular(2)
    with pytest.raises(ValueError, match="unknown"):
        catalog("nope")
    with pytest.raises(ValueError, match="requires n"):
        catalog("tn_corner")


def test_tn_corner_frozen_tensor():
    L = upper_triangular(4)
    p = tn_corner_product(4)
    i11, i44 = L.unit_index[(1, 1)], L.unit_index[(4, 4)]
    e14 = L.unit_vector(1, 4)
    assert p.value(i11, i11) == e14
    assert p.value(i11, i44) == [-x for x in e14]
    assert p.value(i44, i44) == e14
    nonzero = [(i, j) for i in range(L.dim) for j in range(i, L.dim)
               if not is_zero_vector(p.value(i, j))]
    assert nonzero == sorted({(min(i11, i44), max(i11, i44)), (i11, i11), (i44, i44)})


def test_poisson_type_flags():
    T2 = upper_triangular(2)
    assert is_poisson_type(T2, t2_catalog("T17_0"))
    T3 = upper_triangular(3)
    assert not is_poisson_type(T3, tn_corner_product(3))
    assert is_poisson_type(T3, BilinearProduct.zero(T3.dim))
    assert is_poisson_type(full_matrix(3), mn_trace_product(3))


def test_poisson_leibniz():
    L = upper_triangular(2)
    assert check_poisson_leibniz(L, BilinearProduct.zero(L.dim)) is None
    assert check_poisson_leibniz(L, t2_catalog("T17_0")) is None
    # [e11.e11, e11] = [e12, e11] = -e12 while the right side vanishes
    assert check_poisson_leibniz(L, t2_catalog("T16")) == (0, 0, 0)


def test_poisson_type_implies_poisson_leibniz():
    rng = random.Random(5)
    L = upper_triangular(3)
    for _ in range(8):
        s = [rng.randint(-3, 3) for _ in range(3)]
        p = tn_diagonal_family(3, [[s[i] * s[j] for j in range(3)] for i in range(3)], 0)
        assert is_poisson_type(L, p)
        assert check_poisson_leibniz(L, p) is None


def test_extension_by_zero_mn_remark():
    M = full_matrix(2)
    p = extension_by_zero(M, [M.delta], {(0, 0): M.delta})
    # projection of e_ii onto <delta> is delta/2, so the products are delta/4
    assert p == mn_trace_product(2, Fraction(1, 4))
    r = is_tp_structure(M, p)
    assert r.is_tp and r.poisson_type


def test_extension_by_zero_t2():
    L = upper_triangular(2)
    V = [L.unit_vector(1, 1), L.unit_vector(2, 2)]
    p = extension_by_zero(L, V, {(0, 0): L.delta})
    assert p == t2_catalog("T17_0")


def test_extension_by_zero_zero_star():
    L = upper_triangular(2)
    V = [L.unit_vector(1, 1), L.unit_vector(2, 2)]
    assert extension_by_zero(L, V, {}).is_zero()


def test_extension_by_zero_validation():
    L = upper_triangular(2)
    V = [L.unit_vector(1, 1), L.unit_vector(2, 2)]
    with pytest.raises(ValueError, match="complement"):
        extension_by_zero(L, [L.unit_vector(1, 1)], {})
    with pytest.raises(ValueError, match="not central"):
        extension_by_zero(L, V, {(0, 0): L.unit_vector(1, 1)})
    # two independent diagonal squares are central-valued but not associative
    with pytest.raises(ValueError, match="not associative"):
        extension_by_zero(L, V, {(0, 0): L.delta, (1, 1): [x * 2 for x in L.delta]})


def test_extension_round_trip():
    rng = random.Random(11)
    L = upper_triangular(3)
    for _ in range(6):
        s = [rng.randint(-2, 2) for _ in range(3)]
        p = tn_diagonal_family(3, [[s[i] * s[j] for j in range(3)] for i in range(3)], 0)
        complement, star = as_extension_by_zero(L, p)
        assert extension_by_zero(L, complement, star) == p


def test_orthogonality_corner_vs_poisson():
    L = upper_triangular(3)
    corner = tn_corner_product(3)
    pt = tn_diagonal_family(3, [[1, 1, 0], [1, 1, 0], [0, 0, 0]], 0)
    assert are_orthogonal(L, corner, pt)
    total = orthogonal_sum(L, corner, pt)
    assert is_tp_structure(L, total).is_tp


def test_orthogonal_sum_with_zero():
    L = upper_triangular(3)
    corner = tn_corner_product(3)
    zero = BilinearProduct.zero(L.dim)
    assert are_orthogonal(L, corner, zero)
    assert orthogonal_sum(L, corner, zero) == corner


def test_c_family_sum_is_not_orthogonal():
    # the third T_2 group arises as a NON-orthogonal sum: the c-family part
    # does not annihilate the central values of the Poisson part
    L = upper_triangular(2)
    c_part = t2_catalog("T17_c", c=1)
    i22 = L.unit_index[(2, 2)]
    poisson_part = BilinearProduct.from_pairs(L.dim, {(i22, i22): [-x for x in L.delta]})
    assert is_tp_structure(L, poisson_part).is_tp
    assert not are_orthogonal(L, c_part, poisson_part)
    with pytest.raises(ValueError, match="not orthogonal"):
        orthogonal_sum(L, c_part, poisson_part)
    # yet their plain sum is exactly the catalog structure T09_0c
    assert plain_sum(c_part, poisson_part) == t2_catalog("T09_0c", c=1)


def test_plain_sum_may_break_associativity():
    L = upper_triangular(2)
    p1 = t2_catalog("T17_0")  # e11.e11 = delta
    i22 = L.unit_index[(2, 2)]
    p2 = BilinearProduct.from_pairs(L.dim, {(i22, i22): L.delta})
    assert is_tp_structure(L, p2).is_tp
    assert not are_orthogonal(L, p1, p2)
    assert check_associative(plain_sum(p1, p2)) is not None


def test_compatibility_iff_span_membership():
    rng = random.Random(23)
    for n in (2, 3):
        L = upper_triangular(n)
        delta_derivation_space(L, HALF)
        mismatches = 0
        for _ in range(40):
            pairs = {}
            for i in range(L.dim):
                for j in range(i, L.dim):
                    pairs[(i, j)] = [rng.randint(-3, 3) for _ in range(L.dim)]
            p = BilinearProduct.from_pairs(L.dim, pairs)
            direct = check_transposed_leibniz(L, p) is None
            if direct != multiplications_in_delta_span(L, p):
                mismatches += 1
        assert mismatches == 0
    # positive direction on known structures
    L = upper_triangular(2)
    for label in T2_LABELS:
        assert multiplications_in_delta_span(L, t2_catalog(label))


def test_trace_identity():
    rng = random.Random(31)
    for n in (2, 3):
        M = full_matrix(n)
        p = mn_trace_product(n, 1)
        for _ in range(20):
            a = [rng.randint(-3, 3) for _ in range(M.dim)]
            b = [rng.randint(-3, 3) for _ in range(M.dim)]
            assert p.apply(a, b) == [trace(M, a) * trace(M, b) * x for x in M.delta]


def test_image_and_annihilator_dims():
    L = upper_triangular(2)
    t16 = t2_catalog("T16")
    assert product_image(t16).dim == 1
    assert annihilator(t16).dim == 2
    t17c = t2_catalog("T17_c", c=1)
    assert product_image(t17c).dim == 3
    assert annihilator(t17c).dim == 0


def test_product_json_round_trip():
    p = t2_catalog("T18")
    data = p.to_json()
    assert BilinearProduct.from_json(data) == p
    assert all(entry["i"] <= entry["j"] for entry in data["products"])


def test_product_json_validation():
    with pytest.raises(ValueError, match="i <= j"):
        BilinearProduct.from_json(
            {"dim": 2, "products": [{"i": 1, "j": 0, "coeffs": {"0": "1"}}]})
    with pytest.raises(ValueError, match="out of range"):
        BilinearProduct.from_json(
            {"dim": 2, "products": [{"i": 0, "j": 1, "coeffs": {"9": "1"}}]})


def test_asymmetric_tensor_rejected():
    t = [[[0, 0], [1, 0]], [[0, 0], [0, 0]]]
    with pytest.raises(ValueError, match="not symmetric"):
        BilinearProduct(t)
    assert check_commutative(BilinearProduct.zero(2)) is None


def test_structure_report_serializes():
    import json
    L = upper_triangular(2)
    report = is_tp_structure(L, e11_squared_product())
    data = report.to_json()
    assert data["is_tp"] is False
    assert tuple(data["transposed_leibniz_failure"]) == (0, 0, 1)
    json.dumps(data)
