"""The end-to-end reproduction suite.

Each criterion function re-derives one classification statement from scratch
with exact arithmetic and returns a small report dict; `run_all` drives them
with one shared seed. The CLI `reproduce` command and the acceptance test
module are both thin wrappers around this module.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from . import __version__
from .classify import (
    associativity_constraints,
    conjugation_automorphism,
    delta_membership_count,
    flip_automorphism,
    invariant_signature,
    normalize_tn,
    sample_solutions,
    support_pattern,
    tp_ansatz,
    trace_scaling_automorphism,
    transport,
    CORNER_SUM,
    POISSON_TYPE,
)
from .halfderiv import (
    HALF,
    LinearMap,
    alpha_map,
    beta_map,
    delta_derivation_space,
    gamma_map,
    verify_entry_lemmas,
)
from .liealg import full_matrix, special_linear, trace, upper_triangular
from .linalg import is_zero_vector, span_equal
from .products import (
    BilinearProduct,
    T2_LABELS,
    T2_POISSON_TYPE,
    are_orthogonal,
    check_transposed_leibniz,
    is_tp_structure,
    mn_trace_product,
    multiplications_in_delta_span,
    orthogonal_sum,
    t2_catalog,
    tn_corner_product,
    tn_diagonal_family,
)

DEFAULT_SEED = 1729

TN_MAX = 6
MN_MAX = 4
SLN_MAX = 4
PATTERN_N_MAX = 5


def _report(cid, title, passed, details, t0):
    return {
        "id": cid,
        "title": title,
        "passed": bool(passed),
        "details": details,
        "elapsed_s": round(time.time() - t0, 3),
    }


# -- random generators shared by criteria 7 and 10 --------------------------

def random_poisson_type_tn(n: int, rng: random.Random) -> BilinearProduct:
    """Random Poisson-type structure on T_n: extension by zero of a rank-one
    product on the diagonal (rank-one symmetric matrices form an
    associativity-closed family, so every draw is a valid structure)."""
    s = [rng.randint(-3, 3) for _ in range(n)]
    a = [[s[i] * s[j] for j in range(n)] for i in range(n)]
    return tn_diagonal_family(n, a, 0)


def random_tn_automorphism(n: int, rng: random.Random, allow_flip: bool = True):
    u = [0] * upper_triangular(n).dim
    L = upper_triangular(n)
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if i == j:
                u[L.unit_index[(i, j)]] = rng.choice([-3, -2, -1, 1, 2, 3])
            else:
                u[L.unit_index[(i, j)]] = rng.randint(-3, 3)
    g = conjugation_automorphism(L, u)
    if allow_flip and rng.random() < 0.5:
        g = g.compose(flip_automorphism(n))
    return g


def random_mn_automorphism(n: int, rng: random.Random):
    L = full_matrix(n)
    if rng.random() < 0.5:
        return trace_scaling_automorphism(n, rng.choice([-3, -2, 2, 3, Fraction(1, 2)]))
    while True:
        u = [rng.randint(-2, 2) for _ in range(L.dim)]
        try:
            return conjugation_automorphism(L, u)
        except ValueError:
            continue


def random_symmetric_product(dim: int, rng: random.Random) -> BilinearProduct:
    pairs = {}
    for i in range(dim):
        for j in range(i, dim):
            pairs[(i, j)] = [rng.randint(-3, 3) for _ in range(dim)]
    return BilinearProduct.from_pairs(dim, pairs)


# -- the criteria ------------------------------------------------------------

def criterion_1(n_max: int, seed: int) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    for n in range(2, min(TN_MAX, n_max) + 1):
        d = len(delta_derivation_space(upper_triangular(n), HALF))
        details[f"t{n}"] = {"dim": d, "expected": n + 2}
        passed &= d == n + 2
    for n in range(2, min(MN_MAX, n_max) + 1):
        d = len(delta_derivation_space(full_matrix(n), HALF))
        details[f"m{n}"] = {"dim": d, "expected": 2}
        passed &= d == 2
    for n in range(2, min(SLN_MAX, n_max) + 1):
        d = len(delta_derivation_space(special_linear(n), HALF))
        details[f"sl{n}"] = {"dim": d, "expected": 1}
        passed &= d == 1
    return _report(1, "half-derivation space dimensions", passed, details, t0)


def criterion_2(n_max: int, seed: int) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    for n in range(2, min(TN_MAX, n_max) + 1):
        L = upper_triangular(n)
        computed = [phi.entries_flat() for phi in delta_derivation_space(L, HALF)]
        named = [LinearMap.identity(L.dim).entries_flat(), alpha_map(n).entries_flat()]
        named += [beta_map(n, i).entries_flat() for i in range(1, n + 1)]
        ok = span_equal(computed, named)
        details[f"t{n}"] = ok
        passed &= ok
    for n in range(2, min(MN_MAX, n_max) + 1):
        L = full_matrix(n)
        computed = [phi.entries_flat() for phi in delta_derivation_space(L, HALF)]
        named = [LinearMap.identity(L.dim).entries_flat(), gamma_map(n).entries_flat()]
        ok = span_equal(computed, named)
        details[f"m{n}"] = ok
        passed &= ok
    return _report(2, "computed bases span the named half-derivations", passed, details, t0)


def criterion_3(n_max: int, seed: int) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    for n in range(2, min(TN_MAX, n_max) + 1):
        rep = verify_entry_lemmas(n)
        details[f"t{n}"] = {"ok": rep.ok, "violations": list(rep.violations)}
        passed &= rep.ok
    return _report(3, "entry constraints hold for every computed basis map", passed, details, t0)


def criterion_4(n_max: int, seed: int) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    if n_max >= 2:
        L2 = upper_triangular(2)
        for label in T2_LABELS:
            rep = is_tp_structure(L2, t2_catalog(label, c=1))
            ok = rep.is_tp and rep.poisson_type == T2_POISSON_TYPE[label]
            details[f"t2:{label}"] = {
                "is_tp": rep.is_tp,
                "poisson_type": rep.poisson_type,
                "expected_poisson_type": T2_POISSON_TYPE[label],
            }
            passed &= ok
    for n in range(3, min(TN_MAX, n_max) + 1):
        rep = is_tp_structure(upper_triangular(n), tn_corner_product(n))
        details[f"tn_corner:{n}"] = {"is_tp": rep.is_tp, "poisson_type": rep.poisson_type}
        passed &= rep.is_tp and not rep.poisson_type
    for n in range(2, min(MN_MAX, n_max) + 1):
        rep = is_tp_structure(full_matrix(n), mn_trace_product(n))
        details[f"mn_trace:{n}"] = {"is_tp": rep.is_tp, "poisson_type": rep.poisson_type}
        passed &= rep.is_tp and rep.poisson_type
    return _report(4, "catalog structures verify with the stated Poisson-type flags",
                   passed, details, t0)


def criterion_5(n_max: int, seed: int, trials: int = 200) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    rng = random.Random(seed + 5)
    for n in (2, 3):
        if n > n_max:
            continue
        L = upper_triangular(n)
        discrepancies = 0
        holds = 0
        for _ in range(trials):
            p = random_symmetric_product(L.dim, rng)
            direct = check_transposed_leibniz(L, p) is None
            via_span = multiplications_in_delta_span(L, p)
            if direct != via_span:
                discrepancies += 1
            if direct:
                holds += 1
        # seed in a handful of known-compatible products so both sides of
        # the equivalence are exercised
        extras = [t2_catalog(lab) for lab in T2_LABELS] if n == 2 else \
            [tn_corner_product(3), tn_diagonal_family(3, [[1, 2, 3], [2, 4, 6], [3, 6, 9]], 5)]
        for p in extras:
            direct = check_transposed_leibniz(L, p) is None
            via_span = multiplications_in_delta_span(L, p)
            if direct != via_span:
                discrepancies += 1
            if direct:
                holds += 1
        details[f"t{n}"] = {"trials": trials + len(extras), "compatible": holds,
                            "discrepancies": discrepancies}
        passed &= discrepancies == 0
    return _report(5, "bracket compatibility iff multiplications in half-derivation span",
                   passed, details, t0)


def _is_mn_c_family(n: int, p: BilinearProduct) -> bool:
    L = full_matrix(n)
    c = p.d[L.unit_index[(1, 1)]][L.unit_index[(1, 1)]][L.unit_index[(1, 1)]]
    return p == mn_trace_product(n, c) if c else p.is_zero()


def criterion_6(n_max: int, seed: int, count: int = 100) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    for n in range(3, min(PATTERN_N_MAX, n_max) + 1):
        L = upper_triangular(n)
        fam = tp_ansatz(L)
        cons = associativity_constraints(L, fam)
        samples = sample_solutions(fam, cons, seed=seed + 6, count=count)
        violations = [a for a, p in samples if not support_pattern(L, p).matched]
        spot = [is_tp_structure(L, p).is_tp for _, p in samples[:10]]
        details[f"t{n}"] = {
            "params": fam.n_params,
            "constraints": len(cons),
            "samples": len(samples),
            "pattern_violations": len(violations),
            "spot_checked_tp": sum(spot),
        }
        passed &= len(samples) >= count and not violations and all(spot)
    for n in (2, 3):
        if n > min(MN_MAX, n_max):
            continue
        L = full_matrix(n)
        fam = tp_ansatz(L)
        cons = associativity_constraints(L, fam)
        samples = sample_solutions(fam, cons, seed=seed + 6, count=count)
        bad = [a for a, p in samples if not _is_mn_c_family(n, p)]
        details[f"m{n}"] = {"params": fam.n_params, "samples": len(samples),
                            "off_family": len(bad)}
        passed &= fam.n_params == 1 and not bad
    return _report(6, "sampled structures match the predicted support patterns",
                   passed, details, t0)


def criterion_7(n_max: int, seed: int, autos_per_family: int = 50) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    rng = random.Random(seed + 7)
    if n_max >= 3:
        L = upper_triangular(3)
        for b in (2, -1, Fraction(1, 3)):
            # rank-one Poisson part (the associativity-closed family) plus corner
            p = tn_diagonal_family(3, [[1, 1, 0], [1, 1, 0], [0, 0, 0]], b=b)
            tag, canon = normalize_tn(L, p)
            ok = tag == CORNER_SUM and support_pattern(L, canon).b == 1
            details[f"t3 normalize b={b}"] = ok
            passed &= ok
    for n in (2, 3):
        if n > min(MN_MAX, n_max):
            continue
        M = full_matrix(n)
        for c in (2, -3):
            g = trace_scaling_automorphism(n, c)
            ok = transport(M, mn_trace_product(n, c), g) == mn_trace_product(n, 1)
            details[f"m{n} rescale c={c}"] = ok
            passed &= ok
    if n_max >= 3:
        L = upper_triangular(3)
        targets = [tn_corner_product(3), random_poisson_type_tn(3, rng)]
        sigs = [invariant_signature(L, p) for p in targets]
        broken = 0
        for _ in range(autos_per_family):
            g = random_tn_automorphism(3, rng)
            for p, sig in zip(targets, sigs):
                if invariant_signature(L, transport(L, p, g, check=False)) != sig:
                    broken += 1
        details["t3 signature preservation"] = {"automorphisms": autos_per_family,
                                                "violations": broken}
        passed &= broken == 0
    if n_max >= 2:
        M = full_matrix(2)
        p = mn_trace_product(2, 1)
        sig = invariant_signature(M, p)
        broken = 0
        for _ in range(autos_per_family):
            g = random_mn_automorphism(2, rng)
            if invariant_signature(M, transport(M, p, g, check=False)) != sig:
                broken += 1
        details["m2 signature preservation"] = {"automorphisms": autos_per_family,
                                                "violations": broken}
        passed &= broken == 0
    return _report(7, "normalization reaches the canonical representatives; "
                      "signatures are automorphism-invariant", passed, details, t0)


def criterion_8(n_max: int, seed: int) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    rng = random.Random(seed + 8)
    for n in range(3, min(PATTERN_N_MAX, n_max) + 1):
        L = upper_triangular(n)
        corner_reps = [tn_corner_product(n)]
        s = [rng.randint(-2, 2) for _ in range(n)]
        a = [[s[i] * s[j] for j in range(n)] for i in range(n)]
        corner_reps.append(tn_diagonal_family(n, a, b=rng.choice([2, -1, 3])))
        poisson_reps = [random_poisson_type_tn(n, rng) for _ in range(3)]
        counts_corner = {delta_membership_count(L, p) for p in corner_reps}
        counts_poisson = {delta_membership_count(L, p) for p in poisson_reps}
        ok = counts_corner == {n * n - 4} and counts_poisson == {n * n}
        details[f"t{n}"] = {"corner_counts": sorted(counts_corner),
                            "poisson_counts": sorted(counts_poisson),
                            "expected": [n * n - 4, n * n]}
        passed &= ok
    if n_max >= 2:
        L2 = upper_triangular(2)
        group_reps = {
            "poisson": ["T09_00", "T17_0", "T10_0"],
            "corner_sum": ["T16", "T18", "T11_0"],
            "c_family_sum": ["T17_c", "T09_0c", "T19_c"],
        }
        sig = {g: [invariant_signature(L2, t2_catalog(lab)) for lab in labs]
               for g, labs in group_reps.items()}
        separated = True
        names = list(group_reps)
        for x in range(len(names)):
            for y in range(x + 1, len(names)):
                if set(sig[names[x]]) & set(sig[names[y]]):
                    separated = False
        details["t2 groups"] = {g: [str(s) for s in v] for g, v in sig.items()}
        passed &= separated
    return _report(8, "invariants separate the structure classes", passed, details, t0)


def criterion_9(n_max: int, seed: int, pairs: int = 20) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    rng = random.Random(seed + 9)
    for n in (2, 3):
        if n > min(MN_MAX, n_max):
            continue
        M = full_matrix(n)
        p = mn_trace_product(n, 1)
        delta = M.delta
        bad = 0
        for _ in range(pairs):
            a = [rng.randint(-3, 3) for _ in range(M.dim)]
            b = [rng.randint(-3, 3) for _ in range(M.dim)]
            expected = [trace(M, a) * trace(M, b) * x for x in delta]
            if p.apply(a, b) != expected:
                bad += 1
        details[f"m{n}"] = {"pairs": pairs, "violations": bad}
        passed &= bad == 0
    return _report(9, "the trace identity governs the full-matrix structure", passed, details, t0)


def criterion_10(n_max: int, seed: int, count: int = 20) -> dict:
    t0 = time.time()
    details = {}
    passed = True
    rng = random.Random(seed + 10)
    for n in range(3, min(PATTERN_N_MAX, n_max) + 1):
        L = upper_triangular(n)
        corner = tn_corner_product(n)
        failures = 0
        for _ in range(count):
            q = random_poisson_type_tn(n, rng)
            if not are_orthogonal(L, corner, q):
                failures += 1
                continue
            if not is_tp_structure(L, orthogonal_sum(L, corner, q)).is_tp:
                failures += 1
        details[f"t{n}"] = {"samples": count, "failures": failures}
        passed &= failures == 0
    return _report(10, "the corner structure is orthogonal to every Poisson-type structure",
                   passed, details, t0)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10)


def run_all(n_max: int = TN_MAX, seed: int = DEFAULT_SEED) -> dict:
    reports = [c(n_max, seed) for c in CRITERIA]
    return {
        "tool": "tpa",
        "version": __version__,
        "n_max": n_max,
        "seed": seed,
        "passed": all(r["passed"] for r in reports),
        "criteria": reports,
    }
