"""Independent oracles for the test suite.

Everything here is deliberately naive and kept separate from the package
implementations it checks: textbook Fraction elimination, rank via minors,
the derivation system assembled over all ordered pairs.
"""

from fractions import Fraction
from itertools import combinations

from tpa.liealg import LieAlgebra


def naive_rref(rows):
    """Textbook Gauss-Jordan over Fraction; returns (rows, pivot_cols)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        m[r] = [x / p for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def naive_det(rows):
    """Laplace expansion along the first row."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if n == 1:
        return Fraction(rows[0][0])
    total = Fraction(0)
    for j, x in enumerate(rows[0]):
        if x:
            minor = [[row[k] for k in range(n) if k != j] for row in rows[1:]]
            total += (-1) ** j * x * naive_det(minor)
    return total


def rank_by_minors(rows):
    """Largest k with a nonsingular k x k submatrix."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    for k in range(min(nrows, ncols), 0, -1):
        for ri in combinations(range(nrows), k):
            for ci in combinations(range(ncols), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                if naive_det(sub) != 0:
                    return k
    return 0


def naive_derivation_system_rows(L: LieAlgebra, weight):
    """Equation rows over all ordered basis pairs (not just i < j)."""
    w = Fraction(weight)
    dim = L.dim
    rows = []
    for i in range(dim):
        for j in range(dim):
            cij = L.bracket_basis(i, j)
            for k in range(dim):
                row = [Fraction(0)] * (dim * dim)
                for l, x in enumerate(cij):
                    if x:
                        row[k * dim + l] += x
                for l in range(dim):
                    x = L.c[l][j][k]
                    if x:
                        row[l * dim + i] -= w * x
                    y = L.c[i][l][k]
                    if y:
                        row[l * dim + j] -= w * y
                rows.append(row)
    return rows


def naive_nullity(rows, ncols):
    _, pivots = naive_rref(rows) if rows else ([], [])
    return ncols - len(pivots)


# known 3-dimensional Lie algebras (structure constants for i < j), used to
# manufacture random Jacobi-satisfying tensors by change of basis
SEED_ALGEBRAS_3D = {
    "abelian": {},
    "heisenberg": {(0, 1): {2: 1}},
    "r2_sum": {(0, 1): {1: 1}},
    "sl2_like": {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}},
    "solvable": {(0, 1): {1: 1}, (0, 2): {1: 1, 2: 1}},
}


def random_lie_algebra_3d(rng):
    """Random small-coefficient 3-dim Lie algebra: a known algebra in a
    random invertible integer basis (Jacobi survives base change)."""
    from tpa.liealg import BasisLabel
    from tpa.linalg import Matrix

    name = rng.choice(sorted(SEED_ALGEBRAS_3D))
    table = SEED_ALGEBRAS_3D[name]
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for (i, j), coeffs in table.items():
        for k, x in coeffs.items():
            c[i][j][k] = x
            c[j][i][k] = -x
    base = LieAlgebra([BasisLabel.abstract(f"x{k}") for k in range(3)], c, name=name)
    while True:
        g = Matrix([[rng.randint(-1, 1) for _ in range(3)] for _ in range(3)])
        try:
            g_inv = g.inverse()
            break
        except ValueError:
            continue
    cols = [g.column(j) for j in range(3)]
    new_c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for i in range(3):
        for j in range(3):
            new_c[i][j] = g_inv.apply(base.bracket(cols[i], cols[j]))
    return LieAlgebra([BasisLabel.abstract(f"y{k}") for k in range(3)], new_c,
                      name=f"{name}-conjugated")
