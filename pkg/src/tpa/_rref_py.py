"""Integer Gauss-Jordan elimination, pure-Python backend.

Same contract as the compiled kernel in ``_rref.pyx``; kept in lockstep with
it (the reduced row echelon form over Q is unique, so both backends must
produce identical output).
"""

from math import gcd


def _reduce_row(row, ncols):
    # divide out the content; returns the row gcd actually used
    g = 0
    for j in range(ncols):
        v = row[j]
        if v:
            g = gcd(g, v)
            if g == 1:
                return 1
    if g > 1:
        for j in range(ncols):
            row[j] //= g
    return g


def rref_int(rows, ncols):
    """Row-reduce a matrix of Python ints over Q.

    Returns ``(reduced, pivot_cols)``. Row ``r`` of ``reduced`` (for
    ``r < len(pivot_cols)``) is a primitive integer vector with a positive
    entry in column ``pivot_cols[r]`` and zeros in every other pivot column;
    the remaining rows are zero. Dividing each pivot row by its pivot entry
    yields the unique reduced row echelon form of the input over Q.

    The input is not mutated.
    """
    m = [list(row) for row in rows]
    nrows = len(m)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        # smallest-magnitude pivot keeps the integer entries from blowing up
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = m[i][c]
            if v:
                a = -v if v < 0 else v
                if best < 0 or a < best_abs:
                    best = i
                    best_abs = a
                    if a == 1:
                        break
        if best < 0:
            continue
        m[r], m[best] = m[best], m[r]
        prow = m[r]
        if prow[c] < 0:
            for j in range(c, ncols):
                prow[j] = -prow[j]
        _reduce_row(prow, ncols)
        p = prow[c]
        if p == 1:
            nz = [j for j in range(c, ncols) if prow[j]]
            for i in range(nrows):
                if i == r:
                    continue
                v = m[i][c]
                if v:
                    row = m[i]
                    for j in nz:
                        row[j] -= v * prow[j]
        else:
            for i in range(nrows):
                if i == r:
                    continue
                v = m[i][c]
                if v:
                    row = m[i]
                    for j in range(ncols):
                        row[j] = p * row[j] - v * prow[j]
                    _reduce_row(row, ncols)
        pivots.append(c)
        r += 1
    # final normalization: primitive rows with positive pivots
    for r, c in enumerate(pivots):
        prow = m[r]
        if prow[c] < 0:
            for j in range(ncols):
                prow[j] = -prow[j]
        _reduce_row(prow, ncols)
    return m, pivots
