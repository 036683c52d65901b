# cython: language_level=3, boundscheck=False, wraparound=False
"""Integer Gauss-Jordan elimination, compiled backend.

Entries are arbitrary-precision Python ints; the win over ``_rref_py`` is
compiled index bookkeeping around the bignum arithmetic. Contract and output
are identical to ``_rref_py.rref_int``.
"""

from math import gcd


cdef int _reduce_row(list row, Py_ssize_t ncols) except -1:
    cdef Py_ssize_t j
    cdef object g = 0, v
    for j in range(ncols):
        v = row[j]
        if v != 0:
            g = gcd(g, v)
            if g == 1:
                return 0
    if g > 1:
        for j in range(ncols):
            row[j] = row[j] // g
    return 0


def rref_int(rows, Py_ssize_t ncols):
    """Row-reduce a matrix of Python ints over Q.

    See ``tpa._rref_py.rref_int`` for the full contract; this is the compiled
    implementation of the same algorithm.
    """
    cdef list m = [list(row) for row in rows]
    cdef Py_ssize_t nrows = len(m)
    cdef list pivots = []
    cdef list prow, row_i, nz
    cdef Py_ssize_t r = 0, c, i, j, best, k
    cdef object v, p, a, best_abs
    for c in range(ncols):
        if r == nrows:
            break
        best = -1
        best_abs = 0
        for i in range(r, nrows):
            v = (<list>m[i])[c]
            if v != 0:
                a = -v if v < 0 else v
                if best < 0 or a < best_abs:
                    best = i
                    best_abs = a
                    if a == 1:
                        break
        if best < 0:
            continue
        m[r], m[best] = m[best], m[r]
        prow = <list>m[r]
        if prow[c] < 0:
            for j in range(c, ncols):
                prow[j] = -prow[j]
        _reduce_row(prow, ncols)
        p = prow[c]
        if p == 1:
            nz = []
            for j in range(c, ncols):
                if prow[j] != 0:
                    nz.append(j)
            k = len(nz)
            for i in range(nrows):
                if i == r:
                    continue
                v = (<list>m[i])[c]
                if v != 0:
                    row_i = <list>m[i]
                    for j in range(k):
                        row_i[<Py_ssize_t>nz[j]] = row_i[<Py_ssize_t>nz[j]] - v * prow[<Py_ssize_t>nz[j]]
        else:
            for i in range(nrows):
                if i == r:
                    continue
                v = (<list>m[i])[c]
                if v != 0:
                    row_i = <list>m[i]
                    for j in range(ncols):
                        row_i[j] = p * row_i[j] - v * prow[j]
                    _reduce_row(row_i, ncols)
        pivots.append(c)
        r += 1
    for i in range(len(pivots)):
        c = <Py_ssize_t>pivots[i]
        prow = <list>m[i]
        if prow[c] < 0:
            for j in range(ncols):
                prow[j] = -prow[j]
        _reduce_row(prow, ncols)
    return m, pivots
