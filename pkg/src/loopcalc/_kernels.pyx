# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled hot kernels. Same contracts as ``_kernels_py``."""
from fractions import Fraction
from math import gcd


def mul_exponents(tuple a, tuple b, tuple odd):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t j
    cdef long aj, bj
    cdef long parity = 0
    cdef long later_odd = 0
    out = [0] * n
    for j in range(n - 1, -1, -1):
        aj = a[j]
        bj = b[j]
        if odd[j]:
            if aj and bj:
                return 0, None
            if bj:
                parity += later_odd
            later_odd += aj
        out[j] = aj + bj
    return (-1 if parity & 1 else 1), tuple(out)


cdef list _integer_row(row):
    cdef object den = 1
    for x in row:
        if x:
            d = x.denominator
            den = den * d // gcd(den, d)
    return [int(x * den) for x in row]


cdef list _primitive(list row):
    cdef object g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref(rows, Py_ssize_t ncols):
    cdef list work = [_primitive(_integer_row(src)) for src in rows]
    cdef Py_ssize_t nrows = len(work)
    cdef list pivots = []
    cdef Py_ssize_t rank = 0
    cdef Py_ssize_t col, r, k, best, i
    cdef Py_ssize_t bits, best_bits
    cdef list prow, row, new
    for col in range(ncols):
        if rank == nrows:
            break
        best = -1
        best_bits = 0
        for r in range(rank, nrows):
            x = (<list>work[r])[col]
            if x:
                bits = abs(x).bit_length()
                if best < 0 or bits < best_bits:
                    best = r
                    best_bits = bits
        if best < 0:
            continue
        work[rank], work[best] = work[best], work[rank]
        prow = <list>work[rank]
        p = prow[col]
        for r in range(nrows):
            if r == rank:
                continue
            row = <list>work[r]
            f = row[col]
            if f:
                g = gcd(p, f)
                pp = p // g
                ff = f // g
                new = [None] * ncols
                for k in range(ncols):
                    new[k] = pp * row[k] - ff * prow[k]
                work[r] = _primitive(new)
        pivots.append(col)
        rank += 1
    out = []
    for i in range(rank):
        row = <list>work[i]
        p = row[<Py_ssize_t>pivots[i]]
        out.append([Fraction(x, p) if x else Fraction(0) for x in row])
    return out, pivots
