"""Pure-Python hot kernels. Mirrors ``_kernels.pyx`` line for line."""
from fractions import Fraction
from math import gcd


def mul_exponents(a, b, odd):
    """Multiply two canonical exponent vectors in a free graded-commutative algebra.

    Returns ``(sign, exponents)``; ``sign`` is 0 when an odd generator would be
    squared. The sign counts transpositions of odd factors of ``b`` past the odd
    factors of ``a`` that sit later in canonical order.
    """
    n = len(a)
    out = [0] * n
    parity = 0
    later_odd = 0
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


def _integer_row(row):
    den = 1
    for x in row:
        if x:
            d = x.denominator
            den = den * d // gcd(den, d)
    return [int(x * den) for x in row]


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref(rows, ncols):
    """Reduced row echelon form over Q by fraction-free Gauss-Jordan elimination.

    ``rows`` is a list of equal-length sequences of rationals. Pivot rows are picked
    by smallest bit-length in the pivot column. Returns ``(echelon_rows, pivots)``
    with zero rows dropped and every pivot entry equal to 1.
    """
    work = [_primitive(_integer_row(r)) for r in rows]
    nrows = len(work)
    pivots = []
    rank = 0
    for col in range(ncols):
        if rank == nrows:
            break
        best = -1
        best_bits = 0
        for r in range(rank, nrows):
            x = work[r][col]
            if x:
                bits = abs(x).bit_length()
                if best < 0 or bits < best_bits:
                    best = r
                    best_bits = bits
        if best < 0:
            continue
        work[rank], work[best] = work[best], work[rank]
        prow = work[rank]
        p = prow[col]
        for r in range(nrows):
            if r == rank:
                continue
            row = work[r]
            f = row[col]
            if f:
                g = gcd(p, f)
                pp = p // g
                ff = f // g
                work[r] = _primitive([pp * row[k] - ff * prow[k] for k in range(ncols)])
        pivots.append(col)
        rank += 1
    out = []
    for i in range(rank):
        row = work[i]
        p = row[pivots[i]]
        out.append([Fraction(x, p) if x else Fraction(0) for x in row])
    return out, pivots
