"""Exact linear algebra over Q on sparse, labelled vectors."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Sequence

from loopcalc.kernels import rref

Vector = dict  # column index -> Fraction, zeros omitted


class InconsistentSystem(ValueError):
    pass


class LinearSystemQ:
    """A sparse rational matrix with labelled rows and columns."""

    def __init__(self, entries: dict[tuple[int, int], Fraction], row_labels: Sequence[Hashable], col_labels: Sequence[Hashable]):
        self.row_labels = list(row_labels)
        self.col_labels = list(col_labels)
        self.entries = {k: Fraction(v) for k, v in entries.items() if v}
        self._rref = None

    @classmethod
    def from_columns(cls, columns: Sequence[Vector], row_labels, col_labels) -> LinearSystemQ:
        entries = {}
        for j, col in enumerate(columns):
            for i, v in col.items():
                entries[(i, j)] = v
        return cls(entries, row_labels, col_labels)

    @property
    def shape(self):
        return len(self.row_labels), len(self.col_labels)

    def dense(self) -> list[list[Fraction]]:
        nr, nc = self.shape
        out = [[Fraction(0)] * nc for _ in range(nr)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def echelon(self):
        if self._rref is None:
            self._rref = rref(self.dense(), len(self.col_labels))
        return self._rref

    def rank(self) -> int:
        return len(self.echelon()[1])

    def nullspace(self) -> list[Vector]:
        """Basis of the kernel, one vector per free column, in column order."""
        rows, pivots = self.echelon()
        nc = len(self.col_labels)
        pivot_set = set(pivots)
        basis = []
        for free in range(nc):
            if free in pivot_set:
                continue
            v = {free: Fraction(1)}
            for r, pc in zip(rows, pivots):
                x = r[free]
                if x:
                    v[pc] = -x
            basis.append(v)
        return basis

    def solve(self, b: Vector) -> Vector:
        """One solution x of A x = b (free variables set to zero)."""
        nr, nc = self.shape
        aug = self.dense()
        for i in range(nr):
            aug[i].append(Fraction(b.get(i, 0)))
        rows, pivots = rref(aug, nc + 1)
        if pivots and pivots[-1] == nc:
            raise InconsistentSystem("right-hand side is not in the column space")
        return {pc: r[nc] for r, pc in zip(rows, pivots) if r[nc]}

    def apply(self, x: Vector) -> Vector:
        out: dict[int, Fraction] = {}
        for (i, j), v in self.entries.items():
            c = x.get(j)
            if c:
                out[i] = out.get(i, 0) + v * c
        return {k: v for k, v in out.items() if v}


class Reducer:
    """Incremental echelon basis whose rows carry coordinate tags.

    Rows added with ``tag=None`` span a subspace that reduces to zero coordinates
    (the coboundaries); each tagged row is a new coordinate direction. ``reduce``
    returns the residual of a vector together with its coordinates.
    """

    def __init__(self, ncoords: int = 0):
        self.rows: list[tuple[int, Vector, Vector]] = []  # (pivot, row, coords)
        self.ncoords = ncoords

    def _reduce(self, vec: Vector, coords: Vector):
        vec = dict(vec)
        coords = dict(coords)
        for pivot, row, rc in self.rows:
            c = vec.get(pivot)
            if not c:
                continue
            for k, v in row.items():
                nv = vec.get(k, 0) - c * v
                if nv:
                    vec[k] = nv
                else:
                    vec.pop(k, None)
            for k, v in rc.items():
                nv = coords.get(k, 0) + c * v
                if nv:
                    coords[k] = nv
                else:
                    coords.pop(k, None)
        return vec, coords

    def add(self, vec: Vector, coord: int | None = None) -> Vector | None:
        """Insert ``vec``; return its nonzero residual, or None when dependent."""
        tag = {} if coord is None else {coord: Fraction(-1)}
        res, rc = self._reduce(vec, tag)
        if not res:
            return None
        pivot = min(res)
        p = res[pivot]
        row = {k: v / p for k, v in res.items()}
        rc = {k: v / p for k, v in rc.items()}
        # keep rows fully reduced so reduction order does not matter
        new_rows = []
        for pv, r, c in self.rows:
            x = r.get(pivot)
            if x:
                r = {k: r.get(k, 0) - x * row.get(k, 0) for k in set(r) | set(row)}
                r = {k: v for k, v in r.items() if v}
                c = {k: c.get(k, 0) - x * rc.get(k, 0) for k in set(c) | set(rc)}
                c = {k: v for k, v in c.items() if v}
            new_rows.append((pv, r, c))
        new_rows.append((pivot, row, rc))
        new_rows.sort(key=lambda t: t[0])
        self.rows = new_rows
        return res

    def reduce(self, vec: Vector) -> tuple[Vector, list[Fraction]]:
        res, coords = self._reduce(vec, {})
        # rows store -coords, so flip the sign back
        out = [Fraction(0)] * self.ncoords
        for k, v in coords.items():
            out[k] = -v
        return res, out


def dense_rank(matrix: list[list[Fraction]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    return len(rref([list(r) for r in matrix], len(matrix[0]))[1])


def matmul(a: list[list[Fraction]], b: list[list[Fraction]], inner: int) -> list[list[Fraction]]:
    """Product of an (m x inner) and an (inner x n) dense matrix; works for empty shapes."""
    n = len(b[0]) if b else 0
    return [[sum((a[i][k] * b[k][j] for k in range(inner)), Fraction(0)) for j in range(n)] for i in range(len(a))]


def transpose(a: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    return [[a[i][j] for i in range(len(a))] for j in range(ncols)]
