"""Sullivan models: validation, bounded-degree bases, cohomology and cup products."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from loopcalc.gca import Derivation, Generator, GradedAlgebra, Monomial, Poly
from loopcalc.linalg import LinearSystemQ, Reducer


class ModelError(ValueError):
    """Base class for invalid differential graded models."""


class DifferentialNotSquareZero(ModelError):
    def __init__(self, generator: str, value):
        self.generator = generator
        self.value = value
        super().__init__(f"d(d({generator})) = {value} != 0")


class InhomogeneousDifferential(ModelError):
    def __init__(self, generator: str, value):
        self.generator = generator
        self.value = value
        super().__init__(f"d({generator}) = {value} is not homogeneous of the right degree")


class Degree1Generator(ModelError):
    def __init__(self, generator: str):
        self.generator = generator
        super().__init__(f"generator {generator} has degree 1; the model must be simply connected")


class CutoffExceeded(ValueError):
    def __init__(self, needed: int, cutoff: int):
        super().__init__(f"degree {needed} exceeds the cutoff {cutoff}")


class NotACocycleError(ValueError):
    pass


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get("LOOPCALC_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class ValidationReport:
    square_zero: bool = True
    homogeneous: bool = True
    simply_connected: bool = True
    minimal: bool = True
    linear_terms: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.square_zero and self.homogeneous and self.simply_connected


class SullivanModel:
    """A finitely generated commutative DGA (free on base generators) with a degree cutoff."""

    weight_graded = False

    def __init__(
        self,
        generators,
        differential: Mapping[str, Poly] | None = None,
        dim: int | None = None,
        max_degree: int = 13,
        check: bool = True,
    ):
        gens = [g if isinstance(g, Generator) else Generator(g[0], int(g[1])) for g in generators]
        self.algebra = GradedAlgebra(gens)
        self.dim = dim
        self.max_degree = max_degree
        raw = {k: v for k, v in (differential or {}).items()}
        for name, v in raw.items():
            if name not in self.algebra.index:
                raise ModelError(f"differential given for unknown generator {name!r}")
            if isinstance(v, Poly):
                v = self.algebra.embed(v)
                raw[name] = v
            g = self.algebra.generators[self.algebra.index[name]]
            if v and v.degrees() != {g.degree + 1}:
                raise InhomogeneousDifferential(name, v)
        self._d_values = raw
        self.d = Derivation(self.algebra, 1, raw)
        if check:
            validate(self)

    @property
    def generators(self):
        return self.algebra.generators

    @property
    def differential(self) -> Derivation:
        return self.d

    def __repr__(self):
        ds = "; ".join(f"d{k} = {v}" for k, v in self.d.values.items() if v)
        return f"SullivanModel({self.algebra!r}; {ds})"


def validate(model: SullivanModel) -> ValidationReport:
    """Check d∘d = 0, homogeneity and simple connectivity; report minimality."""
    alg = model.algebra
    report = ValidationReport()
    for g in alg.generators:
        if g.degree == 1:
            raise Degree1Generator(g.name)
    for g in alg.generators:
        v = model.d.value(g.name)
        if v and v.degrees() != {g.degree + 1}:
            raise InhomogeneousDifferential(g.name, v)
    for g in alg.generators:
        dd = model.d(model.d.value(g.name))
        if dd:
            raise DifferentialNotSquareZero(g.name, dd)
    for g in alg.generators:
        v = model.d.value(g.name)
        linear = {m: c for m, c in v.terms.items() if sum(m) == 1}
        if linear:
            report.minimal = False
            report.linear_terms[g.name] = str(Poly(alg, linear))
    return report


def basis(model, p: int, weight: int | None = None) -> list[Monomial]:
    """Canonical monomials of degree ``p`` (optionally of one Hodge weight)."""
    if p > model.max_degree:
        raise CutoffExceeded(p, model.max_degree)
    b = model.algebra.basis(p)
    if weight is None:
        return b
    w = model.algebra.monomial_weight
    return [m for m in b if w(m) == weight]


def differential_matrix(model, p: int, weight: int | None = None) -> LinearSystemQ:
    """Matrix of d: C^p -> C^(p+1); rows indexed by the target basis."""
    src = basis(model, p, weight)
    tgt = basis(model, p + 1, weight)
    where = {m: i for i, m in enumerate(tgt)}
    cols = []
    for m in src:
        img = model.differential.on_monomial(m)
        col = {}
        for mm, c in img.items():
            if mm not in where:
                raise ModelError(f"differential leaves the weight block at {model.algebra.format_monomial(m)}")
            col[where[mm]] = c
        cols.append(col)
    return LinearSystemQ.from_columns(cols, tgt, src)


def poly_to_vector(p: Poly, monomials: list[Monomial]) -> dict[int, Fraction]:
    where = {m: i for i, m in enumerate(monomials)}
    out = {}
    for m, c in p.terms.items():
        if m not in where:
            raise ValueError(f"{p} has a term outside the given basis")
        out[where[m]] = c
    return out


def vector_to_poly(alg: GradedAlgebra, v: Mapping[int, Fraction], monomials: list[Monomial]) -> Poly:
    return Poly(alg, {monomials[i]: c for i, c in v.items()})


class BlockCohomology:
    """Cohomology of one (degree, weight) block with a reducer to coordinates."""

    def __init__(self, degree: int, weight: int | None, monomials, reps, reducer, cocycle_dim, coboundary_dim):
        self.degree = degree
        self.weight = weight
        self.monomials = monomials
        self.representatives: list[Poly] = reps
        self.reducer = reducer
        self.cocycle_dim = cocycle_dim
        self.coboundary_dim = coboundary_dim

    @property
    def dim(self) -> int:
        return len(self.representatives)

    def reduce(self, z: Poly) -> list[Fraction]:
        vec = poly_to_vector(z, self.monomials)
        res, coords = self.reducer.reduce(vec)
        if res:
            raise NotACocycleError(f"{z} is not a cocycle in degree {self.degree}")
        return coords


def block_cohomology(model, p: int, weight: int | None = None) -> BlockCohomology:
    if p + 1 > model.max_degree:
        raise CutoffExceeded(p + 1, model.max_degree)
    alg = model.algebra
    mons = basis(model, p, weight)
    kernel = differential_matrix(model, p, weight).nullspace()
    reducer = Reducer()
    nbound = 0
    if p >= 1:
        for m in basis(model, p - 1, weight):
            img = model.differential.on_monomial(m)
            if img and reducer.add(poly_to_vector(Poly(alg, img), mons)) is not None:
                nbound += 1
    reps = []
    for vec in kernel:
        res = reducer.add(vec, coord=len(reps))
        if res is not None:
            reps.append(vector_to_poly(alg, res, mons))
    reducer.ncoords = len(reps)
    return BlockCohomology(p, weight, mons, reps, reducer, len(kernel), nbound)


class CohomologyTable:
    """Per-degree (and, for weight-graded models, per-weight) cohomology through ``pmax``.

    Coordinates of H^p list the blocks in increasing weight, each block in
    representative order.
    """

    def __init__(self, model, pmax: int, by_weight: bool | None = None):
        if by_weight is None:
            by_weight = model.weight_graded
        if pmax + 1 > model.max_degree:
            raise CutoffExceeded(pmax + 1, model.max_degree)
        self.model = model
        self.pmax = pmax
        self.by_weight = by_weight
        jobs = []
        for p in range(pmax + 1):
            if by_weight:
                jobs.extend((p, w) for w in range(_max_weight(model, p) + 1))
            else:
                jobs.append((p, None))
        nthreads = worker_count()
        if nthreads > 1:
            with ThreadPoolExecutor(nthreads) as pool:
                results = list(pool.map(lambda job: block_cohomology(model, *job), jobs))
        else:
            results = [block_cohomology(model, *job) for job in jobs]
        self.blocks: dict[tuple[int, int | None], BlockCohomology] = {job: r for job, r in zip(jobs, results)}
        self._layout: dict[int, list[tuple[int | None, int]]] = {}
        for p in range(pmax + 1):
            lay = []
            for key in sorted((k for k in self.blocks if k[0] == p), key=lambda k: -1 if k[1] is None else k[1]):
                blk = self.blocks[key]
                lay.extend((key[1], j) for j in range(blk.dim))
            self._layout[p] = lay

    def _check(self, p: int):
        if p > self.pmax:
            raise CutoffExceeded(p, self.pmax)

    def dim(self, p: int, weight: int | None = None) -> int:
        if p < 0:
            return 0
        self._check(p)
        if weight is None:
            return len(self._layout[p])
        blk = self.blocks.get((p, weight))
        return blk.dim if blk else 0

    def weights(self, p: int) -> list[int | None]:
        """Hodge weight of each coordinate of H^p."""
        if p < 0:
            return []
        self._check(p)
        return [w for w, _ in self._layout[p]]

    def representatives(self, p: int) -> list[Poly]:
        if p < 0:
            return []
        self._check(p)
        return [self.blocks[(p, w)].representatives[j] for w, j in self._layout[p]]

    def reduce(self, z: Poly) -> list[Fraction]:
        """Coordinates of a homogeneous cocycle; coboundaries reduce to zero."""
        alg = self.model.algebra
        if z.algebra != alg:
            z = alg.embed(z)
        p = z.degree()
        if p is None:
            raise ValueError("reduce needs a homogeneous element; use reduce_in for zero")
        return self.reduce_in(z, p)

    def reduce_in(self, z: Poly, p: int) -> list[Fraction]:
        if p < 0:
            if z:
                raise ValueError("nonzero element in negative degree")
            return []
        self._check(p)
        out = []
        for key in sorted((k for k in self.blocks if k[0] == p), key=lambda k: -1 if k[1] is None else k[1]):
            part = z if key[1] is None else z.weight_part(key[1])
            out.extend(self.blocks[key].reduce(part))
        if self.by_weight:
            covered = {k[1] for k in self.blocks if k[0] == p}
            stray = [w for w in z.weights() if w not in covered]
            if stray:
                raise NotACocycleError(f"{z} has weight components {stray} outside the table")
        return out

    def class_of(self, coords, p: int) -> Poly:
        """A cocycle representing the class with the given coordinates."""
        reps = self.representatives(p)
        out = self.model.algebra.zero()
        for c, r in zip(coords, reps):
            if c:
                out = out + c * r
        return out

    def cup(self, alpha, beta, p: int, q: int) -> list[Fraction]:
        """Cup product of classes given by coordinates in degrees p and q."""
        self._check(p + q)
        prod = self.class_of(alpha, p) * self.class_of(beta, q)
        return self.reduce_in(prod, p + q)

    def unit(self) -> list[Fraction]:
        return self.reduce_in(self.model.algebra.one(), 0)

    def betti(self) -> list[int]:
        return [self.dim(p) for p in range(self.pmax + 1)]

    def induced_matrix(self, op, p: int, shift: int) -> list[list[Fraction]]:
        """Matrix (target coords x source coords) of a chain map of degree ``shift`` on H^p."""
        q = p + shift
        reps = self.representatives(p)
        rows = self.dim(q) if 0 <= q <= self.pmax else 0
        mat = [[Fraction(0)] * len(reps) for _ in range(rows)]
        for j, r in enumerate(reps):
            img = op(r)
            if q < 0 or q > self.pmax:
                if img and q > self.pmax:
                    raise CutoffExceeded(q, self.pmax)
                continue
            coords = self.reduce_in(img, q)
            for i, c in enumerate(coords):
                mat[i][j] = c
        return mat


def _max_weight(model, p: int) -> int:
    barred_degrees = [g.degree for g in model.algebra.generators if g.barred]
    if not barred_degrees:
        return 0
    return p // min(barred_degrees)


def cohomology(model, p: int) -> BlockCohomology:
    """H^p of a model without weight splitting."""
    return block_cohomology(model, p, None)


def cohomology_table(model, pmax: int, by_weight: bool | None = None) -> CohomologyTable:
    return CohomologyTable(model, pmax, by_weight)


def cup(table: CohomologyTable, alpha, beta, p: int, q: int) -> list[Fraction]:
    return table.cup(alpha, beta, p, q)
