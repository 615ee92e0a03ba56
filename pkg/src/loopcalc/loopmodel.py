"""The Sullivan model (∧V ⊗ ∧V̄, D) of the free loop space and its Hodge grading."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from loopcalc.cdga import (
    CohomologyTable,
    CutoffExceeded,
    ModelError,
    SullivanModel,
    cohomology_table,
    differential_matrix,
    validate,
)
from loopcalc.checks import Check, CheckReport
from loopcalc.gca import Derivation, Generator, GradedAlgebra, Poly, algebra_endomorphism, barred_name, commutator
from loopcalc.linalg import matmul

ASSUMPTIONS = (
    "The BV operator is modelled on cochains by the map induced by the degree -1 derivation s (s(v) = v_bar, s(v_bar) = 0).",
    "The constant-loop map is modelled by the retraction rho: v_bar -> 0, which splits the inclusion of the base model.",
)


class LoopModelDefect(RuntimeError):
    """An internal invariant of a constructed loop model failed."""


class LoopModel:
    """Cochain model of LM built from a Sullivan model of M."""

    weight_graded = True

    def __init__(self, base: SullivanModel, max_degree: int | None = None):
        self.base = base
        self.max_degree = base.max_degree if max_degree is None else max_degree
        gens = list(base.algebra.generators)
        taken = {g.name for g in gens}
        for g in base.algebra.generators:
            name = barred_name(g.name)
            if name in taken:
                raise ModelError(f"generator name {name!r} clashes with the barred copy of {g.name!r}")
            gens.append(Generator(name, g.degree - 1, base=g.name))
        self.algebra = GradedAlgebra(gens)
        alg = self.algebra
        self.s = Derivation(alg, -1, {g.name: alg.gen(barred_name(g.name)) for g in base.algebra.generators})
        dvals = {}
        for g in base.algebra.generators:
            dv = alg.embed(base.d.value(g.name))
            dvals[g.name] = dv
            dvals[barred_name(g.name)] = -self.s(dv)
        self.D = Derivation(alg, 1, dvals)

    @property
    def differential(self) -> Derivation:
        return self.D

    @property
    def dim(self):
        return self.base.dim

    def base_generators(self):
        return [g for g in self.algebra.generators if not g.barred]

    def weight(self, m) -> int:
        return self.algebra.monomial_weight(m)

    def include(self, p: Poly) -> Poly:
        """The inclusion ∧V -> 𝓛."""
        return self.algebra.embed(p)

    def retract(self, p: Poly) -> Poly:
        """The retraction 𝓛 -> ∧V killing barred generators."""
        return self.algebra.restrict(p, self.base.algebra)

    def phi(self, k: int):
        """The algebra endomorphism fixing v and scaling v_bar by k."""
        alg = self.algebra
        return algebra_endomorphism(alg, {g.name: k * alg.gen(g.name) for g in alg.generators if g.barred})

    def invariant_checks(self) -> CheckReport:
        alg = self.algebra
        rep = CheckReport("loop model invariants")
        for g in alg.generators:
            x = alg.gen(g.name)
            dd = self.D(self.D(x))
            rep.add(f"D^2({g.name}) = 0", not dd, str(dd) if dd else "")
            ds = self.D(self.s(x)) + self.s(self.D(x))
            rep.add(f"(Ds + sD)({g.name}) = 0", not ds, str(ds) if ds else "")
            if g.barred:
                base = g.base
                forced = -self.s(alg.embed(self.base.d.value(base)))
                rep.add(f"D({g.name}) = -s(d {base})", self.D.value(g.name) == forced, "")
            else:
                rep.add(f"D({g.name}) = d({g.name})", self.D.value(g.name) == alg.embed(self.base.d.value(g.name)), "")
            w = g.barred
            dw = self.D.value(g.name).weights()
            rep.add(f"D preserves weight on {g.name}", dw <= {int(w)}, str(sorted(dw)))
            sw = self.s.value(g.name).weights()
            rep.add(f"s raises weight on {g.name}", sw <= {int(w) + 1}, str(sorted(sw)))
        return rep

    def block_diagonal_checks(self, top: int) -> CheckReport:
        """Every matrix of D up to degree ``top`` preserves Hodge weight."""
        rep = CheckReport("weight block structure")
        w = self.algebra.monomial_weight
        for p in range(min(top, self.max_degree - 1) + 1):
            mat = differential_matrix(self, p)
            bad = [
                (self.algebra.format_monomial(mat.col_labels[j]), self.algebra.format_monomial(mat.row_labels[i]))
                for (i, j) in mat.entries
                if w(mat.row_labels[i]) != w(mat.col_labels[j])
            ]
            rep.add(f"D block-diagonal in degree {p}", not bad, str(bad[:1]) if bad else "")
        return rep


def build_loop_model(base: SullivanModel, max_degree: int | None = None) -> LoopModel:
    validate(base)
    for g in base.algebra.generators:
        if g.degree < 2:
            raise ModelError(f"generator {g.name} has degree < 2")
    L = LoopModel(base, max_degree)
    rep = L.invariant_checks()
    if not rep.passed:
        raise LoopModelDefect(rep.failures()[0].name)
    return L


def hodge_cohomology_table(L: LoopModel, pmax: int) -> CohomologyTable:
    return cohomology_table(L, pmax, by_weight=True)


def phi_k_check(L: LoopModel, k: int, pmax: int, table: CohomologyTable | None = None) -> CheckReport:
    if k < 2:
        raise ValueError("k must be at least 2")
    table = table or hodge_cohomology_table(L, pmax)
    phi = L.phi(k)
    rep = CheckReport(f"phi_{k} eigenvalues")
    for p in range(pmax + 1):
        weights = table.weights(p)
        for j, r in enumerate(table.representatives(p)):
            coords = table.reduce_in(phi(r), p)
            want = [Fraction(0)] * len(coords)
            want[j] = Fraction(k) ** weights[j]
            rep.add(f"phi_{k} on H^{p} class {j} (weight {weights[j]})", coords == want, "" if coords == want else str(coords))
    return rep


@dataclass
class GradedOperator:
    """Matrices of an operator on cohomology, keyed by source degree."""

    shift: int
    matrices: dict[int, list[list[Fraction]]] = field(default_factory=dict)

    def matrix(self, p: int):
        return self.matrices[p]


def induced_operator(table: CohomologyTable, op, shift: int, pmax: int) -> GradedOperator:
    if pmax + shift > table.pmax:
        raise CutoffExceeded(pmax + shift, table.pmax)
    out = GradedOperator(shift)
    for p in range(pmax + 1):
        out.matrices[p] = table.induced_matrix(op, p, shift)
    return out


def delta_dual(L: LoopModel, pmax: int, table: CohomologyTable | None = None) -> GradedOperator:
    """Matrices of the map induced by s, H^p -> H^(p-1), for p <= pmax."""
    table = table or hodge_cohomology_table(L, pmax)
    return induced_operator(table, L.s, -1, pmax)


def weight_shift_ok(table: CohomologyTable, mat, p: int, q: int, shift: int) -> bool:
    ws = table.weights(p)
    wt = table.weights(q) if 0 <= q <= table.pmax else []
    for i, row in enumerate(mat):
        for j, c in enumerate(row):
            if c and wt[i] != ws[j] + shift:
                return False
    return True


def delta_dual_checks(L: LoopModel, pmax: int, table: CohomologyTable | None = None) -> CheckReport:
    table = table or hodge_cohomology_table(L, pmax)
    op = delta_dual(L, pmax, table)
    rep = CheckReport("s-induced operator")
    for p in range(pmax + 1):
        m = op.matrices.get(p) or []
        rep.add(f"s on H^{p} raises weight by 1", weight_shift_ok(table, m, p, p - 1, +1), "")
        if p >= 2:
            m2 = op.matrices.get(p - 1) or []
            comp = matmul(m2, m, table.dim(p - 1)) if m and m2 else []
            ok = all(not c for row in comp for c in row)
            rep.add(f"s^2 = 0 on H^{p}", ok, "")
    return rep


def unit_homology_vector(L: LoopModel, table: CohomologyTable | None = None) -> list[Fraction]:
    """The functional on H^m(𝓛) given by pairing the retraction with the fundamental class."""
    m = L.dim
    if m is None:
        raise ValueError("the model declares no formal dimension")
    table = table or hodge_cohomology_table(L, m)
    base_table = cohomology_table(L.base, m, by_weight=False)
    if base_table.dim(m) != 1:
        raise ValueError(f"H^{m} of the base model has dimension {base_table.dim(m)}, not 1")
    vec = []
    for r in table.representatives(m):
        coords = base_table.reduce_in(L.retract(r), m)
        vec.append(coords[0])
    if not any(vec):
        raise LoopModelDefect("unit homology vector vanished")
    return vec


def weight_zero_matches_base(L: LoopModel, pmax: int, table: CohomologyTable | None = None) -> CheckReport:
    table = table or hodge_cohomology_table(L, pmax)
    base_table = cohomology_table(L.base, pmax, by_weight=False)
    rep = CheckReport("weight-0 column equals H(base)")
    for p in range(pmax + 1):
        a, b = table.dim(p, 0), base_table.dim(p)
        rep.add(f"dim H^{p}_(0) = dim H^{p}(base)", a == b, f"{a} vs {b}")
    return rep


def hodge_sum_checks(L: LoopModel, pmax: int, table: CohomologyTable) -> CheckReport:
    """Direct-sum identity: the weight blocks add up to the unsplit cohomology."""
    rep = CheckReport("Hodge direct sum")
    flat = cohomology_table(L, pmax, by_weight=False)
    for p in range(pmax + 1):
        rep.add(f"sum of weights = dim H^{p}", table.dim(p) == flat.dim(p), f"{table.dim(p)} vs {flat.dim(p)}")
    return rep


def s_commutator_with_D(L: LoopModel) -> Derivation:
    return commutator(L.D, L.s)
