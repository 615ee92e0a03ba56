"""Cartan calculus on the loop model.

A derivation cocycle theta of degree -n on the base model gives two derivations
of the loop model:

* the contraction ``i_theta``: v -> 0, v_bar -> theta(v)   (degree 1 - n)
* the Lie derivative ``L_theta``: v -> theta(v), v_bar -> (-1)^n s(theta(v))   (degree -n)

With these signs ``L_theta = (-1)^n [s, i_theta]`` holds as an identity of
derivations, and on homology (transposes, with the BV operator dual to s) it
reads ``L = Δ∘e - (-1)^(n-1) e∘Δ``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from loopcalc.cdga import CohomologyTable, CutoffExceeded, SullivanModel, basis
from loopcalc.checks import CheckReport
from loopcalc.gca import Derivation, Poly, barred_name, commutator
from loopcalc.linalg import matmul, transpose
from loopcalc.loopmodel import (
    GradedOperator,
    LoopModel,
    delta_dual,
    hodge_cohomology_table,
    induced_operator,
    unit_homology_vector,
    weight_shift_ok,
)


class NotACocycle(ValueError):
    def __init__(self, generator: str, defect: Poly):
        self.generator = generator
        self.defect = defect
        super().__init__(f"[d, theta]({generator}) = {defect} != 0")


class CartanDefect(RuntimeError):
    """A Cartan-calculus invariant failed for constructed operators."""


@dataclass(frozen=True)
class DerivationCocycle:
    theta: Derivation
    n: int
    label: str = "theta"

    @property
    def degree(self) -> int:
        return -self.n


def make_cocycle(model: SullivanModel, values: Mapping[str, Poly], n: int, label: str = "theta") -> DerivationCocycle:
    """Certify that ``theta`` (given on generators, degree -n) commutes with d."""
    if n < 1:
        raise ValueError("a derivation cocycle needs degree -n with n >= 1")
    theta = Derivation(model.algebra, -n, values)
    defect = commutator(model.d, theta)
    for g in model.algebra.generators:
        v = defect.value(g.name)
        if v:
            raise NotACocycle(g.name, v)
    return DerivationCocycle(theta, n, label)


def sign(k: int) -> int:
    return -1 if k % 2 else 1


@dataclass
class CartanOperators:
    loop: LoopModel
    cocycle: DerivationCocycle
    i_theta: Derivation
    L_theta: Derivation
    table: CohomologyTable
    pmax: int
    i_op: GradedOperator
    L_op: GradedOperator
    s_op: GradedOperator

    @property
    def n(self) -> int:
        return self.cocycle.n


def contraction(L: LoopModel, c: DerivationCocycle) -> Derivation:
    alg = L.algebra
    vals = {barred_name(g.name): alg.embed(c.theta.value(g.name)) for g in L.base.algebra.generators}
    return Derivation(alg, 1 - c.n, vals)


def lie_derivative(L: LoopModel, c: DerivationCocycle) -> Derivation:
    alg = L.algebra
    sigma = sign(c.n)
    vals = {}
    for g in L.base.algebra.generators:
        tv = alg.embed(c.theta.value(g.name))
        vals[g.name] = tv
        vals[barred_name(g.name)] = sigma * L.s(tv)
    return Derivation(alg, -c.n, vals)


def _generator_checks(L: LoopModel, c: DerivationCocycle, i_t: Derivation, L_t: Derivation) -> CheckReport:
    rep = CheckReport("Cartan operators on generators")
    alg = L.algebra
    cartan = sign(c.n) * commutator(L.s, i_t)
    chain_i = commutator(L.D, i_t)
    chain_L = commutator(L.D, L_t)
    for g in alg.generators:
        x = alg.gen(g.name)
        rep.add(f"L = (-1)^n [s, i] on {g.name}", L_t(x) == cartan(x), f"{L_t(x)} vs {cartan(x)}")
        rep.add(f"[D, i] = 0 on {g.name}", not chain_i.value(g.name), str(chain_i.value(g.name)))
        rep.add(f"[D, L] = 0 on {g.name}", not chain_L.value(g.name), str(chain_L.value(g.name)))
        wi = i_t(x).weights()
        wl = L_t(x).weights()
        w = int(g.barred)
        rep.add(f"i lowers weight on {g.name}", wi <= {w - 1}, str(sorted(wi)))
        rep.add(f"L preserves weight on {g.name}", wl <= {w}, str(sorted(wl)))
    return rep


def cartan_operators(L: LoopModel, c: DerivationCocycle, pmax: int | None = None, table: CohomologyTable | None = None) -> CartanOperators:
    if c.theta.algebra != L.base.algebra:
        raise ValueError("cocycle is not defined on the base of this loop model")
    if pmax is None:
        pmax = L.max_degree - 1
    table = table or hodge_cohomology_table(L, pmax)
    i_t = contraction(L, c)
    L_t = lie_derivative(L, c)
    rep = _generator_checks(L, c, i_t, L_t)
    if not rep.passed:
        raise CartanDefect(rep.failures()[0].name)
    i_op = induced_operator(table, i_t, 1 - c.n, pmax)
    L_op = induced_operator(table, L_t, -c.n, pmax)
    s_op = delta_dual(L, pmax, table)
    return CartanOperators(L, c, i_t, L_t, table, pmax, i_op, L_op, s_op)


def _zero(rows: int, cols: int):
    return [[Fraction(0)] * cols for _ in range(rows)]


def _lin(a, b, cb):
    return [[x + cb * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def _compose(table: CohomologyTable, second: GradedOperator, first: GradedOperator, p: int):
    """Matrix of second∘first on H^p (zero when an intermediate degree is negative)."""
    q = p + first.shift
    r = q + second.shift
    rows = table.dim(r) if r >= 0 else 0
    cols = table.dim(p)
    if q < 0 or r < 0:
        return _zero(rows, cols)
    a = second.matrices[q]
    b = first.matrices[p]
    if not a or not b:
        return _zero(rows, cols)
    return matmul(a, b, table.dim(q))


def cartan_formula_check(ops: CartanOperators, pmax: int | None = None) -> CheckReport:
    """L = (-1)^n [s, i] on every monomial of degree <= pmax and on cohomology."""
    L = ops.loop
    n = ops.n
    pmax = ops.pmax if pmax is None else pmax
    if pmax > ops.pmax:
        raise CutoffExceeded(pmax, ops.pmax)
    alg = L.algebra
    rep = CheckReport("Cartan formula")
    s, i_t, L_t, D = L.s, ops.i_theta, ops.L_theta, L.D
    eps = sign(n)
    bad_cartan = bad_chain_i = bad_chain_L = 0
    first_bad = ""
    count = 0
    for p in range(pmax + 1):
        for m in basis(L, p):
            x = alg.monomial(m)
            count += 1
            lhs = L_t(x)
            rhs = eps * (s(i_t(x)) - sign(n - 1) * i_t(s(x)))
            if lhs != rhs:
                bad_cartan += 1
                first_bad = first_bad or alg.format_monomial(m)
            # D i - (-1)^(1-n) i D and D L - (-1)^n L D
            if D(i_t(x)) - sign(1 - n) * i_t(D(x)):
                bad_chain_i += 1
            if D(L_t(x)) - sign(n) * L_t(D(x)):
                bad_chain_L += 1
    rep.add(f"L = (-1)^n [s, i] on all {count} monomials of degree <= {pmax}", not bad_cartan, first_bad)
    rep.add(f"[D, i] = 0 on all monomials of degree <= {pmax}", not bad_chain_i, str(bad_chain_i))
    rep.add(f"[D, L] = 0 on all monomials of degree <= {pmax}", not bad_chain_L, str(bad_chain_L))

    table = ops.table
    for p in range(pmax + 1):
        lmat = ops.L_op.matrices[p]
        rows = table.dim(p - n) if p - n >= 0 else 0
        lmat = lmat if lmat else _zero(rows, table.dim(p))
        si = _compose(table, ops.s_op, ops.i_op, p)
        is_ = _compose(table, ops.i_op, ops.s_op, p)
        rhs = [[eps * x for x in row] for row in _lin(si, is_, -sign(n - 1))]
        rep.add(f"cohomology Cartan formula on H^{p}", lmat == rhs, "")
        # homology side: L^T = Δ∘e - (-1)^(n-1) e∘Δ with Δ = s^T and e = i^T
        cols = table.dim(p)
        lt = transpose(lmat, cols)
        de = transpose(is_, cols)  # (i s)^T = Δ e
        ed = transpose(si, cols)  # (s i)^T = e Δ
        hom = _lin(de, ed, -sign(n - 1))
        rep.add(f"homology Cartan formula L = Δe - (-1)^(n-1) eΔ into H_{p}", lt == hom, "")
        rep.add(
            f"i: weight -1 on H^{p}",
            weight_shift_ok(table, ops.i_op.matrices[p], p, p + 1 - n, -1),
        )
        rep.add(f"L: weight 0 on H^{p}", weight_shift_ok(table, ops.L_op.matrices[p], p, p - n, 0))
    return rep


@dataclass
class Gamma1Class:
    """A homology class given by coordinates dual to the cohomology basis of H^degree."""

    coords: list[Fraction]
    degree: int  # homological degree in H_*(LM)
    shifted_degree: int  # degree in the shifted homology H_{*+m}
    weights: list[int]  # Hodge weight of each coordinate

    @property
    def support_weights(self) -> set[int]:
        return {w for c, w in zip(self.coords, self.weights) if c}

    def is_zero(self) -> bool:
        return not any(self.coords)


def gamma1_class(L: LoopModel, c: DerivationCocycle, table: CohomologyTable | None = None) -> Gamma1Class:
    """(-1)^n times the transpose of the contraction applied to the unit homology vector."""
    m = L.dim
    if m is None:
        raise ValueError("the model declares no formal dimension")
    p = m + c.n - 1
    need = p + 1
    table = table or hodge_cohomology_table(L, need)
    if table.pmax < need:
        raise CutoffExceeded(need, table.pmax)
    unit = unit_homology_vector(L, table)
    i_t = contraction(L, c)
    mat = table.induced_matrix(i_t, p, 1 - c.n)  # H^p -> H^m
    eps = sign(c.n)
    coords = [eps * sum((unit[i] * mat[i][j] for i in range(len(unit))), Fraction(0)) for j in range(table.dim(p))]
    return Gamma1Class(coords, p, p - m, table.weights(p))


def gamma1_property_check(L: LoopModel, c: DerivationCocycle, table: CohomologyTable | None = None) -> CheckReport:
    m = L.dim
    p = m + c.n - 1
    table = table or hodge_cohomology_table(L, p + 1)
    g = gamma1_class(L, c, table)
    rep = CheckReport("Gamma_1 class")
    rep.add("class lies in weight 1", g.support_weights <= {1}, str(sorted(g.support_weights)))
    smat = table.induced_matrix(L.s, p + 1, -1)  # H^(p+1) -> H^p
    image = [sum((g.coords[j] * smat[j][k] for j in range(len(g.coords))), Fraction(0)) for k in range(table.dim(p + 1))]
    rep.add("class is killed by the transpose of s", not any(image), str(image))
    if g.is_zero():
        rep.notes.append("the class is zero, so both properties hold vacuously")
    return rep
