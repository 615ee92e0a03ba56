"""Finite BV-algebra presentations of the shifted loop homology of spheres.

A :class:`BVAlgebra` is a finite graded basis inside a degree window together
with structure constants for the loop product and a matrix for Δ. Degrees are
the shifted degrees of loop homology (homological degree minus the dimension of
the manifold). Elements are sparse dicts ``{basis index: Fraction}``.
"""
from __future__ import annotations

import functools
import itertools
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from loopcalc.cdga import CohomologyTable
from loopcalc.checks import CheckReport
from loopcalc.kernels import mul_exponents
from loopcalc.linalg import dense_rank

Element = dict


class WindowError(ValueError):
    """An operation would produce a degree outside the presentation window."""


def _add_into(out: dict, vec: dict, c=1):
    for k, v in vec.items():
        nv = out.get(k, 0) + c * v
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def _sgn(k: int) -> int:
    return -1 if k % 2 else 1


class BVAlgebra:
    def __init__(
        self,
        name: str,
        labels: Sequence[str],
        degrees: Sequence[int],
        product: dict[tuple[int, int], dict[int, Fraction]],
        delta: dict[int, dict[int, Fraction]],
        unit: int,
        window: tuple[int, int],
        weights: Sequence[int] | None = None,
        dim: int | None = None,
    ):
        self.name = name
        self.labels = list(labels)
        self.degrees = list(degrees)
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self.index) != len(self.labels):
            raise ValueError("duplicate basis labels")
        self.product = {k: {i: Fraction(c) for i, c in v.items() if c} for k, v in product.items()}
        self.product = {k: v for k, v in self.product.items() if v}
        self.delta = {k: {i: Fraction(c) for i, c in v.items() if c} for k, v in delta.items()}
        self.delta = {k: v for k, v in self.delta.items() if v}
        self.unit = unit
        self.window = (int(window[0]), int(window[1]))
        self.weights = list(weights) if weights is not None else None
        self.dim = dim
        for d in self.degrees:
            if not self.in_window(d):
                raise WindowError(f"basis degree {d} outside window {self.window}")

    # basics -----------------------------------------------------------------
    def __len__(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, BVAlgebra):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.degrees == other.degrees
            and self.product == other.product
            and self.delta == other.delta
            and self.unit == other.unit
            and self.window == other.window
            and self.weights == other.weights
            and self.dim == other.dim
        )

    def copy(self, **changes) -> BVAlgebra:
        kw = dict(
            name=self.name,
            labels=self.labels,
            degrees=self.degrees,
            product={k: dict(v) for k, v in self.product.items()},
            delta={k: dict(v) for k, v in self.delta.items()},
            unit=self.unit,
            window=self.window,
            weights=self.weights,
            dim=self.dim,
        )
        kw.update(changes)
        return BVAlgebra(**kw)

    def in_window(self, d: int) -> bool:
        return self.window[0] <= d <= self.window[1]

    def element(self, label: str, c=1) -> Element:
        return {self.index[label]: Fraction(c)}

    def of_degree(self, d: int) -> list[int]:
        return [i for i, x in enumerate(self.degrees) if x == d]

    def degree_of(self, x: Element) -> int | None:
        ds = {self.degrees[i] for i in x}
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop() if ds else None

    def format(self, x: Element) -> str:
        if not x:
            return "0"
        parts = []
        for i in sorted(x):
            c = x[i]
            parts.append(f"{c}*{self.labels[i]}" if c != 1 else self.labels[i])
        return " + ".join(parts)

    # operations -------------------------------------------------------------
    def mul_basis(self, i: int, j: int) -> dict:
        d = self.degrees[i] + self.degrees[j]
        if not self.in_window(d):
            raise WindowError(f"{self.labels[i]} * {self.labels[j]} has degree {d} outside {self.window}")
        return self.product.get((i, j), {})

    def mul(self, x: Element, y: Element) -> Element:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                _add_into(out, self.mul_basis(i, j), a * b)
        return out

    def Delta(self, x: Element) -> Element:
        out: dict = {}
        for i, a in x.items():
            if not self.in_window(self.degrees[i] + 1):
                raise WindowError(f"Δ({self.labels[i]}) leaves the window")
            _add_into(out, self.delta.get(i, {}), a)
        return out

    def bracket_basis(self, i: int, j: int) -> Element:
        key = (i, j)
        cache = self.__dict__.setdefault("_bracket_cache", {})
        if key in cache:
            hit = cache[key]
            if isinstance(hit, WindowError):
                raise hit
            return hit
        try:
            out = self._bracket_basis(i, j)
        except WindowError as exc:
            cache[key] = exc
            raise
        cache[key] = out
        return out

    def _bracket_basis(self, i: int, j: int) -> Element:
        ei, ej = {i: Fraction(1)}, {j: Fraction(1)}
        s = _sgn(self.degrees[i])
        out: dict = {}
        _add_into(out, self.Delta(self.mul(ei, ej)), s)
        _add_into(out, self.mul(self.Delta(ei), ej), -s)
        _add_into(out, self.mul(ei, self.Delta(ej)), -1)
        return out

    def bracket(self, x: Element, y: Element) -> Element:
        out: dict = {}
        for i, a in x.items():
            for j, b in y.items():
                _add_into(out, self.bracket_basis(i, j), a * b)
        return out

    def scale(self, x: Element, c) -> Element:
        return {k: c * v for k, v in x.items() if c * v}

    def add(self, *xs: Element) -> Element:
        out: dict = {}
        for x in xs:
            _add_into(out, x)
        return out


def loop_bracket(A: BVAlgebra, a: Element, b: Element) -> Element:
    """{a,b} = (-1)^|a| Δ(a•b) - (-1)^|a| Δ(a)•b - a•Δ(b)."""
    return A.bracket(a, b)


# axiom suite -----------------------------------------------------------------
class _Stop(Exception):
    pass


class _Tally:
    def __init__(self, rep: CheckReport, name: str, fail_fast: bool = False):
        self.rep = rep
        self.fail_fast = fail_fast
        self.name = name
        self.checked = 0
        self.skipped = 0
        self.witness = ""
        self.bad = 0

    def ok(self):
        self.checked += 1

    def fail(self, witness: str):
        self.checked += 1
        self.bad += 1
        if not self.witness:
            self.witness = witness
        if self.fail_fast:
            self.close()
            raise _Stop

    def close(self):
        detail = self.witness if self.bad else f"{self.checked} cases"
        if self.skipped:
            detail += f", {self.skipped} outside window"
        self.rep.add(self.name, self.bad == 0, detail)


def _run(tally: _Tally, fn: Callable[[], tuple[bool, str]]):
    try:
        ok, witness = fn()
    except WindowError:
        tally.skipped += 1
        return
    if ok:
        tally.ok()
    else:
        tally.fail(witness)


def check_axioms(A: BVAlgebra, fail_fast: bool = False) -> CheckReport:
    """Exhaustive BV-algebra axiom suite over every basis pair and triple in the window.

    With ``fail_fast`` the suite stops at the first failing case.
    """
    rep = CheckReport(f"BV axioms for {A.name}")
    try:
        _axioms(A, rep, fail_fast)
    except _Stop:
        pass
    return rep


def _axioms(A: BVAlgebra, rep: CheckReport, fail_fast: bool):
    n = len(A)
    Tally = functools.partial(_Tally, fail_fast=fail_fast)
    idx = range(n)
    deg = A.degrees
    L = A.labels
    e = [{i: Fraction(1)} for i in idx]

    t = Tally(rep, "product is degree-additive")
    for (i, j), v in sorted(A.product.items()):
        for k in v:
            if deg[k] != deg[i] + deg[j]:
                t.fail(f"{L[i]} * {L[j]} -> {L[k]}")
            else:
                t.ok()
    t.close()

    t = Tally(rep, "Δ has degree +1")
    for i, v in sorted(A.delta.items()):
        for k in v:
            if deg[k] != deg[i] + 1:
                t.fail(f"Δ({L[i]}) -> {L[k]}")
            else:
                t.ok()
    t.close()

    t = Tally(rep, "unit")
    for i in idx:
        _run(t, lambda: (A.mul(e[A.unit], e[i]) == e[i] and A.mul(e[i], e[A.unit]) == e[i], L[i]))
    t.close()

    t = Tally(rep, "graded commutativity")
    for i, j in itertools.product(idx, idx):
        _run(t, lambda: (A.mul(e[i], e[j]) == A.scale(A.mul(e[j], e[i]), _sgn(deg[i] * deg[j])), f"{L[i]}, {L[j]}"))
    t.close()

    t = Tally(rep, "associativity")
    for i, j, k in itertools.product(idx, idx, idx):
        _run(t, lambda: (A.mul(A.mul(e[i], e[j]), e[k]) == A.mul(e[i], A.mul(e[j], e[k])), f"{L[i]}, {L[j]}, {L[k]}"))
    t.close()

    t = Tally(rep, "Δ∘Δ = 0")
    for i in idx:
        _run(t, lambda: (not A.Delta(A.Delta(e[i])), L[i]))
    t.close()

    t = Tally(rep, "Δ(unit) = 0")
    _run(t, lambda: (not A.Delta(e[A.unit]), L[A.unit]))
    t.close()

    t = Tally(rep, "bracket antisymmetry")
    for i, j in itertools.product(idx, idx):
        def anti():
            lhs = A.bracket(e[i], e[j])
            rhs = A.scale(A.bracket(e[j], e[i]), -_sgn((deg[i] + 1) * (deg[j] + 1)))
            return lhs == rhs, f"{L[i]}, {L[j]}"
        _run(t, anti)
    t.close()

    t = Tally(rep, "Poisson identity")
    for a, b1, b2 in itertools.product(idx, idx, idx):
        def poisson():
            lhs = A.bracket(e[a], A.mul(e[b1], e[b2]))
            r1 = A.mul(A.bracket(e[a], e[b1]), e[b2])
            r2 = A.scale(A.mul(e[b1], A.bracket(e[a], e[b2])), _sgn(deg[b1] * (deg[a] + 1)))
            return lhs == A.add(r1, r2), f"{L[a]}, {L[b1]}, {L[b2]}"
        _run(t, poisson)
    t.close()

    t = Tally(rep, "Jacobi identity")
    for a, b, c in itertools.product(idx, idx, idx):
        def jacobi():
            lhs = A.bracket(e[a], A.bracket(e[b], e[c]))
            r1 = A.bracket(A.bracket(e[a], e[b]), e[c])
            r2 = A.scale(A.bracket(e[b], A.bracket(e[a], e[c])), _sgn((deg[a] + 1) * (deg[b] + 1)))
            return lhs == A.add(r1, r2), f"{L[a]}, {L[b]}, {L[c]}"
        _run(t, jacobi)
    t.close()

    if A.weights is not None:
        w = A.weights
        t = Tally(rep, "Δ lowers weight by 1")
        for i in idx:
            for k in A.delta.get(i, {}):
                if w[k] != w[i] - 1:
                    t.fail(f"Δ({L[i]}) -> {L[k]}")
                else:
                    t.ok()
            if not A.delta.get(i):
                t.ok()
        t.close()
        t = Tally(rep, "product weight <= sum of weights")
        exact = lower = 0
        for (i, j), v in sorted(A.product.items()):
            for k in v:
                if w[k] > w[i] + w[j]:
                    t.fail(f"{L[i]} * {L[j]} -> {L[k]}")
                else:
                    t.ok()
                    if w[k] == w[i] + w[j]:
                        exact += 1
                    else:
                        lower += 1
        t.close()
        rep.notes.append(f"product components of weight exactly i+j: {exact}; strictly lower: {lower}")
        rep.add("unit has weight 0", w[A.unit] == 0, str(w[A.unit]))


def gamma1_candidates(A: BVAlgebra) -> list[int]:
    """Weight-1 basis elements killed by Δ."""
    if A.weights is None:
        raise ValueError("theorem checks need a weight-annotated presentation")
    out = []
    for i in range(len(A)):
        if A.weights[i] != 1:
            continue
        try:
            if not A.Delta({i: Fraction(1)}):
                out.append(i)
        except WindowError:
            continue
    return out


def theorem_checks(A: BVAlgebra) -> CheckReport:
    """Weight behaviour of products and brackets with weight-1 Δ-closed elements."""
    rep = CheckReport(f"loop product theorems for {A.name}")
    cands = gamma1_candidates(A)
    rep.notes.append("candidates: " + ", ".join(A.labels[i] for i in cands))
    rep.add("at least one weight-1 Δ-closed element", bool(cands), "")
    w = A.weights
    L = A.labels
    deg = A.degrees
    n = len(A)
    for g in cands:
        eg = {g: Fraction(1)}
        t = _Tally(rep, f"{L[g]} • weight i lands in weight i+1")
        for a in range(n):
            def mult():
                prod = A.mul(eg, {a: Fraction(1)})
                bad = [L[k] for k in prod if w[k] != w[a] + 1]
                return not bad, f"{L[g]} * {L[a]} -> {bad}"
            _run(t, mult)
        t.close()
        t = _Tally(rep, f"{{{L[g]}, -}} preserves weight")
        for a in range(n):
            def keeps():
                br = A.bracket(eg, {a: Fraction(1)})
                bad = [L[k] for k in br if w[k] != w[a]]
                return not bad, f"{{{L[g]}, {L[a]}}} -> {bad}"
            _run(t, keeps)
        t.close()
        t = _Tally(rep, f"{{{L[g]}, -}} is a derivation of the product")
        for a, b in itertools.product(range(n), range(n)):
            def deriv():
                ea, eb = {a: Fraction(1)}, {b: Fraction(1)}
                lhs = A.bracket(eg, A.mul(ea, eb))
                rhs = A.add(
                    A.mul(A.bracket(eg, ea), eb),
                    A.scale(A.mul(ea, A.bracket(eg, eb)), _sgn(deg[a] * (deg[g] + 1))),
                )
                return lhs == rhs, f"{L[a]}, {L[b]}"
            _run(t, deriv)
        t.close()
    return rep


def crosscheck_additive(A: BVAlgebra, L, pmax: int, table: CohomologyTable) -> CheckReport:
    """Compare (degree, weight) dimensions, and Δ ranks, with the loop model."""
    if A.weights is None:
        raise ValueError("cross-check needs a weight-annotated presentation")
    m = L.dim
    if m is None or (A.dim is not None and A.dim != m):
        raise ValueError("presentation and loop model disagree on the dimension")
    rep = CheckReport(f"additive cross-check {A.name} vs loop model")
    lo = max(A.window[0], -m)
    hi = min(A.window[1], pmax - m)
    for q in range(lo, hi + 1):
        p = q + m
        here = [i for i in A.of_degree(q)]
        ws = sorted({A.weights[i] for i in here} | {w for w in table.weights(p)})
        for wt in ws:
            a = sum(1 for i in here if A.weights[i] == wt)
            b = table.dim(p, wt)
            rep.add(f"dim at degree {q}, weight {wt}", a == b, f"presentation {a}, model {b}")
    for q in range(lo, hi):
        p = q + m
        smat = table.induced_matrix(L.s, p + 1, -1)  # H^(p+1) -> H^p
        sw_src = table.weights(p + 1)
        sw_tgt = table.weights(p)
        for wt in sorted({A.weights[i] for i in A.of_degree(q)}):
            if wt < 1:
                continue
            src = [i for i in A.of_degree(q) if A.weights[i] == wt]
            tgt = [i for i in A.of_degree(q + 1) if A.weights[i] == wt - 1]
            dmat = [[A.delta.get(i, {}).get(k, Fraction(0)) for i in src] for k in tgt]
            rows = [r for r, x in enumerate(sw_tgt) if x == wt]
            cols = [c for c, x in enumerate(sw_src) if x == wt - 1]
            s_block = [[smat[r][c] for c in cols] for r in rows]
            ra, rb = dense_rank(dmat), dense_rank(s_block)
            rep.add(f"rank of Δ from degree {q}, weight {wt}", ra == rb, f"presentation {ra}, model {rb}")
    return rep


# builtin presentations -------------------------------------------------------
class _MonomialPresentation:
    """Graded-commutative monomials in generators of arbitrary integer degree, modulo monomial relations."""

    def __init__(self, gens: list[tuple[str, int]], weights: list[int], killed: Iterable[tuple[int, ...]] = ()):
        self.names = [g[0] for g in gens]
        self.degs = [g[1] for g in gens]
        self.odd = tuple(d % 2 != 0 for d in self.degs)
        self.gweights = weights
        self.killed = [tuple(k) for k in killed]

    def degree(self, m):
        return sum(e * d for e, d in zip(m, self.degs))

    def weight(self, m):
        return sum(e * w for e, w in zip(m, self.gweights))

    def dead(self, m):
        return any(all(a >= b for a, b in zip(m, k)) for k in self.killed)

    def label(self, m):
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e]
        return "*".join(parts) if parts else "1"

    def basis(self, lo: int, hi: int):
        span = hi - lo
        bounds = []
        for d, odd in zip(self.degs, self.odd):
            bounds.append(1 if odd else span // max(1, abs(d)) + 1)
        out = []
        for m in itertools.product(*(range(b + 1) for b in bounds)):
            if self.dead(m) or not (lo <= self.degree(m) <= hi):
                continue
            out.append(m)
        out.sort(key=lambda m: (self.degree(m), self.weight(m), m))
        return out

    def mul(self, a, b):
        sign, m = mul_exponents(a, b, self.odd)
        if not sign or self.dead(m):
            return 0, None
        return sign, m


def _build(name, pres: _MonomialPresentation, delta_rule, window, dim) -> BVAlgebra:
    mons = pres.basis(*window)
    where = {m: i for i, m in enumerate(mons)}
    product = {}
    for i, a in enumerate(mons):
        for j, b in enumerate(mons):
            sign, m = pres.mul(a, b)
            if sign and m in where:
                product[(i, j)] = {where[m]: Fraction(sign)}
    delta = {}
    for i, a in enumerate(mons):
        if pres.degree(a) + 1 > window[1]:
            continue
        for m, c in delta_rule(a).items():
            if c and not pres.dead(m):
                delta.setdefault(i, {})[where[m]] = Fraction(c)
    unit = where[tuple(0 for _ in pres.names)]
    return BVAlgebra(
        name,
        [pres.label(m) for m in mons],
        [pres.degree(m) for m in mons],
        product,
        delta,
        unit,
        window,
        [pres.weight(m) for m in mons],
        dim,
    )


def odd_sphere_bv(n: int, dmax: int = 12) -> BVAlgebra:
    """Λ[b] ⊗ Q[x], |b| = -n, |x| = n-1, Δ(b x^j) = j x^(j-1)."""
    pres = _MonomialPresentation([("b", -n), ("x", n - 1)], [0, 1])

    def rule(m):
        eb, ex = m
        if eb and ex:
            return {(0, ex - 1): ex}
        return {}

    return _build(f"s{n}", pres, rule, (-n, dmax), n)


def even_sphere_bv(n: int, dmax: int = 12) -> BVAlgebra:
    """Λ[b] ⊗ Q[a, v]/(a², ab, av), |a| = -n, |b| = -1, |v| = 2n-2, Δ(b v^k) = (2k+1) v^k."""
    pres = _MonomialPresentation(
        [("a", -n), ("b", -1), ("v", 2 * n - 2)],
        [0, 1, 1],
        killed=[(2, 0, 0), (1, 1, 0), (1, 0, 1)],
    )

    def rule(m):
        ea, eb, ev = m
        if eb and not ea:
            return {(0, 0, ev): 2 * ev + 1}
        return {}

    return _build(f"s{n}", pres, rule, (-n, dmax), n)


BUILTIN_BV = {"s2": 2, "s3": 3, "s5": 5, "s7": 7}


def builtin_bv(name: str, dmax: int = 12) -> BVAlgebra:
    try:
        n = BUILTIN_BV[name]
    except KeyError:
        raise KeyError(f"no builtin BV presentation {name!r}; known: {sorted(BUILTIN_BV)}") from None
    return odd_sphere_bv(n, dmax) if n % 2 else even_sphere_bv(n, dmax)
