"""Free graded-commutative algebras over Q and their graded derivations.

Monomials are exponent tuples over the generators in canonical order
(degree, then name). Any sign produced by reordering factors is folded into the
coefficient when a product is formed, so two polynomials are equal exactly when
their term dictionaries are equal.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from loopcalc.kernels import mul_exponents

Monomial = tuple  # exponent vector over ``GradedAlgebra.generators``

BAR_SUFFIX = "_bar"


class AlgebraMismatch(ValueError):
    """Operands live in different algebras."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int
    base: str | None = None  # name of the base generator when this one is barred

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1

    @property
    def barred(self) -> bool:
        return self.base is not None

    def sort_key(self):
        return (self.degree, self.name)


def barred_name(name: str) -> str:
    return name + BAR_SUFFIX


class GradedAlgebra:
    """The free graded-commutative algebra on a finite set of generators."""

    def __init__(self, generators: Iterable[Generator]):
        gens = sorted(generators, key=Generator.sort_key)
        names = [g.name for g in gens]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate generator names: {dup}")
        by_name = {g.name: g for g in gens}
        for g in gens:
            if g.degree < 1:
                raise ValueError(f"generator {g.name} has degree {g.degree} < 1")
            if g.barred and g.base in by_name and by_name[g.base].degree - 1 != g.degree:
                raise ValueError(f"barred generator {g.name} must have degree {by_name[g.base].degree - 1}")
        self.generators: tuple[Generator, ...] = tuple(gens)
        self.index = {g.name: i for i, g in enumerate(gens)}
        self.degrees = tuple(g.degree for g in gens)
        self.odd = tuple(g.odd for g in gens)
        self.barred_mask = tuple(g.barred for g in gens)
        self._basis_cache: dict[int, list[Monomial]] = {}
        self._lock = threading.Lock()

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"GradedAlgebra({inner})"

    @property
    def ngens(self) -> int:
        return len(self.generators)

    # monomials ------------------------------------------------------------
    @property
    def unit_monomial(self) -> Monomial:
        return (0,) * self.ngens

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def monomial_weight(self, m: Monomial) -> int:
        """Number of barred factors (the Hodge weight)."""
        return sum(e for e, b in zip(m, self.barred_mask) if b)

    def mul_monomials(self, a: Monomial, b: Monomial):
        return mul_exponents(a, b, self.odd)

    def basis(self, p: int) -> list[Monomial]:
        """All canonical monomials of total degree ``p``, sorted by (weight, exponents)."""
        if p < 0:
            return []
        with self._lock:
            cached = self._basis_cache.get(p)
        if cached is not None:
            return cached
        out: list[Monomial] = []
        n = self.ngens
        exps = [0] * n

        def rec(i: int, remaining: int):
            if i == n:
                if remaining == 0:
                    out.append(tuple(exps))
                return
            d = self.degrees[i]
            top = 1 if self.odd[i] else remaining // d
            for e in range(min(top, remaining // d), -1, -1):
                exps[i] = e
                rec(i + 1, remaining - e * d)
            exps[i] = 0

        rec(0, p)
        out.sort(key=lambda m: (self.monomial_weight(m), m))
        with self._lock:
            self._basis_cache[p] = out
        return out

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    # constructors ---------------------------------------------------------
    def zero(self) -> Poly:
        return Poly(self, {})

    def one(self) -> Poly:
        return Poly(self, {self.unit_monomial: Fraction(1)})

    def scalar(self, c) -> Poly:
        return Poly(self, {self.unit_monomial: Fraction(c)})

    def gen(self, name: str) -> Poly:
        try:
            i = self.index[name]
        except KeyError:
            raise KeyError(f"unknown generator {name!r}") from None
        m = [0] * self.ngens
        m[i] = 1
        return Poly(self, {tuple(m): Fraction(1)})

    def monomial(self, m: Monomial, coeff=1) -> Poly:
        return Poly(self, {tuple(m): Fraction(coeff)})

    def embed(self, p: Poly) -> Poly:
        """Transport ``p`` from a sub-algebra whose generators are a subset of ours."""
        if p.algebra == self:
            return p
        where = []
        for g in p.algebra.generators:
            j = self.index.get(g.name)
            if j is None or self.generators[j].degree != g.degree:
                raise AlgebraMismatch(f"generator {g.name} is not in {self!r}")
            where.append(j)
        # canonical order of the sub-algebra is inherited, so no signs appear
        terms = {}
        for m, c in p.terms.items():
            out = [0] * self.ngens
            for e, j in zip(m, where):
                out[j] = e
            terms[tuple(out)] = c
        return Poly(self, terms)

    def restrict(self, p: Poly, sub: GradedAlgebra) -> Poly:
        """Drop every term of ``p`` involving a generator outside ``sub``."""
        where = [self.index[g.name] for g in sub.generators]
        keep = set(where)
        terms = {}
        for m, c in p.terms.items():
            if any(e for i, e in enumerate(m) if e and i not in keep):
                continue
            terms[tuple(m[j] for j in where)] = c
        return Poly(sub, terms)


class Poly:
    """A finite Q-linear combination of canonical monomials. Immutable."""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self._hash = None

    # arithmetic -----------------------------------------------------------
    def _check(self, other: Poly):
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra!r} vs {other.algebra!r}")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = self.algebra.scalar(other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.algebra, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly(self.algebra, {m: c * v for m, v in self.terms.items()})
        return mul(self, other)

    def __rmul__(self, other):
        c = Fraction(other)
        return Poly(self.algebra, {m: c * v for m, v in self.terms.items()})

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.algebra.scalar(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # grading --------------------------------------------------------------
    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def weights(self) -> set[int]:
        return {self.algebra.monomial_weight(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """Degree of a homogeneous nonzero polynomial; None for zero."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) > 1:
            raise ValueError(f"{self} is not homogeneous")
        return ds.pop()

    def weight_part(self, w: int) -> Poly:
        alg = self.algebra
        return Poly(alg, {m: c for m, c in self.terms.items() if alg.monomial_weight(m) == w})

    def degree_part(self, p: int) -> Poly:
        alg = self.algebra
        return Poly(alg, {m: c for m, c in self.terms.items() if alg.monomial_degree(m) == p})

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    # printing -------------------------------------------------------------
    def sorted_terms(self):
        alg = self.algebra
        return sorted(self.terms.items(), key=lambda t: (alg.monomial_degree(t[0]), tuple(-e for e in t[0])))

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms()):
            mono = self.algebra.format_monomial(m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono == "1":
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if i == 0:
                out.append(body if sign == "+" else "-" + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


def mul(a: Poly, b: Poly) -> Poly:
    """Graded-commutative product with Koszul signs."""
    a._check(b)
    alg = a.algebra
    out: dict[Monomial, Fraction] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            sign, m = alg.mul_monomials(ma, mb)
            if sign:
                out[m] = out.get(m, 0) + sign * ca * cb
    return Poly(alg, out)


def _split(m: Monomial, i: int):
    """Write ``m`` as prefix * x_i^e * suffix with every part canonical."""
    n = len(m)
    prefix = m[:i] + (0,) * (n - i)
    suffix = (0,) * (i + 1) + m[i + 1:]
    return prefix, suffix


class Derivation:
    """A graded derivation determined by its values on generators.

    The extension to monomials obeys
    ``theta(xy) = theta(x) y + (-1)^(deg(theta) |x|) x theta(y)``
    and is memoized per monomial behind a lock, so concurrent readers are safe.
    """

    def __init__(self, algebra: GradedAlgebra, degree: int, values: Mapping[str, Poly] | None = None):
        self.algebra = algebra
        self.degree = degree
        vals: list[Poly] = []
        values = dict(values or {})
        unknown = set(values) - set(algebra.index)
        if unknown:
            raise AlgebraMismatch(f"values given for unknown generators {sorted(unknown)}")
        for g in algebra.generators:
            v = values.get(g.name)
            if v is None:
                v = algebra.zero()
            elif not isinstance(v, Poly):
                v = algebra.scalar(v)
            else:
                v = algebra.embed(v)
            if v and v.degrees() != {g.degree + degree}:
                raise ValueError(
                    f"value on {g.name} must be homogeneous of degree {g.degree + degree}, got {v}"
                )
            vals.append(v)
        self._values = tuple(vals)
        self._cache: dict[Monomial, dict] = {}
        self._lock = threading.Lock()

    def value(self, name: str) -> Poly:
        return self._values[self.algebra.index[name]]

    @property
    def values(self) -> dict[str, Poly]:
        return {g.name: v for g, v in zip(self.algebra.generators, self._values)}

    def is_zero(self) -> bool:
        return not any(self._values)

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self._values == other._values
            and (self.degree == other.degree or self.is_zero())
        )

    def __hash__(self):
        return hash((self.algebra, self._values))

    def __repr__(self):
        vals = ", ".join(f"{k} -> {v}" for k, v in self.values.items() if v)
        return f"Derivation(deg={self.degree}; {vals})"

    # linear structure ------------------------------------------------------
    def __add__(self, other: Derivation) -> Derivation:
        if self.algebra != other.algebra:
            raise AlgebraMismatch("derivations over different algebras")
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add derivations of different degrees")
        return Derivation(self.algebra, self.degree, {k: v + other.value(k) for k, v in self.values.items()})

    def __rmul__(self, c) -> Derivation:
        return Derivation(self.algebra, self.degree, {k: c * v for k, v in self.values.items()})

    def __neg__(self) -> Derivation:
        return (-1) * self

    def __sub__(self, other: Derivation) -> Derivation:
        return self + (-other)

    # evaluation -----------------------------------------------------------
    def on_monomial(self, m: Monomial) -> dict[Monomial, Fraction]:
        with self._lock:
            hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        out: dict[Monomial, Fraction] = {}
        prefix_degree = 0
        for i, e in enumerate(m):
            if not e:
                continue
            val = self._values[i]
            if val:
                prefix, suffix = _split(m, i)
                lower = list((0,) * len(m))
                lower[i] = e - 1
                sign = -1 if (self.degree * prefix_degree) % 2 else 1
                # theta(x^e) = e x^(e-1) theta(x) for even x; odd x has e == 1
                middle = mul(alg.monomial(tuple(lower), e), val)
                term = mul(mul(alg.monomial(prefix), middle), alg.monomial(suffix))
                for mm, c in term.terms.items():
                    out[mm] = out.get(mm, 0) + sign * c
            prefix_degree += e * alg.degrees[i]
        out = {k: v for k, v in out.items() if v}
        with self._lock:
            self._cache[m] = out
        return out

    def __call__(self, p: Poly) -> Poly:
        if p.algebra != self.algebra:
            p = self.algebra.embed(p)
        out: dict[Monomial, Fraction] = {}
        for m, c in p.terms.items():
            for mm, v in self.on_monomial(m).items():
                out[mm] = out.get(mm, 0) + c * v
        return Poly(self.algebra, out)

    def compose_on(self, other: Derivation, p: Poly) -> Poly:
        """``self(other(p))``."""
        return self(other(p))


def apply_derivation(theta: Derivation, p: Poly) -> Poly:
    return theta(p)


def commutator(t1: Derivation, t2: Derivation) -> Derivation:
    """Graded commutator ``t1 t2 - (-1)^(|t1||t2|) t2 t1``, recorded on generators."""
    if t1.algebra != t2.algebra:
        raise AlgebraMismatch("derivations over different algebras")
    alg = t1.algebra
    sign = -1 if (t1.degree * t2.degree) % 2 else 1
    vals = {}
    for g in alg.generators:
        x = alg.gen(g.name)
        vals[g.name] = t1(t2(x)) - sign * t2(t1(x))
    return Derivation(alg, t1.degree + t2.degree, vals)


def degree_derivation(alg: GradedAlgebra) -> Derivation:
    """The derivation multiplying a homogeneous element by its degree."""
    return Derivation(alg, 0, {g.name: g.degree * alg.gen(g.name) for g in alg.generators})


def algebra_endomorphism(alg: GradedAlgebra, images: Mapping[str, Poly]):
    """The algebra map sending each generator to ``images[name]`` (default: itself)."""
    imgs = [images.get(g.name, alg.gen(g.name)) for g in alg.generators]

    def apply(p: Poly) -> Poly:
        out = alg.zero()
        for m, c in p.terms.items():
            term = alg.scalar(c)
            for i, e in enumerate(m):
                for _ in range(e):
                    term = term * imgs[i]
            out = out + term
        return out

    return apply
