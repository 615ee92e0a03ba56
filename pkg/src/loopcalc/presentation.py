"""Line-oriented presentation files for Sullivan models, cocycles and BV presentations.

::

    # the 2-sphere
    generator v 2
    generator w 3
    d w = v^2
    dim 2
    cocycle thetaW degree -1: w -> v

BV stanzas describe a finite presentation of shifted loop homology::

    window -3 12
    basis 1 0 weight 0
    basis b -3 weight 0
    unit 1
    product b 1 = b
    delta b*x = 1

Lines in a linear combination are separated by `` + `` or `` - `` with
surrounding spaces, because basis labels may themselves contain ``*`` and ``^``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from loopcalc.cartan import DerivationCocycle, make_cocycle
from loopcalc.cdga import SullivanModel
from loopcalc.gca import Generator, GradedAlgebra, Poly
from loopcalc.stringbv import BVAlgebra

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")
_LABEL = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_*^.]*")


class PresentationError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


@dataclass
class CocycleSpec:
    label: str
    n: int
    values: dict[str, Poly]

    def build(self, model: SullivanModel) -> DerivationCocycle:
        vals = {k: model.algebra.embed(v) for k, v in self.values.items()}
        return make_cocycle(model, vals, self.n, self.label)


@dataclass
class PresentationFile:
    generators: list[tuple[str, int]] = field(default_factory=list)
    differential: dict[str, Poly] = field(default_factory=dict)
    dim: int | None = None
    cocycles: dict[str, CocycleSpec] = field(default_factory=dict)
    bv: BVAlgebra | None = None

    @property
    def algebra(self) -> GradedAlgebra:
        return GradedAlgebra([Generator(n, d) for n, d in self.generators])

    def model(self, max_degree: int = 13) -> SullivanModel:
        return SullivanModel(self.generators, self.differential, dim=self.dim, max_degree=max_degree)

    def cocycle(self, model: SullivanModel, label: str) -> DerivationCocycle:
        try:
            spec = self.cocycles[label]
        except KeyError:
            raise KeyError(f"no cocycle {label!r}; known: {sorted(self.cocycles)}") from None
        return spec.build(model)


# polynomials ---------------------------------------------------------------
class _PolyParser:
    def __init__(self, text: str, offset: int, line: int, degrees: dict[str, int], alg: GradedAlgebra):
        self.toks = []
        for m in _TOKEN.finditer(text):
            if m.group(0).strip():
                kind = "num" if m.group(1) else "name" if m.group(2) else "op"
                self.toks.append((kind, m.group(m.lastindex), offset + m.start(m.lastindex) + 1))
        self.pos = 0
        self.line = line
        self.degrees = degrees
        self.alg = alg
        self.end = offset + len(text) + 1

    def err(self, col, msg):
        raise PresentationError(self.line, col, msg)

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None, self.end)

    def take(self):
        t = self.peek()
        self.pos += 1
        return t

    def parse(self) -> Poly:
        if not self.toks:
            self.err(self.end, "expected a polynomial")
        total = self.alg.zero()
        sign = 1
        kind, val, col = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        total = total + sign * self.term()
        while self.pos < len(self.toks):
            kind, val, col = self.take()
            if kind != "op" or val not in "+-":
                self.err(col, f"expected '+' or '-', found {val!r}")
            sign = -1 if val == "-" else 1
            total = total + sign * self.term()
        return total

    def term(self) -> Poly:
        out = self.factor()
        while True:
            kind, val, col = self.peek()
            if kind == "op" and val == "*":
                self.take()
                out = out * self.factor()
            else:
                return out

    def factor(self) -> Poly:
        kind, val, col = self.take()
        if kind == "num":
            return self.alg.scalar(Fraction(val))
        if kind == "name":
            if val not in self.degrees:
                self.err(col, f"undeclared name {val!r}")
            base = self.alg.gen(val)
            k2, v2, c2 = self.peek()
            if k2 == "op" and v2 == "^":
                self.take()
                k3, v3, c3 = self.take()
                if k3 != "num" or "/" in v3:
                    self.err(c3, "expected a nonnegative integer exponent")
                return base ** int(v3)
            return base
        self.err(col, "expected a coefficient or generator name" if val is None else f"unexpected {val!r}")


def _lincomb(text: str, offset: int, line: int, labels: dict[str, int], unit_label: str | None) -> dict[str, Fraction]:
    out: dict[str, Fraction] = {}
    body = text.strip()
    start = offset + (len(text) - len(text.lstrip())) + 1
    if body == "0":
        return out
    if not body:
        raise PresentationError(line, start, "expected a linear combination")
    parts = re.split(r"(\s+[+-]\s+)", body)
    signs = [1]
    terms = [parts[0]]
    for op, term in zip(parts[1::2], parts[2::2]):
        signs.append(-1 if op.strip() == "-" else 1)
        terms.append(term)
    col = start
    consumed = 0
    for k, (sgn, term) in enumerate(zip(signs, terms)):
        if k:
            consumed += len(parts[2 * k - 1])
        col = start + consumed
        if term.startswith("-") and k == 0:
            sgn, term = -1, term[1:]
            consumed += 1
            col += 1
        m = re.fullmatch(r"(\d+(?:/\d+)?)\*(.+)", term)
        if term in labels:
            coef, lab = Fraction(1), term
        elif m and m.group(2) in labels:
            coef, lab = Fraction(m.group(1)), m.group(2)
        elif re.fullmatch(r"\d+(?:/\d+)?", term):
            if unit_label is None:
                raise PresentationError(line, col, "scalar term before a unit is declared")
            coef, lab = Fraction(term), unit_label
        else:
            raise PresentationError(line, col, f"undeclared basis label in {term!r}")
        consumed += len(term)
        out[lab] = out.get(lab, 0) + sgn * coef
        if not out[lab]:
            del out[lab]
    return out


# file parser ---------------------------------------------------------------
def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise PresentationError(line, col, f"expected an integer {what}, found {tok!r}") from None


def _words(line_text: str):
    """Whitespace-separated words with their 1-based columns."""
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line_text)]


def parse(text: str, name: str = "model") -> PresentationFile:
    """Parse a presentation file; errors carry line and column."""
    pf = PresentationFile()
    degrees: dict[str, int] = {}
    raw_d: list[tuple[int, str, str, int]] = []  # (line, name, rhs text, rhs column)
    raw_cocycles: list[tuple[int, str, int, list[tuple[str, str, int, int]]]] = []
    bv_basis: list[tuple[str, int, int | None]] = []
    bv_labels: dict[str, int] = {}
    bv_window = None
    bv_unit = None
    bv_products: list[tuple[int, str, str, str, int]] = []
    bv_deltas: list[tuple[int, str, str, int]] = []
    seen_dim = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        words = _words(line)
        key, kcol = words[0]
        if key == "generator":
            if len(words) != 3:
                raise PresentationError(lineno, kcol, "expected: generator <name> <degree>")
            (gname, gcol), (dtok, dcol) = words[1], words[2]
            if not _IDENT.fullmatch(gname):
                raise PresentationError(lineno, gcol, f"invalid generator name {gname!r}")
            if gname in degrees:
                raise PresentationError(lineno, gcol, f"generator {gname!r} declared twice")
            deg = _int(dtok, lineno, dcol, "degree")
            if deg < 1:
                raise PresentationError(lineno, dcol, "generator degrees must be positive")
            if deg == 1:
                raise PresentationError(lineno, dcol, f"generator {gname!r} has degree 1; models must be simply connected")
            degrees[gname] = deg
            pf.generators.append((gname, deg))
        elif key == "d":
            m = re.fullmatch(r"(\s*d\s+)(\S+)(\s*=\s*)(.*)", line)
            if not m:
                raise PresentationError(lineno, kcol, "expected: d <name> = <polynomial>")
            gname = m.group(2)
            if gname not in degrees:
                raise PresentationError(lineno, m.start(2) + 1, f"undeclared name {gname!r}")
            raw_d.append((lineno, gname, m.group(4), m.start(4)))
        elif key == "dim":
            if len(words) != 2:
                raise PresentationError(lineno, kcol, "expected: dim <m>")
            if seen_dim:
                raise PresentationError(lineno, kcol, "dim declared twice")
            pf.dim = _int(words[1][0], lineno, words[1][1], "dimension")
            if pf.dim < 0:
                raise PresentationError(lineno, words[1][1], "dimension must be nonnegative")
            seen_dim = True
        elif key == "cocycle":
            m = re.fullmatch(r"(\s*cocycle\s+)(\S+)(\s+degree\s+)(-?\d+)(\s*:)(.*)", line)
            if not m:
                raise PresentationError(lineno, kcol, "expected: cocycle <label> degree -<n>: <name> -> <polynomial>, ...")
            label = m.group(2)
            if not _IDENT.fullmatch(label):
                raise PresentationError(lineno, m.start(2) + 1, f"invalid cocycle label {label!r}")
            if label in pf.cocycles or any(c[1] == label for c in raw_cocycles):
                raise PresentationError(lineno, m.start(2) + 1, f"cocycle {label!r} declared twice")
            deg = int(m.group(4))
            if deg >= 0:
                raise PresentationError(lineno, m.start(4) + 1, "cocycle degree must be -n with n >= 1")
            entries = []
            body, bstart = m.group(6), m.start(6)
            pos = 0
            for chunk in body.split(","):
                cstart = bstart + pos
                pos += len(chunk) + 1
                if not chunk.strip():
                    continue
                em = re.fullmatch(r"(\s*)(\S+)(\s*->\s*)(.*)", chunk)
                if not em:
                    raise PresentationError(lineno, cstart + 1, "expected <name> -> <polynomial>")
                gname = em.group(2)
                if gname not in degrees:
                    raise PresentationError(lineno, cstart + em.start(2) + 1, f"undeclared name {gname!r}")
                if any(e[0] == gname for e in entries):
                    raise PresentationError(lineno, cstart + em.start(2) + 1, f"value for {gname!r} given twice")
                entries.append((gname, em.group(4), cstart + em.start(4), lineno))
            raw_cocycles.append((lineno, label, -deg, entries))
        elif key == "window":
            if len(words) != 3:
                raise PresentationError(lineno, kcol, "expected: window <lo> <hi>")
            lo = _int(words[1][0], lineno, words[1][1], "bound")
            hi = _int(words[2][0], lineno, words[2][1], "bound")
            if lo > hi:
                raise PresentationError(lineno, words[1][1], "empty window")
            bv_window = (lo, hi)
        elif key == "basis":
            if len(words) not in (3, 5) or (len(words) == 5 and words[3][0] != "weight"):
                raise PresentationError(lineno, kcol, "expected: basis <label> <degree> [weight <w>]")
            lab, lcol = words[1]
            if not _LABEL.fullmatch(lab):
                raise PresentationError(lineno, lcol, f"invalid basis label {lab!r}")
            if lab in bv_labels:
                raise PresentationError(lineno, lcol, f"basis label {lab!r} declared twice")
            deg = _int(words[2][0], lineno, words[2][1], "degree")
            wt = _int(words[4][0], lineno, words[4][1], "weight") if len(words) == 5 else None
            if bv_window and not bv_window[0] <= deg <= bv_window[1]:
                raise PresentationError(lineno, words[2][1], f"degree {deg} outside the window")
            if bv_basis and (wt is None) != (bv_basis[0][2] is None):
                raise PresentationError(lineno, kcol, "either every basis element has a weight or none does")
            bv_labels[lab] = len(bv_basis)
            bv_basis.append((lab, deg, wt))
        elif key == "unit":
            if len(words) != 2:
                raise PresentationError(lineno, kcol, "expected: unit <label>")
            if words[1][0] not in bv_labels:
                raise PresentationError(lineno, words[1][1], f"undeclared basis label {words[1][0]!r}")
            bv_unit = words[1][0]
        elif key == "product":
            m = re.fullmatch(r"(\s*product\s+)(\S+)(\s+)(\S+)(\s*=)(.*)", line)
            if not m:
                raise PresentationError(lineno, kcol, "expected: product <label> <label> = <combination>")
            for g in (2, 4):
                if m.group(g) not in bv_labels:
                    raise PresentationError(lineno, m.start(g) + 1, f"undeclared basis label {m.group(g)!r}")
            if any(p[1] == m.group(2) and p[2] == m.group(4) for p in bv_products):
                raise PresentationError(lineno, m.start(2) + 1, "product given twice")
            bv_products.append((lineno, m.group(2), m.group(4), m.group(6), m.start(6)))
        elif key == "delta":
            m = re.fullmatch(r"(\s*delta\s+)(\S+)(\s*=)(.*)", line)
            if not m:
                raise PresentationError(lineno, kcol, "expected: delta <label> = <combination>")
            if m.group(2) not in bv_labels:
                raise PresentationError(lineno, m.start(2) + 1, f"undeclared basis label {m.group(2)!r}")
            if any(d[1] == m.group(2) for d in bv_deltas):
                raise PresentationError(lineno, m.start(2) + 1, "delta given twice")
            bv_deltas.append((lineno, m.group(2), m.group(4), m.start(4)))
        else:
            raise PresentationError(lineno, kcol, f"unknown keyword {key!r}")

    alg = GradedAlgebra([Generator(n, d) for n, d in pf.generators])
    for lineno, gname, rhs, col in raw_d:
        if gname in pf.differential:
            raise PresentationError(lineno, 3, f"differential of {gname!r} given twice")
        value = _PolyParser(rhs, col, lineno, degrees, alg).parse()
        if value and value.degrees() != {degrees[gname] + 1}:
            raise PresentationError(lineno, col + 1, f"degree mismatch: d {gname} must have degree {degrees[gname] + 1}, got {sorted(value.degrees())}")
        pf.differential[gname] = value
    for lineno, label, n, entries in raw_cocycles:
        values = {}
        for gname, rhs, col, ln in entries:
            value = _PolyParser(rhs, col, ln, degrees, alg).parse()
            if value and value.degrees() != {degrees[gname] - n}:
                raise PresentationError(ln, col + 1, f"degree mismatch: value on {gname} must have degree {degrees[gname] - n}")
            values[gname] = value
        pf.cocycles[label] = CocycleSpec(label, n, values)

    if bv_basis or bv_products or bv_deltas or bv_window or bv_unit:
        if bv_window is None or bv_unit is None:
            raise PresentationError(len(text.splitlines()) or 1, 1, "a BV presentation needs both 'window' and 'unit'")
        unit_label = bv_unit
        product = {}
        for lineno, l1, l2, rhs, col in bv_products:
            comb = _lincomb(rhs, col, lineno, bv_labels, unit_label)
            product[(bv_labels[l1], bv_labels[l2])] = {bv_labels[k]: v for k, v in comb.items()}
        delta = {}
        for lineno, lab, rhs, col in bv_deltas:
            comb = _lincomb(rhs, col, lineno, bv_labels, unit_label)
            delta[bv_labels[lab]] = {bv_labels[k]: v for k, v in comb.items()}
        weights = [b[2] for b in bv_basis] if bv_basis and bv_basis[0][2] is not None else None
        pf.bv = BVAlgebra(
            name,
            [b[0] for b in bv_basis],
            [b[1] for b in bv_basis],
            product,
            delta,
            bv_labels[unit_label],
            bv_window,
            weights,
            pf.dim,
        )
    return pf


# printer -------------------------------------------------------------------
def _format_comb(A: BVAlgebra, vec: dict) -> str:
    if not vec:
        return "0"
    out = []
    for k, i in enumerate(sorted(vec)):
        c = vec[i]
        body = A.labels[i] if abs(c) == 1 else f"{abs(c)}*{A.labels[i]}"
        if k == 0:
            out.append(body if c > 0 else "-" + body)
        else:
            out.append((" + " if c > 0 else " - ") + body)
    return "".join(out)


def print_presentation(pf: PresentationFile) -> str:
    """Canonical text; ``parse(print_presentation(x)) == x``."""
    lines = []
    for n, d in pf.generators:
        lines.append(f"generator {n} {d}")
    for n, _ in pf.generators:
        v = pf.differential.get(n)
        if v is not None:
            lines.append(f"d {n} = {v}")
    if pf.dim is not None:
        lines.append(f"dim {pf.dim}")
    for c in pf.cocycles.values():
        vals = ", ".join(f"{g} -> {c.values[g]}" for g, _ in pf.generators if g in c.values)
        lines.append(f"cocycle {c.label} degree -{c.n}: {vals}")
    A = pf.bv
    if A is not None:
        lines.append(f"window {A.window[0]} {A.window[1]}")
        for i, lab in enumerate(A.labels):
            w = f" weight {A.weights[i]}" if A.weights is not None else ""
            lines.append(f"basis {lab} {A.degrees[i]}{w}")
        lines.append(f"unit {A.labels[A.unit]}")
        for (i, j) in sorted(A.product):
            lines.append(f"product {A.labels[i]} {A.labels[j]} = {_format_comb(A, A.product[(i, j)])}")
        for i in sorted(A.delta):
            lines.append(f"delta {A.labels[i]} = {_format_comb(A, A.delta[i])}")
    return "\n".join(lines) + "\n"
