"""Report records shared by the CLI commands.

A report is a tree of plain dicts and lists with deterministic ordering. JSON
output serializes it directly; text output renders the same tree as YAML, so
both formats carry identical data.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from loopcalc import __version__
from loopcalc.cartan import cartan_formula_check, cartan_operators, gamma1_class, gamma1_property_check
from loopcalc.cdga import CutoffExceeded, cohomology_table, validate
from loopcalc.checks import CheckReport
from loopcalc.loopmodel import (
    ASSUMPTIONS,
    build_loop_model,
    delta_dual_checks,
    hodge_cohomology_table,
    hodge_sum_checks,
    phi_k_check,
    weight_zero_matches_base,
)
from loopcalc.presentation import PresentationFile, print_presentation
from loopcalc.stringbv import check_axioms, crosscheck_additive, theorem_checks


class NoBVPresentation(ValueError):
    pass


def _q(x) -> str:
    return str(Fraction(x))


def section(title: str, checks: CheckReport | None = None, data: dict | None = None) -> dict:
    out = {"title": title}
    if checks is not None:
        out["passed"] = checks.passed
        out["checks"] = [c.as_dict() for c in checks.checks]
        if checks.notes:
            out["notes"] = list(checks.notes)
    if data is not None:
        out["data"] = data
    return out


@dataclass
class Report:
    command: str
    model: str
    max_degree: int
    sections: list[dict] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.get("passed", True) for s in self.sections)

    def failures(self) -> list[tuple[str, dict]]:
        return [(s["title"], c) for s in self.sections for c in s.get("checks", []) if not c["passed"]]

    def as_dict(self) -> dict:
        return {
            "tool": "loopcalc",
            "version": __version__,
            "command": self.command,
            "model": self.model,
            "max_degree": self.max_degree,
            "passed": self.passed,
            "assumptions": list(self.assumptions),
            "sections": self.sections,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        # the summary lines are YAML comments, so the document carries exactly the JSON data
        head = [f"# loopcalc {self.command} report for {self.model} (max degree {self.max_degree})"]
        for s in self.sections:
            if "checks" in s:
                failed = sum(1 for c in s["checks"] if not c["passed"])
                verdict = "PASS" if s["passed"] else f"FAIL ({failed} failed)"
                head.append(f"# [{verdict}] {s['title']}: {len(s['checks'])} checks")
            for line in s.get("data", {}).get("grid", []):
                head.append(f"#   {line}")
        head.append(f"# overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(head) + "\n" + yaml.safe_dump(self.as_dict(), sort_keys=False, allow_unicode=True, width=100)


class Session:
    """Lazily built model, loop model and Hodge table at cutoff ``max_degree``."""

    def __init__(self, pf: PresentationFile, name: str, max_degree: int = 12, k: int = 2):
        self.pf = pf
        self.name = name
        self.N = max_degree
        self.k = k
        self._model = self._loop = self._table = None

    @property
    def model(self):
        if self._model is None:
            self._model = self.pf.model(self.N + 1)
        return self._model

    @property
    def loop(self):
        if self._loop is None:
            self._loop = build_loop_model(self.model)
        return self._loop

    @property
    def table(self):
        if self._table is None:
            self._table = hodge_cohomology_table(self.loop, self.N)
        return self._table

    def cocycle_labels(self, label: str | None) -> list[str]:
        if label is not None:
            if label not in self.pf.cocycles:
                raise KeyError(f"no cocycle {label!r}; known: {', '.join(self.pf.cocycles) or 'none'}")
            return [label]
        return list(self.pf.cocycles)

    # sections -------------------------------------------------------------
    def validity(self) -> dict:
        rep = CheckReport("model validity")
        v = validate(self.model)
        rep.add("d^2 = 0 on generators", v.square_zero)
        rep.add("d is homogeneous", v.homogeneous)
        rep.add("no degree-1 generators", v.simply_connected)
        rep.extend(self.loop.invariant_checks())
        rep.extend(self.loop.block_diagonal_checks(self.N))
        data = {
            "generators": [[g.name, g.degree] for g in self.loop.algebra.generators],
            "D": {g.name: str(self.loop.D.value(g.name)) for g in self.loop.algebra.generators},
            "minimal": v.minimal,
            "dim": self.model.dim,
        }
        if v.linear_terms:
            data["linear_terms"] = dict(v.linear_terms)
        return section("model validity", rep, data)

    def betti(self) -> dict:
        base = cohomology_table(self.model, self.N, by_weight=False)
        rep = hodge_sum_checks(self.loop, self.N, self.table)
        data = {
            "loop_betti": [self.table.dim(p) for p in range(self.N + 1)],
            "base_betti": [base.dim(p) for p in range(self.N + 1)],
        }
        return section("Betti numbers of the loop model", rep, data)

    def hodge(self) -> dict:
        T = self.table
        rep = CheckReport("Hodge decomposition")
        rep.extend(phi_k_check(self.loop, self.k, self.N, T))
        rep.extend(weight_zero_matches_base(self.loop, self.N, T))
        rep.extend(delta_dual_checks(self.loop, self.N, T))
        maxw = max([w for p in range(self.N + 1) for w in T.weights(p)] or [0])
        cells = []
        grid = ["  p | " + " ".join(f"{w:>3}" for w in range(maxw + 1))]
        reps = []
        for p in range(self.N + 1):
            row = [T.dim(p, w) for w in range(maxw + 1)]
            grid.append(f"{p:>3} | " + " ".join(f"{x:>3}" for x in row))
            cells.extend([p, w, x] for w, x in enumerate(row) if x)
            for w, r in zip(T.weights(p), T.representatives(p)):
                reps.append([p, w, str(r)])
        data = {"k": self.k, "cells": cells, "grid": grid, "representatives": reps}
        return section(f"Hodge table with phi_{self.k} eigenvalues", rep, data)

    def cartan(self, label: str) -> dict:
        c = self.pf.cocycle(self.model, label)
        ops = cartan_operators(self.loop, c, self.N, self.table)
        rep = cartan_formula_check(ops)
        alg = self.loop.algebra
        data = {
            "cocycle": label,
            "n": c.n,
            "theta": {g.name: str(c.theta.value(g.name)) for g in self.model.algebra.generators},
            "i_theta": {g.name: str(ops.i_theta.value(g.name)) for g in alg.generators},
            "L_theta": {g.name: str(ops.L_theta.value(g.name)) for g in alg.generators},
        }
        return section(f"Cartan calculus for {label}", rep, data)

    def gamma1(self, label: str) -> dict:
        if self.model.dim is None:
            raise ValueError("gamma1 needs a 'dim' declaration")
        c0 = self.pf.cocycles[label]
        need = self.model.dim + c0.n  # table through m + n
        if need <= self.N:
            L, T = self.loop, self.table
        else:
            deep = self.pf.model(need + 1)
            L = build_loop_model(deep)
            T = hodge_cohomology_table(L, need)
        c = self.pf.cocycle(L.base, label)
        g = gamma1_class(L, c, T)
        rep = gamma1_property_check(L, c, T)
        reps = T.representatives(g.degree)
        support = [
            {"dual_of": str(reps[j]), "weight": g.weights[j], "coefficient": _q(x)}
            for j, x in enumerate(g.coords)
            if x
        ]
        data = {
            "cocycle": label,
            "n": c.n,
            "homological_degree": g.degree,
            "shifted_degree": g.shifted_degree,
            "coordinates": [_q(x) for x in g.coords],
            "weights": g.weights,
            "support": support,
            "zero": g.is_zero(),
            "cutoff_used": T.pmax,
        }
        return section(f"Gamma_1 class for {label}", rep, data)

    def _bv(self):
        if self.pf.bv is None:
            raise NoBVPresentation(f"{self.name} has no BV presentation")
        return self.pf.bv

    def bv(self) -> list[dict]:
        A = self._bv()
        data = {"window": list(A.window), "basis": [[lab, A.degrees[i], A.weights[i] if A.weights else None] for i, lab in enumerate(A.labels)]}
        out = [section("BV axioms", check_axioms(A), data)]
        if A.weights is not None:
            th = theorem_checks(A)
            out.append(section("loop product theorems", th))
        return out

    def crosscheck(self) -> dict:
        A = self._bv()
        return section("additive cross-check", crosscheck_additive(A, self.loop, self.N, self.table))

    def presentation(self) -> dict:
        return section("presentation", data={"text": print_presentation(self.pf)})


def build_report(command: str, session: Session, cocycle: str | None = None) -> Report:
    rep = Report(command, session.name, session.N)
    s = session
    if command == "betti":
        rep.sections += [s.validity(), s.betti()]
    elif command == "hodge":
        rep.sections += [s.validity(), s.hodge()]
    elif command == "cartan-verify":
        rep.sections += [s.cartan(lab) for lab in s.cocycle_labels(cocycle)]
    elif command == "gamma1":
        rep.sections += [s.gamma1(lab) for lab in s.cocycle_labels(cocycle)]
    elif command == "bv-verify":
        rep.sections += s.bv()
    elif command == "crosscheck":
        rep.sections.append(s.crosscheck())
    elif command == "report":
        rep.sections += [s.presentation(), s.validity(), s.betti(), s.hodge()]
        for lab in s.cocycle_labels(cocycle):
            rep.sections += [s.cartan(lab), s.gamma1(lab)]
        if s.pf.bv is not None:
            rep.sections += s.bv()
            rep.sections.append(s.crosscheck())
    else:
        raise ValueError(f"unknown command {command!r}")
    if command in ("report", "hodge", "cartan-verify", "gamma1", "crosscheck"):
        rep.assumptions = list(ASSUMPTIONS)
    return rep


__all__ = ["Report", "Session", "build_report", "NoBVPresentation", "CutoffExceeded"]
