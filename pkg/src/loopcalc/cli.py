"""Command-line interface: ``loopcalc <command> --model builtin:s3 ...``.

Exit codes: 0 when every executed check passes, 1 when some check fails,
2 for usage, parse and model errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from loopcalc.builtins import NAMES, load_builtin
from loopcalc.cartan import CartanDefect, NotACocycle
from loopcalc.cdga import CutoffExceeded, ModelError
from loopcalc.loopmodel import LoopModelDefect
from loopcalc.presentation import PresentationError, parse
from loopcalc.report import NoBVPresentation, Session, build_report

COMMANDS = {
    "betti": "dimensions of H^p of the loop model",
    "hodge": "(degree x weight) table with the phi_k eigenvalue check",
    "cartan-verify": "Cartan formula, chain-map and weight-shift checks",
    "gamma1": "the Gamma_1 class with its weight and Δ-annihilation checks",
    "bv-verify": "BV axioms and loop product theorem checks",
    "crosscheck": "compare a BV presentation with the loop model",
    "report": "run everything and print one document",
}


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", required=True, help=f"presentation file or builtin:NAME ({', '.join(NAMES)})")
    common.add_argument("--max-degree", type=int, default=12, help="cohomological degree bound (default 12)")
    common.add_argument("--cocycle", default=None, help="cocycle label (default: every cocycle in the file)")
    common.add_argument("--k", type=int, default=2, help="power map used by the eigenvalue check (default 2)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    p = argparse.ArgumentParser(prog="loopcalc", description="Exact computations on Sullivan models of free loop spaces.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")
    for name, help_ in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=help_, description=help_)
    return p


def load_model(spec: str, max_degree: int):
    """Return (presentation, display name) for ``builtin:NAME`` or a file path."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        return load_builtin(name, max_degree), name
    path = Path(spec)
    text = path.read_text(encoding="utf-8")
    return parse(text, path.stem), path.name


def main(argv: list[str] | None = None) -> int:
    parser = _parser()
    args = parser.parse_args(argv)
    if args.max_degree < 0:
        parser.error("--max-degree must be nonnegative")
    if args.k < 2:
        parser.error("--k must be at least 2")
    try:
        pf, name = load_model(args.model, args.max_degree)
        session = Session(pf, name, args.max_degree, args.k)
        report = build_report(args.command, session, args.cocycle)
    except PresentationError as exc:
        print(f"{args.model}: {exc}", file=sys.stderr)
        return 2
    except (
        OSError,
        KeyError,
        ModelError,
        NotACocycle,
        CutoffExceeded,
        NoBVPresentation,
        ValueError,
    ) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return 2
    except (CartanDefect, LoopModelDefect) as exc:
        print(f"internal defect: {exc}", file=sys.stderr)
        return 1
    out = report.to_json() if args.format == "json" else report.to_text()
    sys.stdout.write(out)
    if not report.passed:
        for title, check in report.failures():
            print(f"FAILED [{title}] {check['name']}: {check['detail']}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
