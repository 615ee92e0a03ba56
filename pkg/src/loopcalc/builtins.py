"""Builtin presentations: spheres and complex projective spaces."""
from __future__ import annotations

from loopcalc.presentation import PresentationFile, parse
from loopcalc.stringbv import BUILTIN_BV, builtin_bv

MODELS = {
    "s2": """\
# the 2-sphere
generator v 2
generator w 3
d w = v^2
dim 2
cocycle thetaW degree -1: w -> v
cocycle thetaHopf degree -3: w -> 1
""",
    "s3": """\
generator v 3
dim 3
cocycle theta3 degree -3: v -> 1
""",
    "s5": """\
generator v 5
dim 5
cocycle theta5 degree -5: v -> 1
""",
    "s7": """\
generator v 7
dim 7
cocycle theta7 degree -7: v -> 1
""",
    "cp2": """\
# complex projective plane
generator v 2
generator w 5
d w = v^3
dim 4
cocycle thetaV degree -3: w -> v
cocycle theta5 degree -5: w -> 1
""",
    "cp3": """\
generator v 2
generator w 7
d w = v^4
dim 6
cocycle thetaV2 degree -3: w -> v^2
cocycle thetaV degree -5: w -> v
cocycle theta7 degree -7: w -> 1
""",
}

NAMES = tuple(MODELS)


def load_builtin(name: str, dmax: int = 12) -> PresentationFile:
    """The builtin presentation, with a BV presentation in the window [-m, dmax] for spheres."""
    try:
        text = MODELS[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(NAMES)}") from None
    pf = parse(text, name)
    if name in BUILTIN_BV:
        pf.bv = builtin_bv(name, dmax)
    return pf
