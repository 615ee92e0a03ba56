from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopcalc.builtins import NAMES, load_builtin
from loopcalc.gca import Generator, GradedAlgebra
from loopcalc.presentation import CocycleSpec, PresentationError, PresentationFile, parse, print_presentation
from loopcalc.stringbv import BVAlgebra, builtin_bv


def test_s2_example():
    pf = parse("generator v 2\ngenerator w 3\nd w = v^2\ndim 2")
    assert pf.generators == [("v", 2), ("w", 3)]
    assert pf.dim == 2
    assert str(pf.differential["w"]) == "v^2"
    m = pf.model()
    assert m.d.value("w") == m.algebra.gen("v") ** 2


def test_degree_mismatch():
    with pytest.raises(PresentationError) as exc:
        parse("generator v 2\ngenerator w 3\nd w = v + 1")
    assert exc.value.line == 3
    assert "degree mismatch" in exc.value.message


def test_degree_one_rejected():
    with pytest.raises(PresentationError) as exc:
        parse("generator v 1")
    assert exc.value.line == 1 and exc.value.column == 13
    assert "simply connected" in exc.value.message


def test_undeclared_name_has_column():
    with pytest.raises(PresentationError) as exc:
        parse("generator v 2\ngenerator w 3\nd w = v*u")
    assert (exc.value.line, exc.value.column) == (3, 9)


def test_use_before_declaration_rejected():
    with pytest.raises(PresentationError) as exc:
        parse("d w = v^2\ngenerator v 2\ngenerator w 3")
    assert exc.value.line == 1


def test_syntax_errors():
    cases = [
        ("generator v", 1),
        ("generator v x", 1),
        ("generator v 2\nd v = 2*", 2),
        ("generator v 2\ngenerator w 3\nd w = v^^2", 3),
        ("generator v 2\nfrobnicate v", 2),
        ("generator v 3\ncocycle t degree 3: v -> 1", 2),
        ("generator v 3\ncocycle t degree -3: v -> 1, v -> 1", 2),
        ("generator v 3\ncocycle t degree -2: v -> 1", 2),
    ]
    for text, line in cases:
        with pytest.raises(PresentationError) as exc:
            parse(text)
        assert exc.value.line == line, text


def test_comments_rationals_and_units():
    pf = parse("# header\ngenerator v 2   # even\ngenerator w 5\nd w = 2/3*v^3 - 1/3 * v*v*v\n")
    assert pf.differential["w"] == Fraction(1, 3) * pf.model().algebra.gen("v") ** 3


def test_cocycle_stanza():
    pf = parse("generator v 2\ngenerator w 3\nd w = v^2\ndim 2\ncocycle thetaW degree -1: w -> v\n")
    spec = pf.cocycles["thetaW"]
    assert spec.n == 1 and str(spec.values["w"]) == "v"
    c = pf.cocycle(pf.model(), "thetaW")
    assert c.theta.value("w") == pf.model().algebra.gen("v")


@pytest.mark.parametrize("name", NAMES)
def test_builtins_round_trip(name):
    pf = load_builtin(name)
    text = print_presentation(pf)
    again = parse(text, name)
    assert again == pf
    assert print_presentation(again) == text


def test_bv_stanzas():
    text = """\
generator v 3
dim 3
window -3 2
basis b -3 weight 0
basis 1 0 weight 0
basis b*x -1 weight 1
basis x 2 weight 1
unit 1
product 1 b = b
product b 1 = b
product 1 1 = 1
product b x = b*x
product x b = b*x
delta b*x = 1
"""
    pf = parse(text, "tiny")
    A = pf.bv
    assert A.labels == ["b", "1", "b*x", "x"]
    assert A.delta == {2: {1: Fraction(1)}}
    assert A.product[(0, 3)] == {2: Fraction(1)}
    assert parse(print_presentation(pf), "tiny") == pf


def test_bv_errors():
    with pytest.raises(PresentationError) as exc:
        parse("window 0 3\nbasis 1 0\nunit 1\ndelta 1 = 2*q")
    assert exc.value.line == 4
    with pytest.raises(PresentationError):
        parse("window 0 3\nbasis 1 0\nbasis x 2 weight 1\nunit 1")
    with pytest.raises(PresentationError):
        parse("window 0 3\nbasis 1 7\nunit 1")
    with pytest.raises(PresentationError):
        parse("basis 1 0\n")


# randomized round trip --------------------------------------------------------
@st.composite
def presentations(draw):
    n = draw(st.integers(1, 4))
    names = draw(st.lists(st.sampled_from(["u", "v", "w", "x", "y", "z", "p_1", "q2"]), min_size=n, max_size=n, unique=True))
    degs = [draw(st.integers(2, 7)) for _ in names]
    pf = PresentationFile(generators=list(zip(names, degs)))
    alg = GradedAlgebra([Generator(a, d) for a, d in pf.generators])
    coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)

    def random_poly(degree):
        if degree < 0:
            return alg.zero()
        mons = alg.basis(degree)
        out = alg.zero()
        for m in mons:
            out = out + draw(coef) * alg.monomial(m)
        return out

    for a, d in pf.generators:
        if draw(st.booleans()):
            pf.differential[a] = random_poly(d + 1)
    if draw(st.booleans()):
        pf.dim = draw(st.integers(0, 12))
    for k in range(draw(st.integers(0, 2))):
        nn = draw(st.integers(1, 5))
        vals = {a: random_poly(d - nn) for a, d in pf.generators if draw(st.booleans())}
        pf.cocycles[f"c{k}"] = CocycleSpec(f"c{k}", nn, vals)
    if draw(st.booleans()):
        pf.bv = builtin_bv(draw(st.sampled_from(["s2", "s3", "s5"])), draw(st.integers(2, 6)))
        if draw(st.booleans()):
            A = pf.bv
            pf.bv = BVAlgebra(A.name, A.labels, A.degrees, A.product, A.delta, A.unit, A.window, None, pf.dim)
        else:
            pf.bv = pf.bv.copy(dim=pf.dim)
    return pf


@settings(max_examples=150, deadline=None)
@given(presentations())
def test_random_round_trip(pf):
    text = print_presentation(pf)
    name = pf.bv.name if pf.bv is not None else "model"
    again = parse(text, name)
    assert again == pf
    assert print_presentation(again) == text
