from fractions import Fraction

import pytest

from loopcalc.loopmodel import build_loop_model, hodge_cohomology_table
from loopcalc.builtins import load_builtin
from loopcalc.stringbv import (
    BVAlgebra,
    WindowError,
    builtin_bv,
    check_axioms,
    crosscheck_additive,
    gamma1_candidates,
    loop_bracket,
    theorem_checks,
)

SPHERES = ["s2", "s3", "s5", "s7"]


def loop_and_table(name):
    L = build_loop_model(load_builtin(name).model(13))
    return L, hodge_cohomology_table(L, 12)


def test_s3_presentation_shape():
    A = builtin_bv("s3")
    assert A.window == (-3, 12)
    assert A.degrees[A.index["b"]] == -3 and A.degrees[A.index["x"]] == 2
    assert A.weights[A.index["x^3"]] == 3 and A.weights[A.index["b*x^3"]] == 3
    assert A.Delta(A.element("b")) == {}
    assert A.Delta(A.element("x")) == {}
    assert A.Delta(A.element("b*x^3")) == A.element("x^2", 3)
    assert A.labels[A.unit] == "1"


def test_s2_presentation_shape():
    A = builtin_bv("s2")
    gens = {lab: A.degrees[A.index[lab]] for lab in ("a", "b", "v")}
    assert gens == {"a": -2, "b": -1, "v": 2}
    # relation a v = 0 (and hence a b v = 0); a^2 and a b land below the window
    for lab in ("v", "b*v", "v^3"):
        assert A.mul(A.element("a"), A.element(lab)) == {}
    for lab in ("a", "b"):
        with pytest.raises(WindowError):
            A.mul(A.element("a"), A.element(lab))
    assert A.Delta(A.element("b")) == A.element("1")
    assert A.Delta(A.element("b*v^2")) == A.element("v^2", 5)
    assert [A.weights[A.index[x]] for x in ("a", "1", "b", "v", "b*v")] == [0, 0, 1, 1, 2]


@pytest.mark.parametrize("name", SPHERES)
def test_unit_has_weight_zero(name):
    A = builtin_bv(name)
    assert A.weights[A.unit] == 0


def test_bracket_with_unit_vanishes():
    for name in SPHERES:
        A = builtin_bv(name)
        one = A.element(A.labels[A.unit])
        for i in range(len(A)):
            try:
                assert loop_bracket(A, one, {i: Fraction(1)}) == {}
            except WindowError:
                pass


def test_s3_bracket_x_b_by_hand():
    # {x, b} = (+1) Δ(x b) - Δ(x) b - x Δ(b) = Δ(b x) = 1
    A = builtin_bv("s3")
    assert loop_bracket(A, A.element("x"), A.element("b")) == A.element("1")
    # antisymmetry: {b, x} = -(-1)^((|b|+1)(|x|+1)) {x, b} = -1 since (-2)(3) is even
    assert loop_bracket(A, A.element("b"), A.element("x")) == A.element("1", -1)


def test_bracket_of_even_element_with_itself():
    # for |a| even, (|a|+1)^2 is odd, so antisymmetry forces nothing; record the value
    A = builtin_bv("s3")
    x = A.element("x")
    assert loop_bracket(A, x, x) == {}
    bx = A.element("b*x")
    # |b x| = -1 is odd, so antisymmetry forces {bx, bx} = -{bx, bx} = 0
    assert loop_bracket(A, bx, bx) == {}


@pytest.mark.parametrize("name", SPHERES)
def test_axioms_pass(name):
    rep = check_axioms(builtin_bv(name))
    assert rep.passed, [c.as_dict() for c in rep.failures()]
    names = {c.name for c in rep.checks}
    assert {"Poisson identity", "Jacobi identity", "Δ∘Δ = 0", "associativity", "graded commutativity"} <= names


@pytest.mark.parametrize("name", SPHERES)
def test_theorem_checks_pass(name):
    A = builtin_bv(name)
    rep = theorem_checks(A)
    assert rep.passed, [c.as_dict() for c in rep.failures()]


def test_gamma1_candidates():
    assert [builtin_bv("s3").labels[i] for i in gamma1_candidates(builtin_bv("s3"))] == ["x"]
    A = builtin_bv("s2")
    # b has weight 1 but Δ(b) = 1, so it is excluded; the unit has weight 0
    assert [A.labels[i] for i in gamma1_candidates(A)] == ["v"]


def test_x_times_bx_has_weight_j_plus_one():
    A = builtin_bv("s3")
    for j in range(1, 6):
        prod = A.mul(A.element("x"), A.element(f"b*x^{j}" if j > 1 else "b*x"))
        (k,) = prod
        assert A.weights[k] == j + 1


def test_window_errors():
    A = builtin_bv("s3")
    with pytest.raises(WindowError):
        A.mul(A.element("x^6"), A.element("x"))
    with pytest.raises(WindowError):
        A.Delta(A.element("x^6"))
    with pytest.raises(WindowError):
        BVAlgebra("bad", ["1"], [5], {}, {}, 0, (0, 3))


def _mutants(A):
    for i, v in A.delta.items():
        for k, c in v.items():
            for new in (2 * c, 0, -c):
                d = {a: dict(b) for a, b in A.delta.items()}
                d[i][k] = new
                yield f"delta {A.labels[i]}->{A.labels[k]}={new}", A.copy(delta=d)
    for (i, j), v in A.product.items():
        for k, c in v.items():
            for new in (2 * c, 0):
                p = {a: dict(b) for a, b in A.product.items()}
                p[(i, j)][k] = new
                yield f"product {A.labels[i]}*{A.labels[j]}={new}", A.copy(product=p)


@pytest.mark.parametrize("name", ["s2", "s3"])
def test_every_single_mutation_is_caught(name):
    A = builtin_bv(name)
    missed = [label for label, B in _mutants(A) if check_axioms(B, fail_fast=True).passed]
    assert missed == []


def test_mutation_witness_is_reported():
    A = builtin_bv("s2")
    d = {a: dict(b) for a, b in A.delta.items()}
    d[A.index["b*v"]][A.index["v"]] = Fraction(2)
    rep = check_axioms(A.copy(delta=d))
    bad = rep.failures()
    assert bad and bad[0].name == "Poisson identity" and "b*v" in bad[0].detail


def test_spurious_delta_entry_is_caught():
    A = builtin_bv("s3")
    d = {a: dict(b) for a, b in A.delta.items()}
    d[A.index["x"]] = {A.index["b*x^2"]: Fraction(1)}
    assert not check_axioms(A.copy(delta=d)).passed


@pytest.mark.parametrize("name", SPHERES)
def test_crosscheck_against_loop_model(name):
    L, T = loop_and_table(name)
    rep = crosscheck_additive(builtin_bv(name), L, 12, T)
    assert rep.passed, [c.as_dict() for c in rep.failures()]


def test_crosscheck_catches_shifted_weights():
    L, T = loop_and_table("s2")
    A = builtin_bv("s2")
    shifted = A.copy(weights=[w + (1 if A.labels[i] == "v" else 0) for i, w in enumerate(A.weights)])
    rep = crosscheck_additive(shifted, L, 12, T)
    assert not rep.passed
    assert any("degree 2" in c.name for c in rep.failures())


def test_crosscheck_catches_wrong_delta_rank():
    L, T = loop_and_table("s3")
    A = builtin_bv("s3")
    d = {a: dict(b) for a, b in A.delta.items()}
    del d[A.index["b*x^2"]]
    rep = crosscheck_additive(A.copy(delta=d), L, 12, T)
    assert not rep.passed


def test_unknown_builtin():
    with pytest.raises(KeyError):
        builtin_bv("s4")
