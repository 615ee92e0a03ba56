from fractions import Fraction

import pytest

from loopcalc.builtins import NAMES, load_builtin
from loopcalc.cdga import CutoffExceeded, ModelError, SullivanModel
from loopcalc.gca import GradedAlgebra, Generator
from loopcalc.loopmodel import (
    ASSUMPTIONS,
    build_loop_model,
    delta_dual_checks,
    hodge_cohomology_table,
    hodge_sum_checks,
    phi_k_check,
    s_commutator_with_D,
    unit_homology_vector,
    weight_zero_matches_base,
)


def loop(name, cutoff=13):
    return build_loop_model(load_builtin(name).model(cutoff))


def test_s3_loop_differential_is_zero():
    L = loop("s3")
    assert all(not L.D.value(g.name) for g in L.algebra.generators)
    assert [(g.name, g.degree) for g in L.algebra.generators] == [("v_bar", 2), ("v", 3)]


def test_s2_loop_differential():
    L = loop("s2")
    alg = L.algebra
    assert not L.D.value("v_bar")
    assert L.D.value("w_bar") == -2 * alg.gen("v") * alg.gen("v_bar")
    assert L.D.value("w") == alg.gen("v") ** 2


def test_cp2_loop_differential():
    L = loop("cp2")
    alg = L.algebra
    assert L.D.value("w_bar") == -3 * alg.gen("v") ** 2 * alg.gen("v_bar")


def test_s_commutes_with_D_up_to_sign():
    for name in NAMES:
        assert s_commutator_with_D(loop(name)).is_zero()


def test_name_clash_rejected():
    with pytest.raises(ModelError):
        build_loop_model(SullivanModel([("v", 3), ("v_bar", 4)]))


@pytest.mark.parametrize("name", NAMES)
def test_invariants_and_blocks(name):
    L = loop(name, 14)
    assert L.invariant_checks().passed
    rep = L.block_diagonal_checks(13)
    assert rep.passed and len(rep) == 14


def test_hodge_table_s3():
    T = hodge_cohomology_table(loop("s3"), 7)
    dims = [T.dim(p) for p in range(8)]
    assert dims == [1, 0, 1, 1, 1, 1, 1, 1]
    # v_bar^j has weight j in degree 2j; v*v_bar^j has weight j in degree 3+2j
    for j in range(4):
        if 2 * j <= 7:
            assert T.weights(2 * j) == [j]
        if 3 + 2 * j <= 7:
            assert T.weights(3 + 2 * j) == [j]


def test_hodge_table_s2():
    L = loop("s2")
    T = hodge_cohomology_table(L, 5)
    assert [T.dim(p) for p in range(6)] == [1] * 6
    assert [T.weights(p)[0] for p in range(6)] == [0, 1, 0, 2, 1, 3]
    alg = L.algebra
    v, w, vb, wb = (alg.gen(n) for n in ("v", "w", "v_bar", "w_bar"))
    expected = [alg.one(), vb, v, vb * wb, v * wb + 2 * w * vb, vb * wb * wb]
    for p, e in enumerate(expected):
        # each expected cocycle is a nonzero multiple of the stored class
        assert not L.D(e)
        c = T.reduce_in(e, p)
        assert len(c) == 1 and c[0] != 0


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("k", [2, 3])
def test_phi_k_eigenvalues(name, k):
    assert phi_k_check(loop(name), k, 12).passed


def test_phi_k_requires_k_at_least_2():
    with pytest.raises(ValueError):
        phi_k_check(loop("s3"), 1, 5)


@pytest.mark.parametrize("name", NAMES)
def test_weight_zero_and_direct_sum(name):
    L = loop(name)
    T = hodge_cohomology_table(L, 12)
    assert weight_zero_matches_base(L, 12, T).passed
    assert hodge_sum_checks(L, 12, T).passed
    assert delta_dual_checks(L, 12, T).passed


def test_pairing_dimension_check():
    # homology dims are the transposed cohomology blocks, so weight-aligned dual bases exist
    L = loop("s2")
    T = hodge_cohomology_table(L, 12)
    for p in range(13):
        for w in set(T.weights(p)):
            assert T.dim(p, w) == T.weights(p).count(w)


def test_unit_vector():
    assert unit_homology_vector(loop("s2")) == [Fraction(1)]
    L = loop("s3")
    u = unit_homology_vector(L)
    assert any(u) and len(u) == 1


def test_cutoff_enforced():
    L = loop("s2", 6)
    with pytest.raises(CutoffExceeded):
        hodge_cohomology_table(L, 6)


def test_phi_commutes_with_D():
    L = loop("cp2")
    phi = L.phi(3)
    for p in range(9):
        for m in L.algebra.basis(p):
            x = L.algebra.monomial(m)
            assert L.D(phi(x)) == phi(L.D(x))
            assert phi(x) == 3 ** L.weight(m) * x


def test_assumptions_recorded():
    assert len(ASSUMPTIONS) == 2
    assert any("rho" in a for a in ASSUMPTIONS)
