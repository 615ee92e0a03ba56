from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopcalc import _kernels_py
from loopcalc.linalg import InconsistentSystem, LinearSystemQ, Reducer, dense_rank, matmul, transpose

try:
    from loopcalc import _kernels
except ImportError:  # pure-Python install
    _kernels = None

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    nr = draw(st.integers(1, max_rows))
    nc = draw(st.integers(1, max_cols))
    cell = st.one_of(st.just(Fraction(0)), st.just(Fraction(0)), rationals)
    return [[draw(cell) for _ in range(nc)] for _ in range(nr)], nc


def system(rows, nc):
    entries = {(i, j): x for i, r in enumerate(rows) for j, x in enumerate(r) if x}
    return LinearSystemQ(entries, list(range(len(rows))), list(range(nc)))


def test_small_rank_and_nullspace():
    a = system([[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]], 3)
    assert a.rank() == 1
    ns = a.nullspace()
    assert len(ns) == 2
    for v in ns:
        assert a.apply(v) == {}


def test_solve_and_inconsistent():
    a = system([[Fraction(1), Fraction(1)], [Fraction(1), Fraction(-1)]], 2)
    x = a.solve({0: Fraction(3), 1: Fraction(1)})
    assert x == {0: Fraction(2), 1: Fraction(1)}
    b = system([[Fraction(1), Fraction(1)], [Fraction(2), Fraction(2)]], 2)
    with pytest.raises(InconsistentSystem):
        b.solve({0: Fraction(1), 1: Fraction(3)})


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(data):
    rows, nc = data
    a = system(rows, nc)
    ns = a.nullspace()
    assert a.rank() + len(ns) == nc
    for v in ns:
        assert a.apply(v) == {}
    # nullspace vectors are independent
    assert dense_rank([[v.get(j, Fraction(0)) for j in range(nc)] for v in ns]) == len(ns)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_reduced(data):
    rows, nc = data
    out, pivots = _kernels_py.rref(rows, nc)
    assert pivots == sorted(pivots)
    for r, p in zip(out, pivots):
        assert r[p] == 1
        for other, q in zip(out, pivots):
            if other is not r:
                assert other[p] == 0


@pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")
@settings(max_examples=200, deadline=None)
@given(matrices(8, 8))
def test_backends_agree_on_rref(data):
    rows, nc = data
    assert _kernels.rref([list(r) for r in rows], nc) == _kernels_py.rref([list(r) for r in rows], nc)


@pytest.mark.skipif(_kernels is None, reason="compiled kernels not built")
@settings(max_examples=300, deadline=None)
@given(st.lists(st.tuples(st.booleans(), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=8))
def test_backends_agree_on_products(spec):
    odd = tuple(o for o, _, _ in spec)
    a = tuple(min(x, 1) if o else x for o, x, _ in spec)
    b = tuple(min(y, 1) if o else y for o, _, y in spec)
    assert _kernels.mul_exponents(a, b, odd) == _kernels_py.mul_exponents(a, b, odd)


def test_reducer_coordinates():
    red = Reducer(2)
    assert red.add({0: Fraction(1), 1: Fraction(1)}) is not None  # a coboundary
    red.add({1: Fraction(1)}, 0)
    red.add({2: Fraction(2)}, 1)
    res, coords = red.reduce({0: Fraction(1), 1: Fraction(1)})
    assert res == {} and coords == [0, 0]
    res, coords = red.reduce({0: Fraction(1), 2: Fraction(4)})
    # (1,0,4) = (1,1,0) - (0,1,0) + 2*(0,0,2)
    assert res == {} and coords == [Fraction(-1), Fraction(2)]
    assert red.add({0: Fraction(2), 1: Fraction(1)}) is None


def test_matmul_and_transpose_shapes():
    a = [[Fraction(1), Fraction(2)]]
    b = [[Fraction(3)], [Fraction(4)]]
    assert matmul(a, b, 2) == [[Fraction(11)]]
    assert transpose(a, 2) == [[Fraction(1)], [Fraction(2)]]
    assert matmul([], [], 0) == []
    assert transpose([], 3) == [[], [], []]
