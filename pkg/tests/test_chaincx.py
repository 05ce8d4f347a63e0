from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charstack.chaincx import (
    ChainMap,
    CochainComplex,
    ComplexError,
    concentrated,
    cone,
    direct_sum,
    dual,
    fiber,
    is_quasi_iso,
    shift,
    two_term,
)
from charstack.exactla import QMatrix, kernel, rank


def circle() -> CochainComplex:
    # cellular cochains of S^1 with one vertex and one edge
    return two_term(QMatrix.zeros(1, 1), 0)


def test_dd_zero_enforced():
    d0 = QMatrix.from_rows([[1], [0]])
    d1 = QMatrix.from_rows([[1, 0]])
    with pytest.raises(ComplexError):
        CochainComplex(0, [1, 2, 1], [d0, d1])


def test_shape_mismatch():
    with pytest.raises(ComplexError):
        CochainComplex(0, [1, 2], [QMatrix.zeros(1, 1)])


def test_circle_cohomology():
    c = circle()
    assert c.cohomology_dims() == {0: 1, 1: 1}
    assert c.euler_characteristic() == 0


def test_cohomology_with_representatives():
    # 0 -> Q --(1,1)--> Q^2 -> 0
    c = two_term(QMatrix.from_rows([[1], [1]]), 0)
    h1 = c.cohomology(1)
    assert h1.dim == 1
    assert c.cohomology(0).dim == 0
    # (1,1) is a coboundary, so its class is zero
    assert h1.coordinates((1, 1)) == (0,)
    assert h1.coordinates((1, 0)) != (0,)


def test_coordinates_rejects_non_cocycle():
    c = two_term(QMatrix.from_rows([[1, 0]]), 0)
    with pytest.raises(ValueError):
        c.cohomology(0).coordinates((1, 0))


@pytest.mark.parametrize("k", [-2, -1, 1, 3])
def test_shift_convention(k):
    c = two_term(QMatrix.from_rows([[2]]), 0)
    s = shift(c, k)
    # shift(C, k)^n = C^(n+k), differential signed by (-1)^k
    assert s.lo == -k
    assert s.d(-k) == c.d(0).scale(-1 if k % 2 else 1)


def test_cone_degrees_and_sign():
    src = concentrated(1, 0)
    tgt = concentrated(1, 0)
    f = ChainMap(src, tgt, {0: QMatrix.from_rows([[3]])})
    c = cone(f)
    # cone^(-1) = src^0, cone^0 = tgt^0
    assert (c.lo, c.hi) == (-1, 0)
    assert c.d(-1) == QMatrix.from_rows([[3]])
    assert c.is_acyclic()


def test_fiber_convention():
    src = two_term(QMatrix.from_rows([[1]]), 0)
    tgt = concentrated(1, 0)
    f = ChainMap(src, tgt, {0: QMatrix.from_rows([[1]])})
    fib = fiber(f)
    # fiber^n = src^n ⊕ tgt^(n-1)
    assert [fib.dim(n) for n in (0, 1)] == [1, 2]
    assert fib.d(0) == QMatrix.from_rows([[1], [-1]])


def test_cone_of_identity_is_acyclic():
    c = direct_sum(circle(), two_term(QMatrix.from_rows([[1, 1]]), -1))
    assert cone(ChainMap.identity(c)).is_acyclic()
    assert is_quasi_iso(ChainMap.identity(c))


def test_zero_map_not_quasi_iso():
    c = circle()
    assert not is_quasi_iso(ChainMap.zero(c, c))


def test_chain_map_must_commute():
    src = two_term(QMatrix.from_rows([[1]]), 0)
    with pytest.raises(ComplexError):
        ChainMap(src, src, {0: QMatrix.identity(1)})


def test_dual_reverses_degrees():
    c = CochainComplex(-1, [1, 2, 0], [QMatrix.from_rows([[1], [2]]), QMatrix.zeros(0, 2)])
    d = dual(c)
    assert (d.lo, d.hi) == (-1, 1)
    assert list(d.dims) == [0, 2, 1]
    assert d.h_dims([-1, 0, 1]) == list(reversed(c.h_dims([-1, 0, 1])))


def test_json_round_trip():
    c = two_term(QMatrix.from_rows([["1/2", 3]]), -1)
    data = c.to_json()
    assert data["degrees"] == [-1, 0]
    assert CochainComplex.from_json(data) == c


def test_induced_map_rank():
    src = concentrated(2, 0)
    tgt = concentrated(1, 0)
    f = ChainMap(src, tgt, {0: QMatrix.from_rows([[1, 1]])})
    assert rank(f.induced_map(0)) == 1
    assert f.compose(ChainMap.identity(src)).component(0) == f.component(0)


@st.composite
def complexes(draw):
    # rows of d^1 span the annihilator of Im d^0, so d^1 d^0 = 0
    a = draw(st.integers(0, 3))
    b = draw(st.integers(1, 4))
    vals = st.integers(-2, 2)
    d0 = QMatrix(b, a, [[draw(vals) for _ in range(a)] for _ in range(b)])
    left = kernel(d0.T)
    rows = left.vectors()
    d1 = QMatrix.from_rows(rows, b) if rows else QMatrix.zeros(0, b)
    return CochainComplex(draw(st.integers(-2, 2)), [a, b, d1.rows], [d0, d1])


@settings(max_examples=50, deadline=None)
@given(complexes())
def test_euler_from_cohomology(c):
    h = c.cohomology_dims()
    assert sum((-1) ** (n % 2) * h[n] for n in h) == c.euler_characteristic()


@settings(max_examples=50, deadline=None)
@given(complexes(), st.integers(-3, 3))
def test_shift_moves_cohomology(c, k):
    s = shift(c, k)
    for n in c.degrees:
        assert s.cohomology(n - k).dim == c.cohomology(n).dim


@settings(max_examples=50, deadline=None)
@given(complexes())
def test_dual_cohomology(c):
    d = dual(c)
    for n in c.degrees:
        assert d.cohomology(-n).dim == c.cohomology(n).dim
