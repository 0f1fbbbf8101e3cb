from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from glagrange.exactla import QuotientMap, RationalMatrix, Subspace, as_fraction, kernel, rref, subspace_ops

entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(1, max_cols))
    rows = [[draw(entries) for _ in range(c)] for _ in range(r)]
    return RationalMatrix.from_rows(rows, c)


@st.composite
def sparse_subspaces(draw, n):
    # low-rank-biased spans so that intersections are often nontrivial
    k = draw(st.integers(0, n))
    vals = st.sampled_from([0, 0, 0, 1, -1, 2, Fraction(1, 2)])
    rows = [[draw(vals) for _ in range(n)] for _ in range(k)]
    return Subspace.span(RationalMatrix.from_rows(rows, n), n) if rows else Subspace.zero(n)


def to_sympy(M):
    return sympy.Matrix(M.rows, M.cols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator))


def test_floats_are_refused():
    with pytest.raises(TypeError):
        as_fraction(0.5)
    with pytest.raises(TypeError):
        RationalMatrix.from_rows([[0.5]])


def test_entries_in_lowest_terms():
    M = RationalMatrix.from_rows([[Fraction(2, 4), Fraction(-3, 6)], [4, Fraction(6, -8)]])
    for i in range(2):
        for j in range(2):
            x = M[i, j]
            assert x.denominator > 0
            assert Fraction(x.numerator, x.denominator) == x
    assert M[0, 0] == Fraction(1, 2) and M[1, 1] == Fraction(-3, 4)


def test_empty_shapes_are_legal():
    assert RationalMatrix.zeros(0, 3).shape == (0, 3)
    assert RationalMatrix.zeros(3, 0).shape == (3, 0)
    assert (RationalMatrix.zeros(2, 0) @ RationalMatrix.zeros(0, 4)) == RationalMatrix.zeros(2, 4)


def test_rref_identity():
    R, piv = rref(RationalMatrix.identity(3))
    assert R == RationalMatrix.identity(3) and piv == [0, 1, 2]


def test_rref_hand_example():
    R, piv = rref(RationalMatrix.from_rows([[2, 4], [1, 2]]))
    assert R == RationalMatrix.from_rows([[1, 2], [0, 0]])
    assert piv == [0]


def test_rref_zero():
    R, piv = rref(RationalMatrix.zeros(2, 2))
    assert R == RationalMatrix.zeros(2, 2) and piv == []


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_matches_sympy(M):
    R, piv = rref(M)
    if M.rows:
        oracle, opiv = to_sympy(M).rref()
        assert to_sympy(R) == oracle
        assert list(piv) == list(opiv)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rref_is_idempotent(M):
    R, piv = rref(M)
    R2, piv2 = rref(R)
    assert R2 == R and piv2 == piv
    assert all(a < b for a, b in zip(piv, piv[1:]))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_nullity(M):
    K = kernel(M)
    assert M.rank() + K.dim == M.cols
    if K.dim:
        assert (M @ K.basis.T).is_zero()


def test_kernel_examples():
    K = kernel(RationalMatrix.from_rows([[1, 2]]))
    assert K.basis == RationalMatrix.from_rows([[1, Fraction(-1, 2)]])
    assert kernel(RationalMatrix.identity(4)).dim == 0
    assert kernel(RationalMatrix.zeros(2, 2)) == Subspace.full(2)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_under_change_of_basis(data):
    n = data.draw(st.integers(1, 6))
    S = data.draw(sparse_subspaces(n))
    if S.dim == 0:
        return
    k = S.dim
    rows = [[data.draw(st.integers(-3, 3)) for _ in range(k)] for _ in range(k)]
    T = RationalMatrix.from_rows(rows, k)
    if not T.is_invertible():
        return
    assert Subspace.span(T @ S.basis, n) == S
    assert Subspace.span(T @ S.basis, n).basis == S.basis


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_grassmann_identity(data):
    n = data.draw(st.integers(1, 12))
    A = data.draw(sparse_subspaces(n))
    B = data.draw(sparse_subspaces(n))
    ops = subspace_ops(A, B)
    assert ops["sum"].dim + ops["intersection"].dim == A.dim + B.dim
    assert ops["sum"].contains_subspace(A) and ops["sum"].contains_subspace(B)
    assert A.contains_subspace(ops["intersection"]) and B.contains_subspace(ops["intersection"])


def test_subspace_ops_examples():
    e1 = Subspace.span(RationalMatrix.from_rows([[1, 0]]))
    e2 = Subspace.span(RationalMatrix.from_rows([[0, 1]]))
    ops = subspace_ops(e1, e2)
    assert ops["sum"] == Subspace.full(2) and ops["intersection"].dim == 0
    ops = subspace_ops(e1, e1)
    assert ops["sum"] == e1 and ops["intersection"] == e1 and ops["containment"]
    A = Subspace.span(RationalMatrix.from_rows([[1, 1, 0], [0, 0, 1]]))
    B = Subspace.span(RationalMatrix.from_rows([[1, 1, 1]]))
    ops = subspace_ops(A, B)
    assert ops["containment"] and ops["intersection"] == B
    assert ops["quotient_map"].dim == 1


def test_subspace_ops_dimension_mismatch():
    with pytest.raises(ValueError):
        subspace_ops(Subspace.full(2), Subspace.full(3))


def test_quotient_map_kernel_is_b():
    A = Subspace.span(RationalMatrix.from_rows([[1, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 1]]))
    B = Subspace.span(RationalMatrix.from_rows([[1, 1, 0, 1]]))
    q = QuotientMap(A, B)
    assert q.dim == A.dim - B.dim
    assert q(B.basis).is_zero()
    # surjective, and the lift is a section
    assert q(q.lift) == RationalMatrix.identity(q.dim)
    with pytest.raises(ValueError):
        q(RationalMatrix.from_rows([[0, 0, 0, 1]]))


def test_inverse_and_pow():
    M = RationalMatrix.from_rows([[2, 1], [1, 1]])
    assert M @ M.inverse() == RationalMatrix.identity(2)
    assert M ** -1 == M.inverse()
    assert M ** 3 == M @ M @ M
