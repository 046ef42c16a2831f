from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cdgalab.qlinalg import (
    EchelonSpace, QMatrix, complement_basis, in_span, inverse, kernel_basis, rank, rref, solve_affine,
    span_rank,
)

fractions = st.builds(Fraction, st.integers(-4, 4), st.integers(1, 3))


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return QMatrix.from_rows([[draw(fractions) for _ in range(c)] for _ in range(r)], c)


def to_sympy(M):
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(x.numerator, x.denominator) for r in M.data for x in r])


def test_rank_of_known_matrix():
    M = QMatrix.from_rows([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank(M) == 2
    assert kernel_basis(M) == [(Fraction(1), Fraction(1), Fraction(-1))]


def test_rref_pivots():
    R, piv, r = rref(QMatrix.from_rows([[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1] and r == 2
    assert R.data[0] == (1, 0, -1) and R.data[1] == (0, 1, 2)


def test_solve_affine_inconsistent():
    M = QMatrix.from_rows([[1, 1], [2, 2]])
    assert solve_affine(M, (1, 3)) is None
    x, _ = solve_affine(M, (1, 2))
    assert M.apply(x) == (1, 2)


def test_inverse_of_singular_raises():
    with pytest.raises(ZeroDivisionError):
        inverse(QMatrix.from_rows([[1, 2], [2, 4]]))


def test_shape_checks():
    with pytest.raises(ValueError):
        QMatrix.from_rows([[1, 2]]) @ QMatrix.from_rows([[1, 2]])
    with pytest.raises(ValueError):
        QMatrix.from_rows([[1, 2]]).apply((1,))


@given(matrices())
@settings(max_examples=60)
def test_rank_matches_sympy(M):
    assert rank(M) == to_sympy(M).rank()


@given(matrices())
@settings(max_examples=60)
def test_rank_nullity_and_kernel(M):
    K = kernel_basis(M)
    assert rank(M) + len(K) == M.cols
    for v in K:
        assert not any(M.apply(v))
    if K:
        assert span_rank(K, M.cols) == len(K)


@given(matrices(), st.data())
@settings(max_examples=60)
def test_solve_affine_solutions(M, data):
    x0 = tuple(data.draw(fractions) for _ in range(M.cols))
    b = M.apply(x0)
    x, kernel = solve_affine(M, b)
    assert M.apply(x) == b
    assert len(kernel) == M.cols - rank(M)


@given(matrices(4, 4))
@settings(max_examples=40)
def test_inverse_roundtrip(M):
    if M.rows != M.cols or rank(M) < M.rows:
        return
    assert (M @ inverse(M)) == QMatrix.identity(M.rows)


@given(matrices(), matrices())
@settings(max_examples=40)
def test_matmul_matches_sympy(A, B):
    if A.cols != B.rows:
        return
    assert to_sympy(A @ B) == to_sympy(A) * to_sympy(B)


@given(st.lists(st.lists(fractions, min_size=4, max_size=4), min_size=1, max_size=6))
@settings(max_examples=60)
def test_echelon_space_membership(rows):
    S = EchelonSpace(4)
    for r in rows:
        S.add({k: c for k, c in enumerate(r) if c})
    assert len(S) == span_rank(rows, 4)
    for r in rows:
        assert S.contains({k: c for k, c in enumerate(r) if c})
        assert in_span(r, rows, 4)


def test_complement_basis_extends():
    sub = [(1, 0, 0)]
    amb = [(1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1)]
    comp = complement_basis(sub, amb, 3)
    assert comp == [(1, 1, 0), (0, 0, 1)]
