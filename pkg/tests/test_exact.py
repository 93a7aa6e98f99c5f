"""Exact rational linear algebra against sympy as an independent oracle."""

from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion import exact as ex


def int_matrices(max_rows=6, max_cols=6, lo=-4, hi=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)))


def square(max_n=5):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n))


def to_sympy(M):
    return sp.Matrix([[sp.Rational(x.numerator, x.denominator) for x in row] for row in M])


@given(int_matrices())
def test_rank_matches_sympy(rows):
    M = ex.qmat(rows)
    assert ex.rank(M) == sp.Matrix(rows).rank()


@given(int_matrices())
def test_rref_matches_sympy(rows):
    R, piv = ex.rref(ex.qmat(rows))
    Rs, pivs = sp.Matrix(rows).rref()
    assert list(piv) == list(pivs)
    assert to_sympy(R) == Rs


@given(square())
def test_det_matches_sympy(rows):
    assert ex.det(ex.qmat(rows)) == Fraction(int(sp.Matrix(rows).det()))


@given(int_matrices())
def test_nullspace_is_kernel_of_full_dimension(rows):
    M = ex.qmat(rows)
    N = ex.nullspace(M)
    assert N.shape[1] == M.shape[1] - ex.rank(M)
    assert ex.is_zero(ex.matmul(M, N))
    if N.shape[1]:
        assert ex.rank(N) == N.shape[1]


@given(int_matrices())
def test_column_basis_spans_image(rows):
    M = ex.qmat(rows)
    B = ex.column_basis(M)
    assert B.shape[1] == ex.rank(M) == ex.rank(ex.hstack(B, M))


@given(square())
def test_inverse_and_solve(rows):
    M = ex.qmat(rows)
    if ex.det(M) == 0:
        return
    Mi = ex.inv(M)
    assert np.array_equal(ex.matmul(M, Mi), ex.eye(len(rows)))
    b = ex.qvec(range(1, len(rows) + 1))
    assert np.array_equal(ex.matvec(M, ex.solve(M, b)), b)


def test_solve_reports_inconsistent_system():
    M = ex.qmat([[1, 1], [2, 2]])
    assert ex.solve(M, ex.qvec([1, 3])) is None


@given(st.fractions(min_value=0, max_value=100, max_denominator=50))
def test_sqrt_exact_round_trip(x):
    r = ex.sqrt_exact(x * x)
    assert r == abs(x)


@pytest.mark.parametrize("x,expected", [(Fraction(49, 9), Fraction(7, 3)), (Fraction(2), None), (Fraction(0), Fraction(0))])
def test_sqrt_exact_values(x, expected):
    assert ex.sqrt_exact(x) == expected
    assert ex.is_perfect_square(x) == (expected is not None)


def test_kron_and_block_diag_shapes():
    A, B = ex.qmat([[1, 2]]), ex.qmat([[0], [3]])
    K = ex.kron(A, B)
    assert K.shape == (2, 2) and K[1, 1] == 6
    D = ex.block_diag(A, B)
    assert D.shape == (3, 3) and D[2, 2] == 3 and D[0, 2] == 0


def test_float_inputs_are_rejected_for_frac():
    with pytest.raises((TypeError, ValueError)):
        ex.frac(0.1)
