"""Exterior algebra, generalized star and the Born-Infeld intertwining."""

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion.genmetric import (
    ExteriorElement,
    GeneralizedMetric,
    basis,
    exp_wedge,
    generalized_star,
    hodge_star,
    index,
    intertwining_sides,
    merge_sign,
    random_metric,
    verify_intertwining,
)
from twisted_torsion.instances import rng_for


def test_basis_counts():
    for n in range(1, 6):
        assert len(basis(n)) == 2 ** n


def test_merge_sign():
    assert merge_sign((0,), (1,)) == 1
    assert merge_sign((1,), (0,)) == -1
    assert merge_sign((0,), (0,)) == 0
    assert merge_sign((1, 2), (0,)) == 1


@given(st.integers(2, 4), st.integers(0, 10_000))
def test_wedge_associative_and_graded_commutative(n, seed):
    rng = np.random.default_rng(seed)
    N = 2 ** n
    a, b, c = (ExteriorElement(n, rng.integers(-2, 3, N).astype(float)) for _ in range(3))
    lhs = a.wedge(b).wedge(c).coeffs
    rhs = a.wedge(b.wedge(c)).coeffs
    assert np.allclose(lhs, rhs)
    x, y = a.degree_part(1), b.degree_part(1)
    assert np.allclose(x.wedge(y).coeffs, -y.wedge(x).coeffs)


def test_star_of_one_form_diagonal_metric():
    # g = diag(4, 1, 1): star dx1 = (1/2) dx2 ^ dx3
    gm = GeneralizedMetric.rational([[4, 0, 0], [0, 1, 0], [0, 0, 1]])
    w = ExteriorElement.unit(3, (0,), exact=True)
    out = generalized_star(gm, w).terms()
    assert out == {(1, 2): sp.Rational(1, 2)}


def test_star_of_one_with_b_field():
    # g = I, B = 3 e12 on R^2: star 1 = 3 + 10 e12
    gm = GeneralizedMetric.rational([[1, 0], [0, 1]], [[0, 3], [-3, 0]])
    out = generalized_star(gm, ExteriorElement.unit(2, (), exact=True)).terms()
    assert out == {(): 3, (0, 1): 10}


@pytest.mark.parametrize("diag", [[1, 1], [2, 3], [4, 1, 1], [1, 2, 3], [2, 1, 5, 3]])
def test_zero_b_star_is_hodge_star_exactly(diag):
    n = len(diag)
    g = np.diag([sp.Integer(d) for d in diag]).astype(object)
    gm = GeneralizedMetric.rational(g.tolist())
    S, H = gm.star_matrix(), hodge_star(g)
    assert all(sp.simplify(S[i, j] - H[i, j]) == 0 for i in range(2 ** n) for j in range(2 ** n))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_zero_b_star_is_hodge_star_float(n):
    gm = random_metric(rng_for(3, "metric", n), n, with_b=False)
    assert np.allclose(gm.star_matrix(), hodge_star(gm.g), atol=1e-12)


def test_exp_wedge_inverse():
    B = np.array([[0, 2, 1], [-2, 0, 3], [-1, -3, 0]], dtype=float)
    assert np.allclose(exp_wedge(B) @ exp_wedge(-B), np.eye(8))


@given(st.integers(2, 6), st.integers(0, 10_000))
def test_intertwining_property(n, seed):
    rng = np.random.default_rng(seed)
    gm = random_metric(rng, n)
    N = 2 ** n
    res = verify_intertwining(gm, [(rng.uniform(-1, 1, N), rng.uniform(-1, 1, N))], 1e-10)
    assert res.passed, res.line()


def test_intertwining_exact_rational():
    gm = GeneralizedMetric.rational([[2, 1], [1, 2]], [[0, sp.Rational(1, 2)], [-sp.Rational(1, 2), 0]])
    P, R = intertwining_sides(gm)
    assert all(sp.simplify(P[i, j] - R[i, j]) == 0 for i in range(4) for j in range(4))


def test_pairing_symmetric_positive_without_b():
    gm = random_metric(np.random.default_rng(0), 3, with_b=False)
    P = gm.pairing_matrix()
    assert np.allclose(P, P.T)
    assert np.all(np.linalg.eigvalsh((P + P.T) / 2) > 0)
