"""Circle-bundle torsion values, reciprocity and the T-map chain identity."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion import exact as ex
from twisted_torsion.errors import ChainIdentityFailure, InvalidComplex
from twisted_torsion.tduality import (
    CircleBundleData,
    dual,
    lens_cross_check,
    model_from_entries,
    pair_differential,
    sphere_model,
    tmap_check,
    torsion_value,
    torus_model,
    truncated_model,
    verify_reciprocity,
)

ints = st.integers(-30, 30)


@pytest.mark.parametrize("p,q,expected", [
    (3, 7, Fraction(7, 3)), (-3, 7, Fraction(7, 3)), (4, 0, Fraction(1, 4)), (0, 5, Fraction(5)), (0, 0, Fraction(1)),
])
def test_branch_values(p, q, expected):
    assert torsion_value(CircleBundleData(p, q, 2)).normalized == expected


@given(ints, ints, st.integers(-4, 4))
def test_reciprocity_property(p, q, chi):
    b = CircleBundleData(p, q, chi)
    assert torsion_value(b).normalized * torsion_value(dual(b)).normalized == 1
    assert verify_reciprocity(b).passed


def test_log_magnitude_includes_circle_factor():
    t = torsion_value(CircleBundleData(1, 5, 2))
    assert t.value == pytest.approx((2 * np.pi) ** 2 * 5)


@pytest.mark.parametrize("p,q", [(1, 5), (3, 7), (6, 4)])
def test_lens_cross_check(p, q):
    assert lens_cross_check(p, q).passed


@given(st.integers(-6, 6), st.integers(-6, 6), st.sampled_from([sphere_model, torus_model, truncated_model]))
def test_tmap_chain_identity(p, q, make):
    m = make(p, q)
    assert m.check() == []
    assert tmap_check(m).passed


def test_pair_differential_squares_to_zero():
    D = pair_differential(truncated_model(2, 3))
    assert ex.is_zero(ex.matmul(D, D))


def test_plain_swap_does_not_intertwine():
    m = truncated_model(1, 1)
    DH, DHh = pair_differential(m), pair_differential(m.swapped())
    n = m.dim
    Z, I = ex.zeros(n, n), ex.eye(n)
    S = ex.block([[Z, I], [I, Z]])
    assert not ex.is_zero(ex.matmul(S, DH) - ex.matmul(DHh, S))


def test_inconsistent_model_rejected():
    # F Fhat = x^2 = dy, but Omega = 0 breaks F Fhat = d Omega
    names = ["1", "x", "y", "x2"]
    degs = [0, 2, 3, 4]
    prods = [(0, j, j, 1) for j in range(4)] + [(j, 0, j, 1) for j in range(1, 4)] + [(1, 1, 3, 1)]
    with pytest.raises((ChainIdentityFailure, InvalidComplex)):
        m = model_from_entries(names, degs, prods, [(2, 3, 1)], [0, 1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0])
        tmap_check(m)
