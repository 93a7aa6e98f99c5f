"""Cochain complexes, cup structures, flux assembly, gauge and scaling maps."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion import exact as ex
from twisted_torsion.complexes import (
    FluxCochain,
    GaugeCochain,
    GradedComplex,
    TwistedComplex,
    assemble_twisted,
    direct_sum,
    euler_characteristic,
    fold_to_super,
    gauge_transform,
    scaled_flux,
    scaling_operator,
    tensor_product,
)
from twisted_torsion.errors import DegreeError, InvalidComplex, SquareZeroViolation, ZeroScale
from twisted_torsion.instances import random_twisted_instance
from twisted_torsion.simplicial import cw_circle, lens_flux, lens_space, simplicial_pair, sphere_boundary

seeds = st.integers(0, 10_000)


def test_square_zero_is_enforced():
    with pytest.raises(SquareZeroViolation, match="degree 0"):
        GradedComplex((1, 1, 1), (ex.qmat([[1]]), ex.qmat([[1]])))


def test_shape_mismatch_is_rejected():
    with pytest.raises(InvalidComplex):
        GradedComplex((1, 2), (ex.qmat([[1]]),))


def test_twisted_square_zero_is_enforced():
    with pytest.raises(SquareZeroViolation):
        TwistedComplex(ex.qmat([[1]]), ex.qmat([[1]]))


def test_flux_degree_rules():
    with pytest.raises(DegreeError, match="absorbed"):
        FluxCochain({1: [1]})
    with pytest.raises(DegreeError):
        FluxCochain({2: [1]})
    with pytest.raises(DegreeError):
        GaugeCochain({3: [1]})


def test_lens_twisted_differentials():
    gc, cup, _ = lens_space(3)
    tc = assemble_twisted(gc, cup, lens_flux(7))
    # even = (e0*, e2*), odd = (e1*, e3*)
    assert np.array_equal(tc.D0, ex.qmat([[0, 0], [7, 0]]))
    assert np.array_equal(tc.D1, ex.qmat([[0, 0], [3, 0]]))


@given(seeds)
def test_random_instances_are_valid_complexes(seed):
    inst = random_twisted_instance(seed, 0, max_total=80)
    assert not inst.cup.check_leibniz(inst.gc)
    tc = assemble_twisted(inst.gc, inst.cup, inst.h)
    assert ex.is_zero(ex.matmul(tc.D1, tc.D0))
    assert ex.is_zero(ex.matmul(tc.D0, tc.D1))
    assert euler_characteristic(tc) == euler_characteristic(inst.gc)


@given(seeds)
def test_gauge_operator_intertwines(seed):
    inst = random_twisted_instance(seed, 1, max_total=80)
    h2, eps = gauge_transform(inst.gc, inst.cup, inst.h, inst.b)
    t1 = assemble_twisted(inst.gc, inst.cup, inst.h)
    t2 = assemble_twisted(inst.gc, inst.cup, h2)
    for k in (0, 1):
        assert np.array_equal(ex.matmul(eps.block(k + 1), t1.D(k)), ex.matmul(t2.D(k), eps.block(k)))
        assert ex.det(eps.block(k)) == 1


@given(seeds, st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda x: x != 0))
def test_scaling_similarity(seed, lam):
    inst = random_twisted_instance(seed, 2, max_total=80)
    t1 = assemble_twisted(inst.gc, inst.cup, inst.h)
    t2 = assemble_twisted(inst.gc, inst.cup, scaled_flux(inst.h, lam))
    c = scaling_operator(inst.gc, lam)
    # c D_h = lam^k D_{h^lam} c on the parity-k source
    for k in (0, 1):
        assert np.array_equal(ex.matmul(c[(k + 1) % 2], t1.D(k)), ex.matmul(t2.D(k), c[k]) * lam ** k)


def test_zero_scale_rejected():
    gc, _, _ = lens_space(2)
    with pytest.raises(ZeroScale):
        scaling_operator(gc, 0)


def test_fold_matches_zero_flux_assembly():
    gc, cup = simplicial_pair(sphere_boundary(3))
    a, b = fold_to_super(gc), assemble_twisted(gc, cup, FluxCochain({}))
    assert np.array_equal(a.D0, b.D0) and np.array_equal(a.D1, b.D1)


def test_tensor_product_dims_and_flux():
    l, cl, _ = lens_space(2)
    c, cc = cw_circle()
    gc, cup, h = tensor_product(l, cl, lens_flux(3), c, cc, FluxCochain({}))
    assert gc.dims == (1, 2, 2, 2, 1)
    assert not cup.check_leibniz(gc)
    assert euler_characteristic(gc) == 0
    assert h.degrees == [3]


def test_direct_sum_dims():
    g1, _, _ = lens_space(2)
    g2, _ = cw_circle()
    s = direct_sum(g1, g2)
    assert s.dims == (2, 2, 1, 1)
    assert euler_characteristic(s) == 0


def test_two_circles_give_torus_betti():
    from twisted_torsion.linalg import betti_twisted
    c, cc = cw_circle()
    gc, _, _ = tensor_product(c, cc, FluxCochain({}), c, cc, FluxCochain({}))
    assert tuple(betti_twisted(fold_to_super(gc))) == (2, 2)
