"""Simplicial and CW front ends: coboundaries, cup products, local systems."""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion import exact as ex
from twisted_torsion.complexes import euler_characteristic
from twisted_torsion.errors import InvalidComplex, RelationViolation, UnknownGenerator
from twisted_torsion.linalg import betti_graded
from twisted_torsion.simplicial import (
    GroupRingBoundary,
    Representation,
    SimplicialComplexData,
    aw_cup,
    check_unimodular,
    circle_cw,
    circle_simplicial,
    coboundary_matrices,
    cw_torus,
    evaluate_local_system,
    reduce_word,
    simplicial_pair,
    sphere_boundary,
    torus_triangulation,
    trivial_representation,
)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sphere_betti(k):
    b = betti_graded(coboundary_matrices(sphere_boundary(k)))
    assert b == [1] + [0] * (k - 1) + [1]


def test_torus_betti_and_cup():
    gc, cup = simplicial_pair(torus_triangulation())
    assert betti_graded(gc) == [1, 2, 1]
    assert euler_characteristic(gc) == 0
    # the cup of the two degree-1 generators is a generator of H^2
    from twisted_torsion.linalg import graded_cohomology_basis
    a, b = graded_cohomology_basis(gc, 1)
    ab = cup.product(1, a, 1, b)
    assert ex.rank(ex.hstack(ex.column_basis(gc.delta(1)), ab.reshape(-1, 1))) > ex.rank(gc.delta(1))


@pytest.mark.parametrize("sc", [sphere_boundary(2), torus_triangulation(), circle_simplicial()])
def test_aw_cup_axioms(sc):
    gc, cup = simplicial_pair(sc)
    assert cup.check_associativity() == []
    assert cup.check_leibniz(gc) == []
    u = cup.unit()
    x = ex.qvec(range(1, gc.dims[1] + 1))
    assert np.array_equal(cup.product(0, u, 1, x), x)


@given(st.lists(st.tuples(st.sampled_from("ab"), st.integers(-3, 3)), max_size=8))
def test_reduce_word_is_idempotent(word):
    w = reduce_word(word)
    assert reduce_word(w) == w
    assert all(e != 0 for _, e in w)
    assert all(w[i][0] != w[i + 1][0] for i in range(len(w) - 1))


def test_circle_local_system_acyclic_for_nontrivial_character():
    rho = Representation({"t": ex.qmat([[2]])}, (), 1)
    gc = evaluate_local_system(circle_cw(), rho)
    assert betti_graded(gc) == [0, 0]
    assert not check_unimodular(rho)


def test_circle_trivial_system():
    gc = evaluate_local_system(circle_cw(), trivial_representation(1))
    assert betti_graded(gc) == [1, 1]


def test_relation_violation_detected():
    with pytest.raises(RelationViolation):
        Representation({"t": ex.qmat([[2]])}, ((("t", 3),),), 1)


def test_unknown_generator():
    rho = Representation({"s": ex.qmat([[1]])}, (), 1)
    with pytest.raises(UnknownGenerator):
        evaluate_local_system(circle_cw(), rho)


def test_rotation_is_unimodular():
    rho = Representation({"t": ex.qmat([[0, -1], [1, 0]])}, ((("t", 4),),), 2)
    assert check_unimodular(rho)
    gc = evaluate_local_system(circle_cw(), rho)
    assert betti_graded(gc) == [0, 0]


def test_missing_face_rejected():
    with pytest.raises(InvalidComplex):
        SimplicialComplexData(3, (((0,), (1,)), ((0, 2),)))


def test_cw_torus():
    gc, cup = cw_torus()
    assert betti_graded(gc) == [1, 2, 1]
    assert cup.check_leibniz(gc) == []
