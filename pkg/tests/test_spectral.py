"""Filtration spectral sequence of the twisted complex."""

from hypothesis import given, settings
from hypothesis import strategies as st

from twisted_torsion import exact as ex
from twisted_torsion.complexes import FluxCochain, tensor_product
from twisted_torsion.instances import random_twisted_instance
from twisted_torsion.simplicial import cw_circle, cw_torus, lens_flux, lens_space
from twisted_torsion.spectral import spectral_sequence


def test_lens_d3_kills_everything():
    gc, cup, _ = lens_space(1)
    ss = spectral_sequence(gc, cup, lens_flux(1))
    assert ss.pages[2] == (1, 0, 0, 1)
    assert ss.differential_ranks[3][0] == 1
    assert tuple(ss.e_infinity) == (0, 0)
    assert ss.d2_vanishes and ss.d3_matches_cup


def test_lens_zero_flux_degenerates():
    gc, cup, _ = lens_space(1)
    ss = spectral_sequence(gc, cup, FluxCochain({}))
    assert tuple(ss.e_infinity) == (1, 1)
    assert all(not any(r) for r in ss.differential_ranks.values())


def test_three_torus_with_volume_flux():
    t2, c2 = cw_torus()
    s1, c1 = cw_circle()
    gc, cup, _ = tensor_product(t2, c2, FluxCochain({}), s1, c1, FluxCochain({}))
    ss = spectral_sequence(gc, cup, FluxCochain({3: ex.qvec([1])}))
    assert ss.pages[2] == (1, 3, 3, 1)
    assert tuple(ss.e_infinity) == (3, 3)
    assert ss.consistent and ss.d3_matches_cup


@settings(max_examples=10)
@given(st.integers(0, 10_000))
def test_e_infinity_matches_betti(seed):
    inst = random_twisted_instance(seed, 10, max_total=100)
    ss = spectral_sequence(inst.gc, inst.cup, inst.h)
    assert ss.consistent
    assert ss.d3_matches_cup in (None, True)
    assert "E_inf" in ss.table()
