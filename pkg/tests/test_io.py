"""File format: parsing, validation errors and canonical round trips."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion.errors import ParseError, ValidationError
from twisted_torsion.instances import random_graded, rng_for
from twisted_torsion.io import bundled, parse_complex, parse_data, serialize
from twisted_torsion.torsion import twisted_torsion

S2 = {"kind": "simplicial", "vertex_count": 4, "name": "S2",
      "simplices": [[[0], [1], [2], [3]], [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]],
                    [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]]}
CIRCLE = {"kind": "group-ring", "cells": [1, 1],
          "boundaries": [[[[{"coeff": -1, "word": []}, {"coeff": 1, "word": [["t", 1]]}]]]],
          "representation": {"rank": 1, "generators": {"t": [["2"]]}, "relations": []}}
MODEL = {"kind": "pair-model", "names": ["1", "v"], "degrees": [0, 2],
         "products": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1]], "differential": [],
         "F": [0, 1], "Fhat": [0, 5], "Omega": [0, 0], "pairing": [[1, 0], [0, 1]]}


def test_bundled_lens_file():
    cf = parse_complex(bundled("lens_p3_q7.json"))
    assert str(twisted_torsion(cf.twisted()).exact_value) == "7/3"
    assert serialize(cf) == bundled("lens_p3_q7.json").read_text()


@pytest.mark.parametrize("doc", [S2, CIRCLE, MODEL, {"kind": "lens", "p": 5, "flux": {"3": [2]}}])
def test_round_trip_fixed_point(doc):
    s = serialize(parse_data(doc))
    assert serialize(parse_complex(s)) == s
    assert s.endswith("}\n") and "\r" not in s


@given(st.integers(0, 10_000))
def test_round_trip_random_graded(seed):
    rng = rng_for(seed, "complex", 0)
    gc = random_graded(rng, [1, int(rng.integers(0, 2)), 1], [int(rng.integers(0, 3)), int(rng.integers(0, 2))])
    doc = {"kind": "graded", "dims": list(gc.dims),
           "coboundaries": [[[str(x) for x in row] for row in M] for M in gc.coboundaries]}
    cf = parse_data(doc)
    for a, b in zip(cf.gc.coboundaries, gc.coboundaries):
        assert (a == b).all()
    s = serialize(cf)
    assert serialize(parse_complex(s)) == s


def test_syntax_error_has_position():
    with pytest.raises(ParseError) as info:
        parse_complex('{"kind": "lens",\n  "p": 3,,\n}')
    assert info.value.line == 2
    assert info.value.column is not None


def test_square_zero_violation_named():
    doc = {"kind": "graded", "dims": [1, 1, 1], "coboundaries": [[["1"]], [["1"]]]}
    with pytest.raises(ValidationError, match="delta-squared-nonzero at degree 0"):
        parse_data(doc)


def test_degree_one_flux_rejected():
    with pytest.raises(ParseError, match="absorb"):
        parse_data({"kind": "lens", "p": 3, "flux": {"1": ["1"]}})


def test_float_literal_rejected():
    with pytest.raises(ParseError, match="num/den"):
        parse_data({"kind": "graded", "dims": [1, 1], "coboundaries": [[[0.5]]]})


def test_unknown_kind():
    with pytest.raises(ParseError, match="unknown kind"):
        parse_data({"kind": "manifold"})


def test_non_cocycle_flux_rejected():
    doc = {"kind": "graded", "dims": [1, 1, 1, 1],
           "coboundaries": [[["0"]], [["1"]], [["0"]]],
           "cup": {"entries": [[0, 0, q, 0, 0, 1] for q in range(4)], "unit": ["1"]},
           "flux": {"3": ["1"]}}
    parse_data(doc)  # top degree flux is always a cocycle
    bad = dict(doc, dims=[1, 1, 1, 1, 1], coboundaries=[[["0"]], [["1"]], [["0"]], [["1"]]])
    with pytest.raises(ValidationError):
        parse_data(bad)


def test_gram_and_refs_sections():
    doc = {"kind": "lens", "p": 2,
           "gram": {"degrees": [[["2"]], [["1"]], [["1"]], [["3"]]]},
           "refs": {"degrees": [[["1"]], [], [], [["1"]]]}}
    cf = parse_data(doc)
    assert cf.gram is not None and cf.refs is not None
    s = serialize(cf)
    assert json.loads(s)["gram"]["degrees"][0] == [["2"]]


def test_non_spd_gram_rejected():
    with pytest.raises(ValidationError, match="positive definite"):
        parse_data({"kind": "lens", "p": 2, "gram": {"even": [["1", "0"], ["0", "-1"]], "odd": [["1", "0"], ["0", "1"]]}})
