"""Reports and seeded instance generation."""

import json
from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from twisted_torsion.instances import random_top_instance, random_twisted_instance, rng_for
from twisted_torsion.report import CheckResult, Report, compare, fmt_value


def test_rng_streams_independent_of_draw_order():
    a = rng_for(5, "twisted", 3).integers(0, 1000, 5)
    rng_for(5, "twisted", 2).integers(0, 1000, 50)
    b = rng_for(5, "twisted", 3).integers(0, 1000, 5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, rng_for(5, "gram", 3).integers(0, 1000, 5))


@given(st.integers(0, 1000))
def test_instances_reproducible(seed):
    a, b = random_twisted_instance(seed, 0), random_twisted_instance(seed, 0)
    assert a.gc.dims == b.gc.dims
    assert all((x == y).all() for x, y in zip(a.gc.coboundaries, b.gc.coboundaries))
    assert sum(a.gc.dims) <= 200


def test_top_instance_has_single_vertex():
    inst = random_top_instance(1, 0)
    assert inst.gc.dims[0] == 1 and len(inst.gc.dims) == 4


def test_compare_exact_and_float():
    assert compare("x", 0.5, 0.5, 0.0, Fraction(1, 2), Fraction(1, 2)).passed
    assert not compare("x", 0.5, 0.5, 0.0, Fraction(1, 2), Fraction(1, 3)).passed
    assert compare("y", 1.0, 1.0 + 1e-12, 1e-9).passed
    assert not compare("y", 1.0, 1.1, 1e-9).passed


def test_report_sorted_and_stable():
    rep = Report("demo", seed=1, trials=2)
    rep.extend([CheckResult("b", True, "1", "1", runtime=0.2), CheckResult("a", False, "1", "2", runtime=0.1)])
    assert [c.name for c in rep.sorted_checks()] == ["a", "b"]
    assert not rep.passed
    text = rep.to_json()
    assert text.endswith("\n") and "runtime" not in text
    assert "runtime" in json.loads(rep.to_json(timing=True))["checks"][0]


def test_fmt_value():
    assert fmt_value(Fraction(7, 3)) == "7/3"
    assert fmt_value(1 / 3) == "0.333333333333333"
