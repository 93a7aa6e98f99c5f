"""Acceptance criteria 1-12, each at its stated size and tolerance."""

import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import sympy as sp

from twisted_torsion.complexes import assemble_twisted, fold_to_super
from twisted_torsion.genmetric import GeneralizedMetric, hodge_star
from twisted_torsion.instances import random_twisted_instance
from twisted_torsion.simplicial import lens_flux, lens_space
from twisted_torsion.spectral import spectral_sequence
from twisted_torsion.tduality import CircleBundleData, lens_cross_check, sphere_model, tmap_check, verify_reciprocity
from twisted_torsion.torsion import FunctorialInputs, twisted_torsion, verify_functorial
from twisted_torsion.verify import run_suite


def failures(rep):
    bad = [c.name for c in rep.checks if not c.passed]
    return f"{len(rep.checks)} checks, {len(bad)} failed" + (f": {', '.join(bad[:5])}" if bad else "")


def test_criterion_01_lens_torsion(acceptance):
    t0 = time.perf_counter()
    bad = []
    for p in range(1, 21):
        gc, cup, _ = lens_space(p)
        if twisted_torsion(fold_to_super(gc), exact=True).exact_value != Fraction(1, p):
            bad.append((p, 0))
        for q in range(1, 21):
            if twisted_torsion(assemble_twisted(gc, cup, lens_flux(q)), exact=True).exact_value != Fraction(q, p):
                bad.append((p, q))
    dt = time.perf_counter() - t0
    acceptance(1, not bad and dt < 1.0, "lens torsion 1/p and q/p exactly",
               f"420 cases, {len(bad)} wrong, {dt:.3f} s")


def test_criterion_02_betti_euler(acceptance):
    t0 = time.perf_counter()
    rep = run_suite("betti", seed=1, trials=100, tol=0.0)
    dt = time.perf_counter() - t0
    acceptance(2, rep.passed and dt < 30.0, "Betti/Euler with scaling and gauge invariance",
               f"{failures(rep)}, {dt:.1f} s")


def test_criterion_03_spectrum_symmetry(acceptance):
    rep = run_suite("spectrum-symmetry", seed=1, trials=100, tol=1e-9)
    acceptance(3, rep.passed, "even/odd nonzero spectra agree; d-dagger-d parts partition", failures(rep))


def test_criterion_04_hodge_cross_oracle(acceptance):
    rep = run_suite("hodge", seed=1, trials=100, tol=1e-9)
    ill = [c for c in rep.checks if c.name == "hodge-ill-conditioned"]
    acceptance(4, rep.passed and bool(ill) and ill[0].passed, "floating zero modes equal exact Betti",
               failures(rep))


def test_criterion_05_gram_covariance(acceptance):
    rep = run_suite("gram-covariance", seed=1, trials=25, tol=1e-8)
    acceptance(5, rep.passed and len(rep.checks) == 25, "Gram covariance, 25 instances x 10 Grams", failures(rep))


def test_criterion_06_gauge_covariance(acceptance):
    gauges = []
    for i in range(25):
        inst = random_twisted_instance(1, i, max_total=90)
        gauges.append((inst.gc, inst.cup, inst.h, inst.b))
    res = verify_functorial(FunctorialInputs(gauges=gauges))
    exact = all(r.deviation == 0.0 and r.tol == 0.0 for r in res)
    bad = [r.name for r in res if not r.passed]
    acceptance(6, not bad and exact and len(res) == 50, "gauge covariance exact on 25 instances",
               f"{len(res)} checks, {len(bad)} failed")


def test_criterion_07_functorial(acceptance):
    rep = run_suite("kunneth", seed=1, trials=5, tol=1e-8)
    kun = [c for c in rep.checks if c.name.startswith("kunneth")]
    sums = [c for c in rep.checks if c.name.startswith("direct-sum")]
    sums_exact = all(c.deviation == 0.0 for c in sums)
    acceptance(7, rep.passed and len(kun) == 10 and sums_exact, "direct sums exact, Kunneth on 10 products",
               failures(rep))


def test_criterion_08_top_degree(acceptance):
    km = run_suite("km-top", seed=1, trials=10, tol=1e-8)
    blk = run_suite("block-identity", seed=1, trials=10, tol=1e-8)
    acceptance(8, km.passed and blk.passed, "top-degree KM map and block identity",
               f"km-top {failures(km)}; block {failures(blk)}")


def test_criterion_09_born_infeld(acceptance):
    rep = run_suite("born-infeld", seed=1, trials=50, tol=1e-10)
    hodge_ok = True
    for diag in ([1, 1], [2, 3], [4, 1, 1], [1, 2, 3], [2, 1, 5, 3], [1, 2, 1, 3, 2]):
        g = np.diag([sp.Integer(d) for d in diag]).astype(object)
        S, H = GeneralizedMetric.rational(g.tolist()).star_matrix(), hodge_star(g)
        n = 2 ** len(diag)
        hodge_ok &= all(sp.simplify(S[i, j] - H[i, j]) == 0 for i in range(n) for j in range(n))
    worst = max(c.deviation for c in rep.checks)
    acceptance(9, rep.passed and hodge_ok, "Born-Infeld intertwining and exact Hodge star",
               f"{failures(rep)}, worst dev {worst:.2e}, hodge exact {hodge_ok}")


def test_criterion_10_spectral_sequence(acceptance):
    bad = []
    for i in range(100):
        inst = random_twisted_instance(1, i)
        if not spectral_sequence(inst.gc, inst.cup, inst.h).consistent:
            bad.append(i)
    gc, cup, _ = lens_space(1)
    lens_ok = True
    for q in (1, 2, 5):
        ss = spectral_sequence(gc, cup, lens_flux(q))
        lens_ok &= any(ss.differential_ranks.get(3, ())) and tuple(ss.e_infinity) == (0, 0)
    acceptance(10, not bad and lens_ok, "E_infinity equals twisted Betti; d3 kills L(1,1)",
               f"100 instances, {len(bad)} inconsistent, lens {lens_ok}")


def test_criterion_11_tduality(acceptance):
    rec = [verify_reciprocity(CircleBundleData(p, q, 2)) for p in range(1, 13) for q in range(1, 13)]
    branches = [verify_reciprocity(CircleBundleData(p, q, chi)) for p, q in [(3, 0), (0, 4), (0, 0), (5, 7)]
                for chi in (2, 0, -2)]
    tm = tmap_check(sphere_model(1, 5))
    cross = [lens_cross_check(p, q) for p, q in [(1, 5), (3, 7), (6, 4), (12, 1)]]
    ok = all(r.passed for r in rec + branches + cross) and tm.passed
    acceptance(11, ok, "reciprocity, branches, S2 T-map, lens cross-check",
               f"{len(rec)} + {len(branches)} reciprocity, tmap {tm.status}, {len(cross)} cross-checks")


def test_criterion_12_determinism(acceptance):
    outs = []
    for _ in range(2):
        for suite in ("betti", "born-infeld", "kunneth"):
            r = subprocess.run([sys.executable, "-m", "twisted_torsion", "verify", suite, "--seed", "1", "--json"],
                               capture_output=True, check=False)
            outs.append((suite, r.returncode, r.stdout))
    same = all(outs[i] == outs[i + 3] for i in range(3))
    acceptance(12, same and all(o[1] == 0 for o in outs), "verify --seed 1 is byte-identical across runs",
               "betti, born-infeld, kunneth")
