"""Named property batteries used by the `verify` subcommand and the tests."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from . import exact as ex
from .complexes import (
    FluxCochain,
    assemble_twisted,
    euler_characteristic,
    fold_to_super,
    gauge_transform,
    scaled_flux,
)
from .errors import ToleranceAmbiguity, TwistedTorsionError
from .genmetric import random_metric, verify_intertwining
from .instances import (
    ill_conditioned_instance,
    random_parity_gram,
    random_top_instance,
    random_twisted_instance,
    rng_for,
    small_twisted_instance,
)
from .linalg import (
    InnerProductData,
    betti_twisted,
    dagger_d_spectrum,
    hodge_zero_modes,
    laplacians,
    spectrum_prime,
)
from .report import CheckResult, Report, compare
from .simplicial import (
    cw_circle,
    cw_point,
    cw_torus,
    lens_flux,
    lens_space,
    simplicial_pair,
    sphere_boundary,
)
from .spectral import spectral_sequence
from .tduality import (
    CircleBundleData,
    lens_cross_check,
    sphere_model,
    tmap_check,
    torus_model,
    truncated_model,
    verify_reciprocity,
)
from .torsion import (
    check_direct_sum,
    check_gauge,
    check_gram,
    check_kunneth,
    twisted_torsion,
    verify_block_identity,
    verify_km_top,
)

EMPTY = FluxCochain({})


def _guard(name: str, fn: Callable[[], list[CheckResult] | CheckResult]) -> list[CheckResult]:
    """Run a check; library errors become a FAIL naming the error."""
    t0 = time.perf_counter()
    try:
        out = fn()
    except TwistedTorsionError as err:
        out = CheckResult(name, False, detail=f"{type(err).__name__}: {err}")
    out = out if isinstance(out, list) else [out]
    dt = time.perf_counter() - t0
    for c in out:
        c.runtime = dt
    return out


# -- batteries ---------------------------------------------------------------

def suite_square_zero(seed: int, trials: int, tol: float) -> Report:
    rep = Report("square-zero", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            ok = ex.is_zero(ex.matmul(tc.D1, tc.D0)) and ex.is_zero(ex.matmul(tc.D0, tc.D1))
            _, eps = gauge_transform(inst.gc, inst.cup, inst.h, inst.b)
            dets = (ex.det(eps.even), ex.det(eps.odd))
            return [CheckResult(f"D-squared-{i:03d}", ok, "D^2", "0", 0.0, 0.0, f"dims={inst.gc.dims}"),
                    CheckResult(f"eps-det-{i:03d}", dets == (1, 1), f"{dets[0]},{dets[1]}", "1,1", 0.0, 0.0,
                                "eps_B conjugation verified exactly")]
        rep.extend(_guard(f"D-squared-{i:03d}", run))
    return rep


def suite_betti(seed: int, trials: int, tol: float) -> Report:
    rep = Report("betti", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            b = betti_twisted(tc)
            chi = euler_characteristic(tc)
            h2, _ = gauge_transform(inst.gc, inst.cup, inst.h, inst.b)
            bg = betti_twisted(assemble_twisted(inst.gc, inst.cup, h2))
            bs = betti_twisted(assemble_twisted(inst.gc, inst.cup, scaled_flux(inst.h, inst.lam)))
            return [
                CheckResult(f"euler-{i:03d}", b.euler == chi, str(b.euler), str(chi)),
                CheckResult(f"flux-scaling-{i:03d}", tuple(bs) == tuple(b), str(tuple(bs)), str(tuple(b)),
                            detail=f"lambda={inst.lam}"),
                CheckResult(f"gauge-betti-{i:03d}", tuple(bg) == tuple(b), str(tuple(bg)), str(tuple(b))),
            ]
        rep.extend(_guard(f"euler-{i:03d}", run))
    return rep


def _spectral_checks(i: int, tc, G, tol: float) -> list[CheckResult]:
    lap0, lap1 = laplacians(tc, G)
    s0 = spectrum_prime(lap0, G.parity(0), tol)
    s1 = spectrum_prime(lap1, G.parity(1), tol)
    d0 = dagger_d_spectrum(tc.D0, G.parity(0), G.parity(1), tol)
    d1 = dagger_d_spectrum(tc.D1, G.parity(1), G.parity(0), tol)
    out = []
    same = len(s0.eigenvalues) == len(s1.eigenvalues)
    dev = float("inf")
    if same:
        scale = max(1.0, float(np.max(s0.eigenvalues, initial=0.0)))
        dev = float(np.max(np.abs(s0.eigenvalues - s1.eigenvalues), initial=0.0)) / scale
    out.append(CheckResult(f"sum-zeta-{i:03d}", same and dev <= tol, f"{len(s0.eigenvalues)} eigenvalues",
                           f"{len(s1.eigenvalues)} eigenvalues", dev if same else float("inf"), tol))
    parts = np.sort(np.concatenate([d0.eigenvalues, d1.eigenvalues]))
    counts = len(parts) == len(s0.eigenvalues)
    pdev = float("inf")
    if counts:
        scale = max(1.0, float(np.max(parts, initial=0.0)))
        pdev = float(np.max(np.abs(parts - s0.eigenvalues), initial=0.0)) / scale
    out.append(CheckResult(f"part-zeta-{i:03d}", counts and pdev <= tol,
                           f"{len(d0.eigenvalues)}+{len(d1.eigenvalues)}", str(len(s0.eigenvalues)),
                           pdev if counts else float("inf"), tol))
    return out


def suite_spectrum_symmetry(seed: int, trials: int, tol: float) -> Report:
    rep = Report("spectrum-symmetry", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            if i % 2:
                G = random_parity_gram(rng_for(seed, "spd", i), tc, exact=False)
            else:
                G = InnerProductData.identity(inst.gc.dims)
            return _spectral_checks(i, tc, G, tol)
        rep.extend(_guard(f"sum-zeta-{i:03d}", run))
    return rep


def suite_hodge(seed: int, trials: int, tol: float) -> Report:
    rep = Report("hodge", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            b = betti_twisted(tc)
            z = hodge_zero_modes(tc, tol=tol)
            return CheckResult(f"hodge-{i:03d}", tuple(z) == tuple(b), str(tuple(z)), str(tuple(b)))
        rep.extend(_guard(f"hodge-{i:03d}", run))

    def ambiguous():
        try:
            z = hodge_zero_modes(ill_conditioned_instance(), tol=tol)
        except ToleranceAmbiguity as err:
            return CheckResult("hodge-ill-conditioned", True, "ToleranceAmbiguity", "ToleranceAmbiguity",
                               detail=str(err).split(";")[0])
        return CheckResult("hodge-ill-conditioned", False, str(tuple(z)), "ToleranceAmbiguity")
    rep.extend(_guard("hodge-ill-conditioned", ambiguous))
    return rep


def suite_spectral(seed: int, trials: int, tol: float) -> Report:
    rep = Report("spectral", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            ss = spectral_sequence(inst.gc, inst.cup, inst.h)
            out = [CheckResult(f"e-infinity-{i:03d}", ss.consistent, str(tuple(ss.e_infinity)),
                               str(tuple(ss.betti)), detail=f"stabilizes at {ss.stabilization_page}")]
            if ss.d3_cup_ranks is not None:
                out.append(CheckResult(f"d3-cup-{i:03d}", bool(ss.d3_matches_cup),
                                       str(ss.differential_ranks.get(3)), str(ss.d3_cup_ranks)))
            return out
        rep.extend(_guard(f"e-infinity-{i:03d}", run))
    return rep


def suite_gram_covariance(seed: int, trials: int, tol: float, grams: int = 10) -> Report:
    rep = Report("gram-covariance", seed=seed, trials=trials)
    for i in range(trials):
        inst = small_twisted_instance(seed, i)

        def run(inst=inst, i=i):
            tc = assemble_twisted(inst.gc, inst.cup, inst.h)
            rng = rng_for(seed, "spd", 1000 + i)
            Gs = [InnerProductData.identity(inst.gc.dims)] + [random_parity_gram(rng, tc) for _ in range(grams - 1)]
            return check_gram(tc, Gs, tol=tol, name=f"gram-{i:03d}")
        rep.extend(_guard(f"gram-{i:03d}", run))
    return rep


def suite_gauge_covariance(seed: int, trials: int, tol: float) -> Report:
    rep = Report("gauge-covariance", seed=seed, trials=trials)
    for i in range(trials):
        inst = random_twisted_instance(seed, i, max_total=90)
        rep.extend(_guard(f"gauge-{i:03d}-covariance",
                          lambda inst=inst, i=i: check_gauge(inst.gc, inst.cup, inst.h, inst.b, name=f"gauge-{i:03d}")))
    return rep


def product_factors():
    """Named (GradedComplex, CupStructure, FluxCochain) factors for product checks."""
    l2, c2, _ = lens_space(2)
    l3, c3, _ = lens_space(3)
    pt, cpt = cw_point()
    ci, cci = cw_circle()
    to, cto = cw_torus()
    s2, cs2 = simplicial_pair(sphere_boundary(2))
    return {
        "L(1,3;7)": (l3, c3, lens_flux(7)),
        "L(1,2;1)": (l2, c2, lens_flux(1)),
        "L(1,3)": (l3, c3, EMPTY),
        "point": (pt, cpt, EMPTY),
        "circle": (ci, cci, EMPTY),
        "torus": (to, cto, EMPTY),
        "S2": (s2, cs2, EMPTY),
    }


PRODUCT_PAIRS = [
    ("L(1,3;7)", "point"), ("L(1,3;7)", "circle"), ("L(1,2;1)", "L(1,3;7)"), ("L(1,3;7)", "S2"),
    ("L(1,3)", "S2"), ("S2", "L(1,2;1)"), ("circle", "circle"), ("torus", "L(1,2;1)"),
    ("point", "S2"), ("L(1,3)", "L(1,2;1)"),
]


def suite_kunneth(seed: int, trials: int, tol: float) -> Report:
    rep = Report("kunneth", seed=seed, trials=trials)
    f = product_factors()
    for a, b in PRODUCT_PAIRS:
        nm = f"kunneth-{a}x{b}"
        rep.extend(_guard(nm, lambda a=a, b=b, nm=nm: check_kunneth(f[a], f[b], tol, name=nm)))
    sums = [((2, 1), (3, 1)), ((3, 7), (5, 2)), ((1, 1), (4, 0)), ((6, 5), (6, 5))]
    for (p1, q1), (p2, q2) in sums:
        nm = f"direct-sum-L({p1};{q1})+L({p2};{q2})"

        def run(p1=p1, q1=q1, p2=p2, q2=q2, nm=nm):
            g1, c1, _ = lens_space(p1)
            g2, c2, _ = lens_space(p2)
            return check_direct_sum(assemble_twisted(g1, c1, lens_flux(q1)), assemble_twisted(g2, c2, lens_flux(q2)),
                                    tol, name=nm)
        rep.extend(_guard(nm, run))
    for i in range(trials):
        inst = random_twisted_instance(seed, i, max_total=60)
        other = random_twisted_instance(seed, i + 1000, max_total=60)
        nm = f"direct-sum-random-{i:03d}"
        rep.extend(_guard(nm, lambda inst=inst, other=other, nm=nm: check_direct_sum(
            assemble_twisted(inst.gc, inst.cup, inst.h), assemble_twisted(other.gc, other.cup, other.h), tol, name=nm)))
    return rep


def suite_block_identity(seed: int, trials: int, tol: float) -> Report:
    rep = Report("block-identity", seed=seed, trials=trials)
    for p, q in [(3, 7), (1, 1), (2, 5), (5, 0)]:
        nm = f"block-lens-p{p}-q{q}"
        g, c, _ = lens_space(p)
        rep.extend(_guard(nm, lambda g=g, c=c, q=q, nm=nm: verify_block_identity(g, c, lens_flux(q), tol=tol, name=nm)))
    for i in range(trials):
        inst = random_top_instance(seed, i, weighted=bool(i % 2))
        nm = f"block-random-{i:03d}"
        rep.extend(_guard(nm, lambda inst=inst, nm=nm: verify_block_identity(
            inst.gc, inst.cup, inst.h, inst.G, tol=tol, name=nm)))
    return rep


def suite_km_top(seed: int, trials: int, tol: float) -> Report:
    rep = Report("km-top", seed=seed, trials=trials)
    for p, q in [(3, 7), (1, 1), (2, 5), (7, 3)]:
        nm = f"km-lens-p{p}-q{q}"
        g, c, _ = lens_space(p)
        rep.extend(_guard(nm, lambda g=g, c=c, q=q, nm=nm: verify_km_top(g, c, lens_flux(q), tol=tol, name=nm)))
    for i in range(trials):
        inst = random_top_instance(seed, i, weighted=bool(i % 2))
        nm = f"km-random-{i:03d}"
        rep.extend(_guard(nm, lambda inst=inst, nm=nm: verify_km_top(inst.gc, inst.cup, inst.h, inst.G, tol=tol, name=nm)))
    return rep


def suite_born_infeld(seed: int, trials: int, tol: float) -> Report:
    rep = Report("born-infeld", seed=seed, trials=trials)
    for n in range(2, 7):
        def run(n=n):
            rng = rng_for(seed, "metric", n)
            worst = None
            for _ in range(trials):
                gm = random_metric(rng, n)
                N = 2 ** n
                pair = [(rng.uniform(-1, 1, N), rng.uniform(-1, 1, N))]
                res = verify_intertwining(gm, pair, tol)
                if worst is None or res.deviation > worst.deviation:
                    worst = res
            worst.name = f"born-infeld-n{n}"
            worst.detail = f"n={n}, {trials} samples, worst shown"
            return worst
        rep.extend(_guard(f"born-infeld-n{n}", run))
    return rep


def suite_tmap(seed: int, trials: int, tol: float) -> Report:
    rep = Report("tmap", seed=seed, trials=trials)
    rng = rng_for(seed, "complex", 0)
    models = [sphere_model(1, 5), sphere_model(3, 3), torus_model(2, -1), truncated_model(2, 7)]
    for _ in range(trials):
        p, q = (int(x) for x in rng.integers(-6, 7, size=2))
        models.append([sphere_model, torus_model, truncated_model][int(rng.integers(0, 3))](p, q))
    for k, m in enumerate(models):
        nm = f"tmap-{k:03d}-{m.name}"
        rep.extend(_guard(nm, lambda m=m, nm=nm: tmap_check(m, name=nm)))
    return rep


def suite_reciprocity(seed: int, trials: int, tol: float) -> Report:
    rep = Report("reciprocity", seed=seed, trials=trials)
    cases = [CircleBundleData(p, q, chi) for p in range(0, 13) for q in range(0, 13) for chi in (-2, 2)]
    for b in cases:
        rep.extend(_guard("reciprocity", lambda b=b: verify_reciprocity(b)))
    for p, q in [(1, 5), (3, 7), (2, 2), (4, 9)]:
        rep.extend(_guard(f"lens-cross-p{p}-q{q}", lambda p=p, q=q: lens_cross_check(p, q)))
    return rep


def suite_lens(seed: int, trials: int, tol: float) -> Report:
    rep = Report("lens", seed=seed, trials=trials)
    for p in range(1, 21):
        g, c, _ = lens_space(p)
        t0 = twisted_torsion(fold_to_super(g))
        rep.checks.append(compare(f"lens-p{p:02d}-q00", t0.value, 1 / p, 0.0, t0.exact_value, ex.frac(1) / p))
        for q in range(1, 21):
            t = twisted_torsion(assemble_twisted(g, c, lens_flux(q)))
            rep.checks.append(compare(f"lens-p{p:02d}-q{q:02d}", t.value, q / p, 0.0, t.exact_value,
                                      ex.frac(q) / p))
    return rep


SUITES: dict[str, tuple[Callable[[int, int, float], Report], int, float]] = {
    "square-zero": (suite_square_zero, 10, 0.0),
    "betti": (suite_betti, 10, 0.0),
    "spectrum-symmetry": (suite_spectrum_symmetry, 10, 1e-9),
    "hodge": (suite_hodge, 10, 1e-9),
    "spectral": (suite_spectral, 5, 0.0),
    "gram-covariance": (suite_gram_covariance, 5, 1e-8),
    "gauge-covariance": (suite_gauge_covariance, 5, 0.0),
    "kunneth": (suite_kunneth, 3, 1e-8),
    "block-identity": (suite_block_identity, 10, 1e-8),
    "km-top": (suite_km_top, 10, 1e-8),
    "born-infeld": (suite_born_infeld, 10, 1e-10),
    "tmap": (suite_tmap, 5, 0.0),
    "reciprocity": (suite_reciprocity, 0, 0.0),
    "lens": (suite_lens, 0, 0.0),
}


def run_suite(name: str, seed: int = 1, trials: int | None = None, tol: float | None = None) -> Report:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(sorted(SUITES))}")
    fn, default_trials, default_tol = SUITES[name]
    return fn(seed, default_trials if trials is None else trials, default_tol if tol is None else tol)
