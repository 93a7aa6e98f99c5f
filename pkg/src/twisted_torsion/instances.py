"""Seeded random instances.

Every random object derives from one integer seed through
``numpy.random.SeedSequence(seed, spawn_key=(stream, index))`` feeding a PCG64
generator, so instance k of a stream is reproducible on any platform and
independent of how many other instances were drawn.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact as ex
from .complexes import (
    CupStructure,
    FluxCochain,
    GaugeCochain,
    GradedComplex,
    TwistedComplex,
    explicit_cup,
)
from .linalg import InnerProductData, harmonic_projection
from .simplicial import SimplicialComplexData, simplicial_pair

STREAMS = {
    "twisted": 1, "gram": 2, "gauge": 3, "top": 4, "metric": 5, "kunneth": 6, "complex": 7, "spd": 8,
}


def rng_for(seed: int, stream: str, index: int = 0) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(STREAMS[stream], int(index)))
    return np.random.Generator(np.random.PCG64(ss))


def _ints(rng, shape, lo=-3, hi=3) -> np.ndarray:
    return ex.qmat(rng.integers(lo, hi + 1, size=shape).tolist(), shape)


# -- simplicial instances ------------------------------------------------------

def random_simplicial(rng, n: int, vertices: int, tops: int, extras: int = 2,
                      sphere: bool = False) -> SimplicialComplexData:
    """Union of random n-simplices plus a few random lower simplices.

    With sphere set, the n-faces of a random (n+1)-simplex are added too, so
    H^n is nonzero and a random top cocycle usually has a nontrivial class.
    """
    maximal = []
    if sphere:
        hull = sorted(rng.choice(vertices, n + 2, replace=False).tolist())
        maximal += [tuple(v for v in hull if v != drop) for drop in hull]
    for _ in range(tops):
        maximal.append(tuple(sorted(rng.choice(vertices, n + 1, replace=False).tolist())))
    for _ in range(extras):
        k = int(rng.integers(1, n + 1))
        maximal.append(tuple(sorted(rng.choice(vertices, k, replace=False).tolist())))
    return SimplicialComplexData.from_maximal(vertices, maximal)


def random_cocycle(rng, gc: GradedComplex, deg: int) -> np.ndarray:
    Z = ex.nullspace(gc.delta(deg))
    if Z.shape[1] == 0:
        return ex.zvec(gc.dims[deg])
    c = ex.qvec(rng.integers(-3, 4, size=Z.shape[1]).tolist())
    return ex.matvec(Z, c)


@dataclass(frozen=True, eq=False)
class TwistedInstance:
    name: str
    gc: GradedComplex
    cup: CupStructure
    h: FluxCochain
    b: GaugeCochain
    lam: Fraction


def random_twisted_instance(seed: int, index: int, max_total: int = 200) -> TwistedInstance:
    """n = 3 (flux h3, gauge b2) or n = 5 (flux h3 + h5, gauge b4) simplicial instance."""
    rng = rng_for(seed, "twisted", index)
    for _ in range(50):
        if rng.random() < 0.6:
            n, verts, tops = 3, int(rng.integers(5, 8)), int(rng.integers(2, 6))
        else:
            n, verts, tops = 5, int(rng.integers(7, 9)), int(rng.integers(1, 3))
        sc = random_simplicial(rng, n, verts, tops, sphere=rng.random() < 0.5)
        if sum(len(l) for l in sc.simplices) <= max_total:
            break
    gc, cup = simplicial_pair(sc)
    comps = {3: random_cocycle(rng, gc, 3)}
    if n == 5:
        comps[5] = random_cocycle(rng, gc, 5)
    h = FluxCochain(comps)
    bdeg = 2 if n == 3 else 4
    b = GaugeCochain({bdeg: ex.qvec(rng.integers(-2, 3, size=gc.dims[bdeg]).tolist())})
    lam = Fraction(int(rng.integers(2, 6)) * (1 if rng.random() < 0.5 else -1), int(rng.integers(1, 4)))
    return TwistedInstance(f"twisted-{index:03d}", gc, cup, h, b, lam)


def random_spd(rng, n: int, exact: bool = True, spread: int = 2):
    """A^T A + I with small integer A (exact) or its float counterpart."""
    A = rng.integers(-spread, spread + 1, size=(n, n))
    M = A.T @ A + np.eye(n, dtype=int)
    return ex.qmat(M.tolist(), (n, n)) if exact else M.astype(float)


def random_parity_gram(rng, tc: TwistedComplex, exact: bool = True) -> InnerProductData:
    return InnerProductData(random_spd(rng, tc.even_dim, exact), random_spd(rng, tc.odd_dim, exact))


# -- graded complexes from a cohomology/acyclic decomposition ----------------------

def _unimodular(rng, n: int) -> np.ndarray:
    L, U = ex.eye(n), ex.eye(n)
    for i in range(n):
        for j in range(i):
            L[i, j] = Fraction(int(rng.integers(-1, 2)))
            U[j, i] = Fraction(int(rng.integers(-1, 2)))
    return ex.matmul(L, U)


def random_graded(rng, betti, ranks, scale: int = 3) -> GradedComplex:
    """Complex with prescribed Betti numbers and coboundary ranks.

    Degree i splits as (image of delta_{i-1}) + (cohomology) + (complement);
    delta_i maps the complement onto the image block of degree i+1 by a random
    integer diagonal, then every degree is conjugated by a unimodular matrix.
    """
    n = len(betti) - 1
    r = list(ranks) + [0]
    dims = [(r[i - 1] if i else 0) + betti[i] + r[i] for i in range(n + 1)]
    U = [_unimodular(rng, d) for d in dims]
    Uinv = [ex.inv(u) if u.size else u for u in U]
    cobs = []
    for i in range(n):
        M = ex.zeros(dims[i + 1], dims[i])
        src0 = (r[i - 1] if i else 0) + betti[i]
        for k in range(r[i]):
            M[k, src0 + k] = Fraction(int(rng.integers(1, scale + 1)) * (1 if rng.random() < 0.5 else -1))
        cobs.append(ex.matmul(U[i + 1], ex.matmul(M, Uinv[i])))
    return GradedComplex(tuple(dims), tuple(cobs))


def unit_cup(dims) -> CupStructure:
    """Cup structure on a complex with one 0-cell: e0 is the unit, all else vanishes."""
    entries = [(0, 0, q, j, j, 1) for q, d in enumerate(dims) for j in range(d)]
    entries += [(q, j, 0, 0, j, 1) for q, d in enumerate(dims) if q for j in range(d)]
    return explicit_cup(dims, entries, unit=[1])


@dataclass(frozen=True, eq=False)
class TopInstance:
    name: str
    gc: GradedComplex
    cup: CupStructure
    h: FluxCochain
    G: InnerProductData


def random_top_instance(seed: int, index: int, weighted: bool = False) -> TopInstance:
    """3-graded complex with a single 0-cell and a nonzero G-harmonic top flux."""
    rng = rng_for(seed, "top", index)
    r1 = int(rng.integers(1, 4))
    r2 = int(rng.integers(0, 3))
    betti = [1, int(rng.integers(0, 3)), int(rng.integers(0, 3)), int(rng.integers(1, 3))]
    rng_gc = random_graded(rng, betti, [0, r1, r2])
    dims = rng_gc.dims
    if weighted:
        grams = [ex.qmat([[1]])] + [random_spd(rng, d, True, 1) for d in dims[1:]]
        G = InnerProductData.from_degrees(dims, grams)
    else:
        G = InnerProductData.identity(dims)
    for _ in range(20):
        raw = ex.qvec(rng.integers(-3, 4, size=dims[3]).tolist())
        v = harmonic_projection(raw, rng_gc.delta(2), G.degree(dims, 3))
        if not ex.is_zero(v):
            break
    return TopInstance(f"top-{index:03d}", rng_gc, unit_cup(dims), FluxCochain({3: v}), G)


def small_twisted_instance(seed: int, index: int) -> TwistedInstance:
    """Small n = 3 simplicial instance, for checks with dense rational Grams."""
    rng = rng_for(seed, "gram", index)
    sc = random_simplicial(rng, 3, int(rng.integers(4, 6)), int(rng.integers(1, 3)), extras=1)
    gc, cup = simplicial_pair(sc)
    h = FluxCochain({3: random_cocycle(rng, gc, 3)})
    b = GaugeCochain({2: ex.qvec(rng.integers(-2, 3, size=gc.dims[2]).tolist())})
    return TwistedInstance(f"small-{index:03d}", gc, cup, h, b, Fraction(2))


def ill_conditioned_instance(eps: Fraction = Fraction(1, 10 ** 4)) -> TwistedComplex:
    """Rational complex whose smallest nonzero Laplacian eigenvalue is eps^2 relative."""
    D0 = ex.qmat([[1, 0], [0, eps]])
    D1 = ex.zeros(2, 2)
    return TwistedComplex(D0, D1)
