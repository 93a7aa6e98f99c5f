"""Simplicial and cellular inputs: coboundaries, Alexander-Whitney cup
products, local coefficient systems, and the small spaces used in tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from . import exact as ex
from .complexes import CupStructure, FluxCochain, GradedComplex, explicit_cup
from .errors import InvalidComplex, RelationViolation, UnknownGenerator, ZeroP

UNIMODULAR_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SimplicialComplexData:
    """Simplices per dimension as strictly increasing vertex tuples."""

    vertex_count: int
    simplices: tuple[tuple[tuple[int, ...], ...], ...]
    name: str = ""

    def __post_init__(self):
        simp = tuple(tuple(sorted(tuple(int(v) for v in s) for s in level)) for level in self.simplices)
        object.__setattr__(self, "simplices", simp)
        for k, level in enumerate(simp):
            seen = set()
            for s in level:
                if len(s) != k + 1:
                    raise InvalidComplex(f"simplex {s} listed in dimension {k}")
                if any(a >= b for a, b in zip(s, s[1:])):
                    raise InvalidComplex(f"simplex {s} is not strictly increasing")
                if s[0] < 0 or s[-1] >= self.vertex_count:
                    raise InvalidComplex(f"simplex {s} uses an unknown vertex")
                if s in seen:
                    raise InvalidComplex(f"simplex {s} listed twice")
                seen.add(s)
        lookup = [set(level) for level in simp]
        for k in range(1, len(simp)):
            for s in simp[k]:
                for face in combinations(s, k):
                    if face not in lookup[k - 1]:
                        raise InvalidComplex(f"face {face} of {s} is missing")

    @classmethod
    def from_maximal(cls, vertex_count: int, maximal: Sequence[Sequence[int]], name: str = ""):
        top = max(len(s) for s in maximal) - 1
        levels: list[set] = [set() for _ in range(top + 1)]
        for s in maximal:
            s = tuple(sorted(s))
            for k in range(len(s)):
                levels[k].update(combinations(s, k + 1))
        return cls(vertex_count, tuple(tuple(sorted(l)) for l in levels), name)

    @property
    def dim(self) -> int:
        return len(self.simplices) - 1

    def index(self) -> list[dict[tuple[int, ...], int]]:
        return [{s: i for i, s in enumerate(level)} for level in self.simplices]


def coboundary_matrices(sc: SimplicialComplexData) -> GradedComplex:
    idx = sc.index()
    dims = tuple(len(level) for level in sc.simplices)
    cobs = []
    for k in range(len(dims) - 1):
        M = ex.zeros(dims[k + 1], dims[k])
        for r, s in enumerate(sc.simplices[k + 1]):
            for j in range(len(s)):
                face = s[:j] + s[j + 1:]
                M[r, idx[k][face]] = Fraction(-1 if j % 2 else 1)
        cobs.append(M)
    return GradedComplex(dims, tuple(cobs), name=sc.name)


def aw_cup(sc: SimplicialComplexData) -> CupStructure:
    """(a cup b)(v0..v_{p+q}) = a(v0..vp) b(vp..v_{p+q})."""
    idx = sc.index()
    table: dict = {}
    for k, level in enumerate(sc.simplices):
        for s in level:
            out = idx[k][s]
            for p in range(k + 1):
                front, back = s[:p + 1], s[p:]
                slot = table.setdefault((p, k - p), {}).setdefault((idx[p][front], idx[k - p][back]), {})
                slot[out] = ex.ONE
    dims = tuple(len(level) for level in sc.simplices)
    unit = ex.qvec([1] * dims[0])
    return CupStructure(dims, table, unit, source="alexander-whitney")


def simplicial_pair(sc: SimplicialComplexData) -> tuple[GradedComplex, CupStructure]:
    return coboundary_matrices(sc), aw_cup(sc)


# -- local systems ------------------------------------------------------------

Word = tuple[tuple[str, int], ...]


def reduce_word(word: Sequence[tuple[str, int]]) -> Word:
    out: list[tuple[str, int]] = []
    for g, e in word:
        if out and out[-1][0] == g:
            e += out.pop()[1]
        if e:
            out.append((g, int(e)))
    return tuple(out)


@dataclass(frozen=True, eq=False)
class GroupRingBoundary:
    """boundaries[i-1][sigma][tau]: coefficient of tau in the boundary of the
    i-cell sigma, a mapping word -> rational."""

    cells: tuple[int, ...]
    boundaries: tuple[tuple[tuple[dict[Word, Fraction], ...], ...], ...]
    name: str = ""

    def __post_init__(self):
        if len(self.boundaries) != max(len(self.cells) - 1, 0):
            raise InvalidComplex("need one boundary matrix per positive dimension")
        for i, B in enumerate(self.boundaries, start=1):
            if len(B) != self.cells[i] or any(len(row) != self.cells[i - 1] for row in B):
                raise InvalidComplex(f"boundary matrix in dimension {i} has the wrong shape")

    def generators(self) -> set[str]:
        return {g for B in self.boundaries for row in B for entry in row for w in entry for g, _ in w}


@dataclass(frozen=True, eq=False)
class Representation:
    generators: dict[str, np.ndarray]
    relations: tuple[Word, ...] = ()
    rank: int = 1

    def __post_init__(self):
        for g, M in self.generators.items():
            if M.shape != (self.rank, self.rank):
                raise InvalidComplex(f"generator {g} has shape {M.shape}, rank is {self.rank}")
        for w in self.relations:
            R = self.evaluate(w, dual=False)
            I = _eye_like(R)
            if not _close(R, I):
                raise RelationViolation(f"relation {w} does not evaluate to the identity")

    @property
    def exact(self) -> bool:
        return all(M.dtype == object for M in self.generators.values())

    def _gen(self, g: str, dual: bool) -> tuple[np.ndarray, np.ndarray]:
        if g not in self.generators:
            raise UnknownGenerator(f"generator {g!r} not in representation")
        M = self.generators[g]
        if M.dtype == object:
            Mi = ex.inv(M)
            return (Mi.T.copy(), M.T.copy()) if dual else (M, Mi)
        Mi = np.linalg.inv(M)
        return (Mi.T, M.T) if dual else (M, Mi)

    def evaluate(self, word: Word, dual: bool = True) -> np.ndarray:
        """rho(w), or its contragredient rho(w)^{-T} when dual is set."""
        out = ex.eye(self.rank) if self.exact else np.eye(self.rank)
        for g, e in word:
            fwd, bwd = self._gen(g, dual)
            M = fwd if e > 0 else bwd
            for _ in range(abs(e)):
                out = ex.matmul(out, M) if out.dtype == object and M.dtype == object else np.asarray(out, float) @ np.asarray(M, float)
        return out


def _eye_like(R: np.ndarray) -> np.ndarray:
    return ex.eye(R.shape[0]) if R.dtype == object else np.eye(R.shape[0])


def _close(A: np.ndarray, B: np.ndarray) -> bool:
    if A.dtype == object and B.dtype == object:
        return ex.is_zero(A - B)
    return bool(np.allclose(ex.to_float(A), ex.to_float(B), atol=1e-12, rtol=0))


def trivial_representation(rank: int = 1, generators: Sequence[str] = ("t",)) -> Representation:
    return Representation({g: ex.eye(rank) for g in generators}, (), rank)


def evaluate_local_system(grb: GroupRingBoundary, rho: Representation) -> GradedComplex:
    """Cochains Hom(C(K~), E): blocks sum_w c_w rho(w)^{-T}."""
    unknown = grb.generators() - set(rho.generators)
    if unknown:
        raise UnknownGenerator(f"generators {sorted(unknown)} missing from representation")
    r = rho.rank
    exact = rho.exact
    dims = tuple(c * r for c in grb.cells)
    cobs = []
    for i, B in enumerate(grb.boundaries, start=1):
        M = ex.zeros(dims[i], dims[i - 1]) if exact else np.zeros((dims[i], dims[i - 1]))
        for s, row in enumerate(B):
            for t, entry in enumerate(row):
                for w, c in entry.items():
                    blk = rho.evaluate(w) * (c if exact else float(c))
                    M[s * r:(s + 1) * r, t * r:(t + 1) * r] += blk
        cobs.append(M)
    try:
        return GradedComplex(dims, tuple(cobs), name=grb.name)
    except InvalidComplex as err:
        raise RelationViolation(f"evaluated coboundary does not square to zero: {err}") from err


def check_unimodular(rho: Representation) -> bool:
    for M in rho.generators.values():
        if M.dtype == object:
            if abs(ex.det(M)) != 1:
                return False
        elif abs(abs(np.linalg.det(M)) - 1.0) > UNIMODULAR_TOL:
            return False
    return True


# -- built-in spaces ------------------------------------------------------------

def point() -> SimplicialComplexData:
    return SimplicialComplexData(1, (((0,),),), name="point")


def circle_simplicial() -> SimplicialComplexData:
    return SimplicialComplexData.from_maximal(3, [(0, 1), (1, 2), (0, 2)], name="circle")


def sphere_boundary(k: int) -> SimplicialComplexData:
    """Boundary of the (k+1)-simplex, a triangulated k-sphere."""
    verts = range(k + 2)
    return SimplicialComplexData.from_maximal(k + 2, list(combinations(verts, k + 1)), name=f"S{k}")


def torus_triangulation() -> SimplicialComplexData:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    tris = []
    for i in range(7):
        tris.append(tuple(sorted({i, (i + 1) % 7, (i + 3) % 7})))
        tris.append(tuple(sorted({i, (i + 2) % 7, (i + 3) % 7})))
    return SimplicialComplexData.from_maximal(7, tris, name="torus")


def circle_cw() -> GroupRingBoundary:
    """One 0-cell, one 1-cell, boundary t - 1."""
    entry = {(("t", 1),): Fraction(1), (): Fraction(-1)}
    return GroupRingBoundary((1, 1), (((entry,),),), name="circle_cw")


def lens_space(p: int) -> tuple[GradedComplex, CupStructure, np.ndarray]:
    """Cells e0..e3 with delta e1* = p e2*; e0* is the unit and e3* cup e0* = e3*.

    Products among e1*, e2* are taken to be zero, the only choice forced
    by degrees and compatible with the Leibniz rule for every p.
    """
    if p == 0:
        raise ZeroP("lens space needs p != 0")
    z = ex.zeros(1, 1)
    gc = GradedComplex((1, 1, 1, 1), (z, ex.qmat([[p]]), ex.zeros(1, 1)), name=f"L(1,{p})")
    entries = [(0, 0, q, 0, 0, 1) for q in range(4)] + [(q, 0, 0, 0, 0, 1) for q in range(1, 4)]
    cup = explicit_cup(gc.dims, entries, unit=[1])
    return gc, cup, ex.qvec([1])


def lens_flux(q) -> FluxCochain:
    return FluxCochain({3: ex.qvec([q])})


def cw_point() -> tuple[GradedComplex, CupStructure]:
    gc = GradedComplex((1,), (), name="point")
    return gc, explicit_cup((1,), [(0, 0, 0, 0, 0, 1)], unit=[1])


def cw_circle() -> tuple[GradedComplex, CupStructure]:
    gc = GradedComplex((1, 1), (ex.zeros(1, 1),), name="S1")
    entries = [(0, 0, 0, 0, 0, 1), (0, 0, 1, 0, 0, 1), (1, 0, 0, 0, 0, 1)]
    return gc, explicit_cup(gc.dims, entries, unit=[1])


def cw_torus() -> tuple[GradedComplex, CupStructure]:
    """Minimal CW torus: a, b in degree 1, ab = f = -ba."""
    gc = GradedComplex((1, 2, 1), (ex.zeros(2, 1), ex.zeros(1, 2)), name="T2")
    entries = [(0, 0, q, j, j, 1) for q, d in enumerate(gc.dims) for j in range(d)]
    entries += [(q, j, 0, 0, j, 1) for q, d in enumerate(gc.dims) if q for j in range(d)]
    entries += [(1, 0, 1, 1, 0, 1), (1, 1, 1, 0, 0, -1)]
    return gc, explicit_cup(gc.dims, entries, unit=[1])
