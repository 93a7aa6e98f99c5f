"""Spectral sequence of the degree filtration F^p = (degrees >= p) on a twisted complex.

The twisted differential D = delta + h_3 cup + h_5 cup + ... raises degree by at
least one, so D(F^p) lies in F^{p+1}.  Pages are computed directly from

    Z_r^p = {x in F^p : D x in F^{p+r}},
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + D Z_{r-1}^{p-r+1}),

with d_r : E_r^p -> E_r^{p+r}.  Everything is exact over Q.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exact as ex
from .complexes import CupStructure, FluxCochain, GradedComplex, assemble_twisted, cup_cochains
from .linalg import BettiPair, betti_graded, betti_twisted, graded_cohomology_basis


@dataclass(frozen=True)
class SpectralSequenceReport:
    pages: dict[int, tuple[int, ...]]          # r -> (dim E_r^0, ..., dim E_r^n)
    differential_ranks: dict[int, tuple[int, ...]]  # r -> rank of d_r leaving E_r^p
    stabilization_page: int
    e_infinity: BettiPair
    betti: BettiPair
    d2_vanishes: bool
    d3_cup_ranks: tuple[int, ...] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return tuple(self.e_infinity) == tuple(self.betti)

    @property
    def d3_matches_cup(self) -> bool | None:
        if self.d3_cup_ranks is None:
            return None
        return self.d3_cup_ranks == self.differential_ranks.get(3)

    def table(self) -> str:
        n = len(next(iter(self.pages.values()))) - 1
        head = "page " + " ".join(f"p={p:<3d}" for p in range(n + 1)) + "  rank(d_r)"
        lines = [head]
        for r in sorted(self.pages):
            dims = " ".join(f"{d:<5d}" for d in self.pages[r])
            ranks = ",".join(str(x) for x in self.differential_ranks.get(r, ()))
            lines.append(f"E_{r:<3d}{dims}  [{ranks}]")
        lines.append(f"stabilizes at page {self.stabilization_page}")
        lines.append(f"E_inf totals (even, odd) = ({self.e_infinity.b0}, {self.e_infinity.b1})")
        lines.append(f"twisted Betti (even, odd) = ({self.betti.b0}, {self.betti.b1})")
        lines.append(f"d_2 = 0: {self.d2_vanishes}")
        if self.d3_cup_ranks is not None:
            lines.append(f"d_3 ranks match [h_3] cup: {self.d3_matches_cup}")
        return "\n".join(lines)


class _Filtered:
    """The total complex with its degree filtration, laid out degree by degree."""

    def __init__(self, gc: GradedComplex, cup: CupStructure, h: FluxCochain):
        self.gc = gc
        self.n = gc.n
        self.offsets = np.concatenate([[0], np.cumsum(gc.dims)]).astype(int)
        N = int(self.offsets[-1])
        D = ex.zeros(N, N)
        for i in range(self.n):
            D[self.offsets[i + 1]:self.offsets[i + 2], self.offsets[i]:self.offsets[i + 1]] = gc.delta(i)
        for p, a in h.components.items():
            for q in range(self.n + 1 - p):
                L = cup.left_matrix(p, a, q)
                D[self.offsets[p + q]:self.offsets[p + q + 1], self.offsets[q]:self.offsets[q + 1]] += L
        self.D = D
        self.N = N
        self._z: dict[tuple[int, int], np.ndarray] = {}

    def start(self, p: int) -> int:
        """First coordinate of F^p."""
        return int(self.offsets[min(max(p, 0), self.n + 1)])

    def Z(self, r: int, p: int) -> np.ndarray:
        """Columns spanning Z_r^p inside the total space."""
        key = (r, p)
        if key not in self._z:
            a = self.start(p)
            b = self.start(p + r)
            cols = self.N - a
            if cols == 0:
                out = ex.zeros(self.N, 0)
            else:
                K = ex.nullspace(self.D[:b, a:]) if b > 0 else ex.eye(cols)
                out = ex.zeros(self.N, K.shape[1])
                out[a:, :] = K
            self._z[key] = out
        return self._z[key]

    def page_dim(self, r: int, p: int) -> int:
        Zr = self.Z(r, p)
        if Zr.shape[1] == 0:
            return 0
        sub = ex.hstack(self.Z(r - 1, p + 1), ex.matmul(self.D, self.Z(r - 1, p - r + 1)))
        return Zr.shape[1] - ex.rank(sub)


def _cup_ranks(gc: GradedComplex, cup: CupStructure, h3: np.ndarray) -> tuple[int, ...]:
    """Rank of [h_3] cup : H^p -> H^{p+3} for each p."""
    ranks = []
    for p in range(gc.n + 1):
        if p + 3 > gc.n:
            ranks.append(0)
            continue
        reps = graded_cohomology_basis(gc, p)
        if not reps:
            ranks.append(0)
            continue
        B = ex.column_basis(gc.delta(p + 2))
        images = [cup.product(3, h3, p, z).reshape(-1, 1) for z in reps]
        ranks.append(ex.rank(ex.hstack(B, *images)) - B.shape[1])
    return tuple(ranks)


def spectral_sequence(gc: GradedComplex, cup: CupStructure, h: FluxCochain) -> SpectralSequenceReport:
    tc = assemble_twisted(gc, cup, h)
    betti = betti_twisted(tc)
    F = _Filtered(gc, cup, h)
    n = gc.n
    last = max(n + 1, 3)
    pages: dict[int, tuple[int, ...]] = {}
    for r in range(2, last + 1):
        pages[r] = tuple(F.page_dim(r, p) for p in range(n + 1))

    # rank of d_r out of E_r^p from dim E_{r+1}^p = dim E_r^p - out_p - in_p
    ranks: dict[int, tuple[int, ...]] = {}
    for r in range(2, last):
        out: list[int] = []
        for p in range(n + 1):
            incoming = out[p - r] if p - r >= 0 else 0
            out.append(pages[r][p] - pages[r + 1][p] - incoming)
        ranks[r] = tuple(out)
    ranks[last] = (0,) * (n + 1)

    stab = last
    for r in range(last, 1, -1):
        if pages[r] == pages[last]:
            stab = r
        else:
            break
    inf = pages[last]
    e_inf = BettiPair(sum(inf[0::2]), sum(inf[1::2]))
    notes = []
    if pages[2] != tuple(betti_graded(gc)):
        notes.append("E_2 differs from untwisted cohomology")
    d3 = None
    if h.degrees == [3]:
        d3 = _cup_ranks(gc, cup, h.components[3])
    return SpectralSequenceReport(pages, ranks, stab, e_inf, betti, pages[3] == pages[2], d3, notes)
