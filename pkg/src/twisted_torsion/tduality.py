"""Circle-bundle T-duality: the (p, q) exchange, normalized torsions and the
T-map chain identity on finite graded-commutative models.

Invariant forms on the total space are pairs (w1, w2) standing for
w1 + A ^ w2 with dA = F and H = A ^ Fhat - Omega.  Expanding d + H ^ gives

    d^H (w1, w2) = (d w1 + F w2 - Omega w1,  -d w2 + Fhat w1 + Omega w2),

and d^Hhat is the same with F and Fhat exchanged.  The map that intertwines
them is T(w1, w2) = (P w2, P w1) with P = (-1)^degree; the plain swap does not
(the odd operators d and Omega anticommute with P).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import exact as ex
from .errors import ChainIdentityFailure, InvalidComplex
from .report import CheckResult, compare
from .torsion import TorsionScalar

TWO_PI_LOG = math.log(2 * math.pi)


@dataclass(frozen=True)
class CircleBundleData:
    p: int      # first Chern number of the bundle
    q: int      # flux number
    chi: int    # Euler characteristic of the base

    def __post_init__(self):
        for name in ("p", "q", "chi"):
            v = getattr(self, name)
            if int(v) != v:
                raise ValueError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))


def dual(b: CircleBundleData) -> CircleBundleData:
    return CircleBundleData(b.q, b.p, b.chi)


@dataclass(frozen=True)
class CircleTorsion:
    """(2 pi)^chi times an exact rational."""

    chi: int
    normalized: Fraction

    @property
    def log_magnitude(self) -> float:
        return self.chi * TWO_PI_LOG + math.log(self.normalized)

    @property
    def value(self) -> float:
        return math.exp(self.log_magnitude)

    def scalar(self) -> TorsionScalar:
        return TorsionScalar(self.log_magnitude, None, None, f"(2pi)^{self.chi}-normalized")

    def __str__(self) -> str:
        return f"(2pi)^{self.chi} * {self.normalized}"


def torsion_value(b: CircleBundleData) -> CircleTorsion:
    p, q = abs(b.p), abs(b.q)
    if p and q:
        r = Fraction(q, p)
    elif p:
        r = Fraction(1, p)
    elif q:
        r = Fraction(q)
    else:
        r = Fraction(1)
    return CircleTorsion(b.chi, r)


def verify_reciprocity(b: CircleBundleData, name: str | None = None) -> CheckResult:
    t, td = torsion_value(b), torsion_value(dual(b))
    prod = t.normalized * td.normalized
    name = name or f"reciprocity-p{b.p}-q{b.q}-chi{b.chi}"
    res = compare(name, float(prod), 1.0, 0.0, prod, Fraction(1))
    res.detail = f"normalized {t.normalized} * {td.normalized}"
    return res


def lens_cross_check(p: int, q: int, name: str | None = None) -> CheckResult:
    """Twisted lens-space torsion against the normalized circle-bundle value over S^2."""
    from .complexes import assemble_twisted
    from .simplicial import lens_flux, lens_space
    from .torsion import twisted_torsion

    gc, cup, _ = lens_space(p)
    tau = twisted_torsion(assemble_twisted(gc, cup, lens_flux(q)))
    tv = torsion_value(CircleBundleData(p, q, 2))
    return compare(name or f"lens-cross-p{p}-q{q}", tau.value, float(tv.normalized), 0.0,
                   tau.exact_value, tv.normalized)


# -- pair-form models ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PairFormModel:
    """Finite graded-commutative dga with distinguished F, Fhat (degree 2) and Omega (degree 3)."""

    names: tuple[str, ...]
    degrees: tuple[int, ...]
    table: dict[tuple[int, int], dict[int, Fraction]]
    d: np.ndarray
    F: np.ndarray
    Fhat: np.ndarray
    Omega: np.ndarray
    pairing: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        N = len(self.names)
        if len(self.degrees) != N or self.d.shape != (N, N):
            raise InvalidComplex("model basis, degrees and differential disagree in size")
        for label, v, deg in (("F", self.F, 2), ("Fhat", self.Fhat, 2), ("Omega", self.Omega, 3)):
            if len(v) != N:
                raise InvalidComplex(f"{label} has length {len(v)}, expected {N}")
            bad = [self.names[i] for i in range(N) if v[i] != 0 and self.degrees[i] != deg]
            if bad:
                raise InvalidComplex(f"{label} has components outside degree {deg}: {bad}")
        problems = self.check()
        if problems:
            raise InvalidComplex("; ".join(problems[:3]))

    @property
    def dim(self) -> int:
        return len(self.names)

    def left(self, v: np.ndarray) -> np.ndarray:
        """Matrix of x -> v x."""
        M = ex.zeros(self.dim, self.dim)
        for (i, j), terms in self.table.items():
            if v[i] != 0:
                for k, c in terms.items():
                    M[k, j] += v[i] * c
        return M

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return ex.matvec(self.left(a), b)

    def unit_vec(self, i: int) -> np.ndarray:
        v = ex.zvec(self.dim)
        v[i] = ex.ONE
        return v

    def parity_sign(self) -> np.ndarray:
        M = ex.zeros(self.dim, self.dim)
        for i, deg in enumerate(self.degrees):
            M[i, i] = ex.ONE if deg % 2 == 0 else -ex.ONE
        return M

    def check(self) -> list[str]:
        out = []
        N = self.dim
        E = [self.unit_vec(i) for i in range(N)]
        for i in range(N):
            for j in range(N):
                ij, ji = self.mul(E[i], E[j]), self.mul(E[j], E[i])
                s = -1 if (self.degrees[i] * self.degrees[j]) % 2 else 1
                if not ex.is_zero(ij - s * ji):
                    out.append(f"not graded-commutative on ({self.names[i]}, {self.names[j]})")
                dij = ex.matvec(self.d, ij)
                sg = -1 if self.degrees[i] % 2 else 1
                rhs = self.mul(ex.matvec(self.d, E[i]), E[j]) + sg * self.mul(E[i], ex.matvec(self.d, E[j]))
                if not ex.is_zero(dij - rhs):
                    out.append(f"Leibniz fails on ({self.names[i]}, {self.names[j]})")
                for k in range(N):
                    if not ex.is_zero(self.mul(ij, E[k]) - self.mul(E[i], self.mul(E[j], E[k]))):
                        out.append(f"not associative on ({self.names[i]}, {self.names[j]}, {self.names[k]})")
        if not ex.is_zero(ex.matmul(self.d, self.d)):
            out.append("d^2 != 0")
        for label, v in (("F", self.F), ("Fhat", self.Fhat)):
            if not ex.is_zero(ex.matvec(self.d, v)):
                out.append(f"d{label} != 0")
        if not ex.is_zero(self.mul(self.F, self.Fhat) - ex.matvec(self.d, self.Omega)):
            out.append("F Fhat != d Omega (H is not closed)")
        return out

    def swapped(self) -> "PairFormModel":
        return PairFormModel(self.names, self.degrees, self.table, self.d, self.Fhat, self.F, self.Omega,
                             self.pairing, self.name + "^")


def model_from_entries(names, degrees, products, differential, F, Fhat, Omega, pairing=None, name="") -> PairFormModel:
    """products: (i, j, k, c) meaning e_i e_j += c e_k; differential: (i, k, c) meaning d e_i += c e_k."""
    table: dict[tuple[int, int], dict[int, Fraction]] = {}
    for i, j, k, c in products:
        c = ex.frac(c)
        if c:
            slot = table.setdefault((i, j), {})
            slot[k] = slot.get(k, ex.ZERO) + c
    N = len(names)
    d = ex.zeros(N, N)
    for i, k, c in differential:
        d[k, i] += ex.frac(c)
    P = None if pairing is None else ex.qmat(pairing)
    return PairFormModel(tuple(names), tuple(int(x) for x in degrees), table, d,
                         ex.qvec(F), ex.qvec(Fhat), ex.qvec(Omega), P, name)


def _unit_products(degrees) -> list[tuple[int, int, int, int]]:
    out = []
    for i in range(len(degrees)):
        out.append((0, i, i, 1))
        if i:
            out.append((i, 0, i, 1))
    return out


def sphere_model(p, q) -> PairFormModel:
    """Cohomology of S^2: 1, v with v^2 = 0; F = p v, Fhat = q v, Omega = 0."""
    return model_from_entries(["1", "v"], [0, 2], _unit_products([0, 2]), [], [0, p], [0, q], [0, 0],
                              pairing=[[1, 0], [0, 1]], name=f"S2(p={p},q={q})")


def torus_model(p, q) -> PairFormModel:
    """Cohomology of T^2: 1, a, b, ab; F = p ab, Fhat = q ab; no degree-3 part so Omega = 0."""
    degs = [0, 1, 1, 2]
    prods = _unit_products(degs) + [(1, 2, 3, 1), (2, 1, 3, -1)]
    return model_from_entries(["1", "a", "b", "ab"], degs, prods, [], [0, 0, 0, p], [0, 0, 0, q], [0, 0, 0, 0],
                              pairing=np.eye(4, dtype=int).tolist(), name=f"T2(p={p},q={q})")


def truncated_model(p, q) -> PairFormModel:
    """x (degree 2), y (degree 3), dy = x^2, truncated above degree 6.

    F = p x, Fhat = q x and Omega = p q y, so that F Fhat = d Omega.
    """
    names = ["1", "x", "y", "x2", "xy", "x3"]
    degs = [0, 2, 3, 4, 5, 6]
    prods = _unit_products(degs) + [
        (1, 1, 3, 1), (1, 3, 5, 1), (3, 1, 5, 1),
        (1, 2, 4, 1), (2, 1, 4, 1),
    ]
    diff = [(2, 3, 1), (4, 5, 1)]
    pq = ex.frac(p) * ex.frac(q)
    return model_from_entries(names, degs, prods, diff, [0, p, 0, 0, 0, 0], [0, q, 0, 0, 0, 0],
                              [0, 0, pq, 0, 0, 0], name=f"trunc(p={p},q={q})")


# -- T-map ----------------------------------------------------------------------------

# Sign constants of the pair-form differential, derived by expanding
# d(w1 + A w2) + (A Fhat - Omega)(w1 + A w2) with A odd, dA = F.
# Each entry is the coefficient of (d, F-type, Omega) in the (row, column) block.
PAIR_SIGNS = {
    "d11": 1, "om11": -1, "f12": 1,
    "f21": 1, "d22": -1, "om22": 1,
}


def pair_differential(m: PairFormModel) -> np.ndarray:
    """Matrix of d^H on pairs (w1, w2) in a model."""
    s = PAIR_SIGNS
    LF, LFh, LO = m.left(m.F), m.left(m.Fhat), m.left(m.Omega)
    top = [s["d11"] * m.d + s["om11"] * LO, s["f12"] * LF]
    bot = [s["f21"] * LFh, s["d22"] * m.d + s["om22"] * LO]
    return ex.block([top, bot])


def tmap_matrix(m: PairFormModel) -> np.ndarray:
    P = m.parity_sign()
    Z = ex.zeros(m.dim, m.dim)
    return ex.block([[Z, P], [P, Z]])


def tmap_check(m: PairFormModel, name: str | None = None) -> CheckResult:
    """T d^H = d^Hhat T exactly, plus the pairing isometry when a pairing is supplied."""
    name = name or f"tmap-{m.name}"
    DH = pair_differential(m)
    DHh = pair_differential(m.swapped())
    for label, D in (("d^H", DH), ("d^Hhat", DHh)):
        if not ex.is_zero(ex.matmul(D, D)):
            raise ChainIdentityFailure(f"{label} does not square to zero on {m.name}")
    T = tmap_matrix(m)
    diff = ex.matmul(T, DH) - ex.matmul(DHh, T)
    for col in range(diff.shape[1]):
        if not ex.is_zero(diff[:, col]):
            half = "w1" if col < m.dim else "w2"
            raise ChainIdentityFailure(f"T d^H != d^Hhat T on basis element {m.names[col % m.dim]} ({half} slot)")
    detail = "chain identity exact"
    if m.pairing is not None:
        G = ex.block_diag(m.pairing, m.pairing)
        if not ex.is_zero(ex.matmul(T.T.copy(), ex.matmul(G, T)) - G):
            raise ChainIdentityFailure(f"T is not an isometry of the pair pairing on {m.name}")
        detail += ", isometry exact"
    return CheckResult(name, True, "T d^H", "d^Hhat T", 0.0, 0.0, detail)
