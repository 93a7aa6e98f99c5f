"""Graded and Z2-graded cochain complexes and their twisting by flux cochains.

Even/odd spaces are direct sums of the even/odd degrees, always laid out in
ascending degree order.  Exact complexes carry Fraction entries (object
arrays); complexes evaluated from floating representations carry float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from . import exact as ex
from .errors import (
    ConjugationViolation,
    DegreeError,
    InvalidComplex,
    KindMismatch,
    SquareZeroViolation,
    ZeroScale,
)

FLOAT_ATOL = 1e-10


# -- small dtype-agnostic helpers ------------------------------------------

def _zeros(r: int, c: int, exact: bool) -> np.ndarray:
    return ex.zeros(r, c) if exact else np.zeros((r, c))


def _eye(n: int, exact: bool) -> np.ndarray:
    return ex.eye(n) if exact else np.eye(n)


def mm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    if A.dtype == object and B.dtype == object:
        return ex.matmul(A, B)
    return ex.to_float(A) @ ex.to_float(B)


def vanishes(M: np.ndarray, scale: float = 1.0) -> bool:
    if M.dtype == object:
        return ex.is_zero(M)
    return M.size == 0 or float(np.max(np.abs(M))) <= FLOAT_ATOL * max(1.0, scale)


def _scale(*mats: np.ndarray) -> float:
    vals = [float(np.max(np.abs(ex.to_float(m)))) for m in mats if m.size]
    return max(vals, default=1.0) ** 2


def parity_blocks(dims: tuple[int, ...], parity: int) -> list[tuple[int, int, int]]:
    """(degree, start, stop) for each degree of the given parity."""
    out, pos = [], 0
    for deg, d in enumerate(dims):
        if deg % 2 == parity:
            out.append((deg, pos, pos + d))
            pos += d
    return out


def parity_dim(dims: tuple[int, ...], parity: int) -> int:
    return sum(d for deg, d in enumerate(dims) if deg % 2 == parity)


def parity_operator(dims, maps: Mapping[tuple[int, int], np.ndarray], src: int, dst: int,
                    exact: bool = True) -> np.ndarray:
    """Assemble a parity-level matrix from degree-level blocks {(from, to): M}."""
    src_blocks = {deg: (a, b) for deg, a, b in parity_blocks(dims, src)}
    dst_blocks = {deg: (a, b) for deg, a, b in parity_blocks(dims, dst)}
    out = _zeros(parity_dim(dims, dst), parity_dim(dims, src), exact)
    for (i, j), M in maps.items():
        if i not in src_blocks or j not in dst_blocks or M.size == 0:
            continue
        (c0, c1), (r0, r1) = src_blocks[i], dst_blocks[j]
        out[r0:r1, c0:c1] = M
    return out


def degree_vector(dims, parity: int, comps: Mapping[int, np.ndarray], exact: bool = True) -> np.ndarray:
    """Place degree components into a parity-space vector."""
    v = ex.zvec(parity_dim(dims, parity)) if exact else np.zeros(parity_dim(dims, parity))
    for deg, a, b in parity_blocks(dims, parity):
        if deg in comps:
            v[a:b] = comps[deg]
    return v


# -- graded complexes -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedComplex:
    """Finite cochain complex C^0 -> ... -> C^n with delta_i of shape d_{i+1} x d_i."""

    dims: tuple[int, ...]
    coboundaries: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        cobs = tuple(self.coboundaries)
        object.__setattr__(self, "coboundaries", cobs)
        if any(d < 0 for d in dims):
            raise InvalidComplex("negative dimension")
        if len(cobs) != max(len(dims) - 1, 0):
            raise InvalidComplex(f"expected {max(len(dims) - 1, 0)} coboundaries, got {len(cobs)}")
        for i, M in enumerate(cobs):
            if M.shape != (dims[i + 1], dims[i]):
                raise InvalidComplex(f"delta_{i} has shape {M.shape}, expected {(dims[i + 1], dims[i])}")
        for i in range(len(cobs) - 1):
            if not vanishes(mm(cobs[i + 1], cobs[i]), _scale(cobs[i], cobs[i + 1])):
                raise SquareZeroViolation(f"delta-squared-nonzero at degree {i}")

    @property
    def n(self) -> int:
        return len(self.dims) - 1

    @property
    def exact(self) -> bool:
        return all(M.dtype == object for M in self.coboundaries)

    def delta(self, i: int) -> np.ndarray:
        """delta_i, with zero maps outside 0..n-1."""
        if 0 <= i < len(self.coboundaries):
            return self.coboundaries[i]
        src = self.dims[i] if 0 <= i < len(self.dims) else 0
        dst = self.dims[i + 1] if 0 <= i + 1 < len(self.dims) else 0
        return _zeros(dst, src, self.exact)

    def apply_delta(self, deg: int, v: np.ndarray) -> np.ndarray:
        M = self.delta(deg)
        return mm(M, v.reshape(-1, 1)).reshape(-1)


def zero_complex(dims, exact: bool = True, name: str = "") -> GradedComplex:
    dims = tuple(dims)
    return GradedComplex(dims, tuple(_zeros(dims[i + 1], dims[i], exact) for i in range(len(dims) - 1)), name)


# -- cup structures ---------------------------------------------------------

Table = dict[tuple[int, int], dict[tuple[int, int], dict[int, Fraction]]]


@dataclass(frozen=True, eq=False)
class CupStructure:
    """Sparse structure constants: table[(p, q)][(i, j)] = {k: c} means
    e_i^p  cup  e_j^q = sum_k c e_k^{p+q}."""

    dims: tuple[int, ...]
    table: Table
    unit_vector: np.ndarray | None = None
    source: str = "explicit"

    def product(self, p: int, a: np.ndarray, q: int, x: np.ndarray) -> np.ndarray:
        n = len(self.dims) - 1
        if p + q > n:
            return ex.zvec(0)
        out = ex.zvec(self.dims[p + q])
        for (i, j), terms in self.table.get((p, q), {}).items():
            ai, xj = a[i], x[j]
            if ai != 0 and xj != 0:
                for k, c in terms.items():
                    out[k] += c * ai * xj
        return out

    def left_matrix(self, p: int, a: np.ndarray, q: int) -> np.ndarray:
        """Matrix of x -> a cup x from degree q to degree p+q."""
        n = len(self.dims) - 1
        if p + q > n:
            return ex.zeros(0, self.dims[q])
        out = ex.zeros(self.dims[p + q], self.dims[q])
        for (i, j), terms in self.table.get((p, q), {}).items():
            if a[i] != 0:
                for k, c in terms.items():
                    out[k, j] += c * a[i]
        return out

    def unit(self) -> np.ndarray:
        """The two-sided unit in degree 0 (solved for when not supplied)."""
        if self.unit_vector is not None:
            return self.unit_vector
        if not self.dims or self.dims[0] == 0:
            raise InvalidComplex("cup structure has no degree-0 part, hence no unit")
        # u cup e_j = e_j for every basis cochain: linear in u
        rows, rhs = [], []
        for q, dq in enumerate(self.dims):
            for side in ("left", "right"):
                for j in range(dq):
                    for k in range(dq):
                        row = ex.zvec(self.dims[0])
                        key = (0, q) if side == "left" else (q, 0)
                        for (i, jj), terms in self.table.get(key, {}).items():
                            idx_i, idx_j = (i, jj) if side == "left" else (jj, i)
                            if idx_j == j and k in terms:
                                row[idx_i] += terms[k]
                        rows.append(row)
                        rhs.append(ex.ONE if j == k else ex.ZERO)
        A = ex.qmat([list(r) for r in rows]) if rows else ex.zeros(0, self.dims[0])
        u = ex.solve(A, ex.qvec(rhs))
        if u is None:
            raise InvalidComplex("cup structure has no two-sided unit")
        object.__setattr__(self, "unit_vector", u)
        return u

    def check_associativity(self) -> list[str]:
        """Exact associativity on every basis triple; returns violations."""
        left: dict[tuple, Fraction] = {}
        right: dict[tuple, Fraction] = {}
        n = len(self.dims) - 1
        for (p, q), entries in self.table.items():
            for (i, j), terms in entries.items():
                # (e_i e_j) e_x
                for r in range(0, n - p - q + 1):
                    for (k, x), terms2 in self.table.get((p + q, r), {}).items():
                        if k in terms:
                            for m, c2 in terms2.items():
                                key = (p, i, q, j, r, x, m)
                                left[key] = left.get(key, ex.ZERO) + terms[k] * c2
                # e_a (e_i e_j)
                for s in range(0, n - p - q + 1):
                    for (a, k), terms2 in self.table.get((s, p + q), {}).items():
                        if k in terms:
                            for m, c2 in terms2.items():
                                key = (s, a, p, i, q, j, m)
                                right[key] = right.get(key, ex.ZERO) + terms[k] * c2
        bad = []
        for key in sorted(set(left) | set(right)):
            if left.get(key, ex.ZERO) != right.get(key, ex.ZERO):
                bad.append(f"associativity fails at {key}")
        return bad

    def check_leibniz(self, gc: GradedComplex) -> list[str]:
        """delta(a x) = (delta a) x + (-1)^|a| a (delta x) on basis pairs."""
        if gc.dims != self.dims:
            raise KindMismatch("cup structure and complex have different dims")
        bad = []
        n = gc.n
        for p in range(n + 1):
            for i in range(self.dims[p]):
                a = ex.zvec(self.dims[p])
                a[i] = ex.ONE
                da = gc.apply_delta(p, a) if p < n else None
                sign = -1 if p % 2 else 1
                # q < n - p keeps every term inside degree <= n
                for q in range(n - p):
                    lhs = mm(gc.delta(p + q), self.left_matrix(p, a, q))
                    rhs = sign * mm(self.left_matrix(p, a, q + 1), gc.delta(q)) + self.left_matrix(p + 1, da, q)
                    if not ex.is_zero(lhs - rhs):
                        bad.append(f"Leibniz fails for degree-{p} basis {i} against degree {q}")
        return bad


def explicit_cup(dims, entries, unit=None) -> CupStructure:
    """Build a cup structure from (p, i, q, j, k, coeff) tuples."""
    table: Table = {}
    for p, i, q, j, k, c in entries:
        c = ex.frac(c)
        if c == 0:
            continue
        slot = table.setdefault((p, q), {}).setdefault((i, j), {})
        slot[k] = slot.get(k, ex.ZERO) + c
    u = None if unit is None else ex.qvec(unit)
    return CupStructure(tuple(dims), table, u)


# -- cochains ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FluxCochain:
    """Odd-degree (>= 3) cocycle family standing in for the flux form."""

    components: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        comps = {int(k): ex.qvec(v) for k, v in self.components.items()}
        for deg in comps:
            if deg % 2 == 0:
                raise DegreeError(f"flux component of even degree {deg}")
            if deg == 1:
                raise DegreeError("degree-1 flux must be absorbed into the flat connection")
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    @property
    def degrees(self) -> list[int]:
        return [d for d, v in self.components.items() if not ex.is_zero(v)]

    def is_zero(self) -> bool:
        return not self.degrees

    def scaled(self, factors: Mapping[int, Fraction]) -> "FluxCochain":
        return FluxCochain({d: v * ex.frac(factors.get(d, 1)) for d, v in self.components.items()})


@dataclass(frozen=True, eq=False)
class GaugeCochain:
    """Even-degree (>= 2) cochain family standing in for the B-field."""

    components: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        comps = {int(k): ex.qvec(v) for k, v in self.components.items()}
        for deg in comps:
            if deg % 2 or deg < 2:
                raise DegreeError(f"gauge component must have even degree >= 2, got {deg}")
        object.__setattr__(self, "components", dict(sorted(comps.items())))

    @property
    def degrees(self) -> list[int]:
        return [d for d, v in self.components.items() if not ex.is_zero(v)]


def _flux_maps(gc: GradedComplex, cup: CupStructure, comps: Mapping[int, np.ndarray],
               src: int) -> dict[tuple[int, int], np.ndarray]:
    maps: dict[tuple[int, int], np.ndarray] = {}
    for p, a in comps.items():
        if ex.is_zero(a):
            continue
        for q in range(gc.n + 1):
            if q % 2 == src and p + q <= gc.n:
                M = cup.left_matrix(p, a, q)
                maps[(q, p + q)] = maps[(q, p + q)] + M if (q, p + q) in maps else M
    return maps


def _left_action(gc: GradedComplex, cup: CupStructure, comps: Mapping[int, np.ndarray],
                 src: int, dst: int) -> np.ndarray:
    return parity_operator(gc.dims, _flux_maps(gc, cup, comps, src), src, dst)


def cup_cochains(cup: CupStructure, n: int, a: Mapping[int, np.ndarray], b: Mapping[int, np.ndarray]) -> dict[int, np.ndarray]:
    out: dict[int, np.ndarray] = {}
    for p, x in a.items():
        for q, y in b.items():
            if p + q <= n:
                v = cup.product(p, x, q, y)
                out[p + q] = out[p + q] + v if p + q in out else v
    return out


def _nonzero(comps: Mapping[int, np.ndarray]) -> bool:
    return any(not ex.is_zero(v) for v in comps.values())


def degree_certificate(n: int, *families: list[int]) -> bool:
    """Products vanish for degree reasons when every degree exceeds n/2."""
    return all(2 * d > n for fam in families for d in fam)


def check_flux(gc: GradedComplex, cup: CupStructure, h: FluxCochain) -> None:
    for deg, v in h.components.items():
        if deg > gc.n:
            raise DegreeError(f"flux degree {deg} exceeds top degree {gc.n}")
        if len(v) != gc.dims[deg]:
            raise DegreeError(f"flux component in degree {deg} has length {len(v)}, expected {gc.dims[deg]}")
        if deg < gc.n and not ex.is_zero(gc.apply_delta(deg, v)):
            raise InvalidComplex(f"flux component in degree {deg} is not a cocycle")
    if not degree_certificate(gc.n, h.degrees):
        if _nonzero(cup_cochains(cup, gc.n, h.components, h.components)):
            raise SquareZeroViolation("flux fails the square-zero certificate: h cup h != 0")


# -- twisted complexes ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwistedComplex:
    """C^0bar --D0--> C^1bar --D1--> C^0bar with D1 D0 = 0 = D0 D1."""

    D0: np.ndarray
    D1: np.ndarray
    source: GradedComplex | None = None
    flux: FluxCochain | None = None

    def __post_init__(self):
        if self.D0.shape != (self.D1.shape[1], self.D1.shape[0]):
            raise InvalidComplex(f"incompatible shapes D0 {self.D0.shape}, D1 {self.D1.shape}")
        sc = 1.0 if self.exact else _scale(self.D0, self.D1)
        if not vanishes(mm(self.D1, self.D0), sc) or not vanishes(mm(self.D0, self.D1), sc):
            raise SquareZeroViolation("twisted differential does not square to zero")

    @property
    def even_dim(self) -> int:
        return self.D0.shape[1]

    @property
    def odd_dim(self) -> int:
        return self.D0.shape[0]

    @property
    def exact(self) -> bool:
        return self.D0.dtype == object and self.D1.dtype == object

    def D(self, k: int) -> np.ndarray:
        return self.D0 if k % 2 == 0 else self.D1

    def dim(self, k: int) -> int:
        return self.even_dim if k % 2 == 0 else self.odd_dim


def fold_to_super(gc: GradedComplex) -> TwistedComplex:
    maps = {(i, i + 1): gc.coboundaries[i] for i in range(gc.n)}
    D0 = parity_operator(gc.dims, maps, 0, 1, gc.exact)
    D1 = parity_operator(gc.dims, maps, 1, 0, gc.exact)
    return TwistedComplex(D0, D1, source=gc, flux=FluxCochain({}))


def flux_operator(gc: GradedComplex, cup: CupStructure, h: FluxCochain) -> tuple[np.ndarray, np.ndarray]:
    """Parity blocks of x -> h cup x."""
    return _left_action(gc, cup, h.components, 0, 1), _left_action(gc, cup, h.components, 1, 0)


def assemble_twisted(gc: GradedComplex, cup: CupStructure, h: FluxCochain) -> TwistedComplex:
    if not gc.exact:
        raise KindMismatch("twisting needs an exact rational complex")
    check_flux(gc, cup, h)
    D = []
    for src in (0, 1):
        maps = _flux_maps(gc, cup, h.components, src)
        for i in range(gc.n):
            if i % 2 == src:
                maps[(i, i + 1)] = maps[(i, i + 1)] + gc.coboundaries[i] if (i, i + 1) in maps else gc.coboundaries[i]
        D.append(parity_operator(gc.dims, maps, src, 1 - src))
    return TwistedComplex(D[0], D[1], source=gc, flux=h)


def euler_characteristic(c: TwistedComplex | GradedComplex) -> int:
    if isinstance(c, GradedComplex):
        return sum((-1) ** i * d for i, d in enumerate(c.dims))
    return c.even_dim - c.odd_dim


# -- gauge and scaling ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EpsOperator:
    """exp(b) cup . as parity blocks; unipotent, so det = 1 on each parity."""

    even: np.ndarray
    odd: np.ndarray

    def block(self, k: int) -> np.ndarray:
        return self.even if k % 2 == 0 else self.odd


def gauge_transform(gc: GradedComplex, cup: CupStructure, h: FluxCochain,
                    b: GaugeCochain) -> tuple[FluxCochain, EpsOperator]:
    """h' = h - delta b together with eps_B = 1 + (b cup .), checked exactly."""
    check_flux(gc, cup, h)
    if not degree_certificate(gc.n, b.degrees, h.degrees):
        if _nonzero(cup_cochains(cup, gc.n, b.components, b.components)):
            raise ConjugationViolation("b cup b != 0")
        if _nonzero(cup_cochains(cup, gc.n, b.components, h.components)) or _nonzero(
                cup_cochains(cup, gc.n, h.components, b.components)):
            raise ConjugationViolation("b does not commute with h under cup")
    comps = dict(h.components)
    for deg, v in b.components.items():
        if deg < gc.n:
            db = gc.apply_delta(deg, v)
            comps[deg + 1] = comps.get(deg + 1, ex.zvec(gc.dims[deg + 1])) - db
    h2 = FluxCochain(comps)
    eps = EpsOperator(
        ex.eye(parity_dim(gc.dims, 0)) + _left_action(gc, cup, b.components, 0, 0),
        ex.eye(parity_dim(gc.dims, 1)) + _left_action(gc, cup, b.components, 1, 1),
    )
    t1 = assemble_twisted(gc, cup, h)
    t2 = assemble_twisted(gc, cup, h2)
    for k in (0, 1):
        lhs = ex.matmul(eps.block(k + 1), t1.D(k))
        rhs = ex.matmul(t2.D(k), eps.block(k))
        if not ex.is_zero(lhs - rhs):
            raise ConjugationViolation(f"eps_B D_h != D_h' eps_B on parity {k}")
    return h2, eps


def scaling_operator(gc: GradedComplex, lam) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal similarity scaling degree i by lam**(i // 2)."""
    lam = ex.frac(lam)
    if lam == 0:
        raise ZeroScale("scaling parameter must be nonzero")
    out = []
    for k in (0, 1):
        diag = []
        for deg, a, b in parity_blocks(gc.dims, k):
            diag += [lam ** (deg // 2)] * (b - a)
        M = ex.zeros(len(diag), len(diag))
        for i, v in enumerate(diag):
            M[i, i] = v
        out.append(M)
    return out[0], out[1]


def scaled_flux(h: FluxCochain, lam) -> FluxCochain:
    """Image of h under the scaling similarity: h_{2i+1} -> lam**i h_{2i+1}."""
    lam = ex.frac(lam)
    if lam == 0:
        raise ZeroScale("scaling parameter must be nonzero")
    return h.scaled({d: lam ** (d // 2) for d in h.components})


# -- sums and products -------------------------------------------------------

def direct_sum(a, b):
    if isinstance(a, GradedComplex) and isinstance(b, GradedComplex):
        n = max(len(a.dims), len(b.dims))
        da = a.dims + (0,) * (n - len(a.dims))
        db = b.dims + (0,) * (n - len(b.dims))
        exact = a.exact and b.exact
        cobs = []
        for i in range(n - 1):
            A = a.delta(i) if i < len(a.dims) - 1 else _zeros(da[i + 1], da[i], exact)
            B = b.delta(i) if i < len(b.dims) - 1 else _zeros(db[i + 1], db[i], exact)
            cobs.append(_bdiag(A, B, exact))
        return GradedComplex(tuple(x + y for x, y in zip(da, db)), tuple(cobs))
    if isinstance(a, TwistedComplex) and isinstance(b, TwistedComplex):
        exact = a.exact and b.exact
        return TwistedComplex(_bdiag(a.D0, b.D0, exact), _bdiag(a.D1, b.D1, exact))
    raise KindMismatch(f"cannot sum {type(a).__name__} with {type(b).__name__}")


def _bdiag(A, B, exact):
    if exact:
        return ex.block_diag(A, B)
    out = np.zeros((A.shape[0] + B.shape[0], A.shape[1] + B.shape[1]))
    out[:A.shape[0], :A.shape[1]] = ex.to_float(A)
    out[A.shape[0]:, A.shape[1]:] = ex.to_float(B)
    return out


def product_index(da: tuple[int, ...], db: tuple[int, ...]):
    """Position of e_alpha^i (x) e_beta^j inside degree i+j of the product.

    Returns (dims, pos) with pos[(i, j)] the offset of the C^i (x) C^j block;
    within a block the order is alpha-major.
    """
    n = len(da) + len(db) - 2
    dims = [0] * (n + 1)
    pos = {}
    for k in range(n + 1):
        for i in range(len(da)):
            j = k - i
            if 0 <= j < len(db):
                pos[(i, j)] = dims[k]
                dims[k] += da[i] * db[j]
    return tuple(dims), pos


def tensor_product(a: GradedComplex, cup_a: CupStructure, h_a: FluxCochain,
                   b: GradedComplex, cup_b: CupStructure, h_b: FluxCochain):
    """Graded tensor product with Koszul signs, product cup and summed flux."""
    if not (a.exact and b.exact):
        raise KindMismatch("tensor products are built exactly")
    dims, pos = product_index(a.dims, b.dims)
    n = len(dims) - 1
    cobs = []
    for k in range(n):
        M = ex.zeros(dims[k + 1], dims[k])
        for i in range(len(a.dims)):
            j = k - i
            if not 0 <= j < len(b.dims):
                continue
            c0 = pos[(i, j)]
            w = a.dims[i] * b.dims[j]
            if i < a.n and (i + 1, j) in pos:
                r0 = pos[(i + 1, j)]
                blk = ex.kron(a.delta(i), ex.eye(b.dims[j]))
                M[r0:r0 + blk.shape[0], c0:c0 + w] += blk
            if j < b.n and (i, j + 1) in pos:
                r0 = pos[(i, j + 1)]
                blk = ex.kron(ex.eye(a.dims[i]), b.delta(j)) * (-1 if i % 2 else 1)
                M[r0:r0 + blk.shape[0], c0:c0 + w] += blk
        cobs.append(M)
    gc = GradedComplex(dims, tuple(cobs), name=f"({a.name})x({b.name})")

    table: Table = {}
    for (p1, q1), ent_a in cup_a.table.items():
        for (p2, q2), ent_b in cup_b.table.items():
            P, Q = p1 + p2, q1 + q2
            if P + Q > n:
                continue
            sign = -1 if (p2 * q1) % 2 else 1
            slot_map = table.setdefault((P, Q), {})
            for (ia, ja), ta in ent_a.items():
                for (ib, jb), tb in ent_b.items():
                    left = pos[(p1, p2)] + ia * b.dims[p2] + ib
                    right = pos[(q1, q2)] + ja * b.dims[q2] + jb
                    slot = slot_map.setdefault((left, right), {})
                    for ka, ca in ta.items():
                        for kb, cb in tb.items():
                            out = pos[(p1 + q1, p2 + q2)] + ka * b.dims[p2 + q2] + kb
                            slot[out] = slot.get(out, ex.ZERO) + sign * ca * cb
    ua, ub = cup_a.unit(), cup_b.unit()
    unit = ex.zvec(dims[0])
    unit[:] = [x * y for x in ua for y in ub]
    cup = CupStructure(dims, table, unit, source="product")

    comps: dict[int, np.ndarray] = {}
    for deg, v in h_a.components.items():
        vec = comps.setdefault(deg, ex.zvec(dims[deg]))
        o = pos[(deg, 0)]
        vec[o:o + len(v) * len(ub)] += np.array([x * y for x in v for y in ub], dtype=object)
    for deg, v in h_b.components.items():
        vec = comps.setdefault(deg, ex.zvec(dims[deg]))
        o = pos[(0, deg)]
        vec[o:o + len(ua) * len(v)] += np.array([x * y for x in ua for y in v], dtype=object)
    return gc, cup, FluxCochain(comps)


def product_parity_vector(da, db, va_parts: Mapping[int, np.ndarray], vb_parts: Mapping[int, np.ndarray]):
    """Degree components of x (x) y in the product, from degree components of x and y."""
    dims, pos = product_index(da, db)
    comps: dict[int, np.ndarray] = {}
    for i, x in va_parts.items():
        for j, y in vb_parts.items():
            vec = comps.setdefault(i + j, ex.zvec(dims[i + j]))
            o = pos[(i, j)]
            vec[o:o + len(x) * len(y)] += np.array([s * t for s in x for t in y], dtype=object)
    return dims, comps


def split_parity_vector(dims, parity: int, v: np.ndarray) -> dict[int, np.ndarray]:
    return {deg: v[a:b] for deg, a, b in parity_blocks(dims, parity)}
