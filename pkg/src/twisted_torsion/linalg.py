"""Ranks, cohomology representatives, Laplacians and regularized determinants.

Exact work happens over Q (see :mod:`exact`); spectral work uses the
generalized symmetric eigensolver of scipy.  Adjoints are always taken with
respect to the supplied Gram matrices: d^dag = G_src^{-1} d^T G_dst.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg as sla

from . import exact as ex
from .complexes import GradedComplex, TwistedComplex, parity_blocks, parity_dim
from .errors import EigenFailure, GramNotSPD, KindMismatch, ReferenceMismatch, ToleranceAmbiguity

DEFAULT_TOL = 1e-9
FLOAT_RANK_RTOL = 1e-10


# -- inner products ---------------------------------------------------------

def check_spd(G: np.ndarray, what: str = "Gram matrix") -> None:
    if G.shape[0] != G.shape[1]:
        raise GramNotSPD(f"{what} is not square")
    if G.shape[0] == 0:
        return
    if G.dtype == object:
        if not ex.is_zero(G - G.T):
            raise GramNotSPD(f"{what} is not symmetric")
        # leading principal pivots of an unpivoted elimination
        rows = [list(r) for r in G]
        n = len(rows)
        for c in range(n):
            piv = rows[c][c]
            if piv <= 0:
                raise GramNotSPD(f"{what} is not positive definite")
            for i in range(c + 1, n):
                f = rows[i][c] / piv
                if f:
                    for j in range(c, n):
                        rows[i][j] -= f * rows[c][j]
    else:
        if not np.allclose(G, G.T, atol=1e-12 * max(1.0, np.abs(G).max())):
            raise GramNotSPD(f"{what} is not symmetric")
        try:
            np.linalg.cholesky(G)
        except np.linalg.LinAlgError as err:
            raise GramNotSPD(f"{what} is not positive definite") from err


@dataclass(frozen=True, eq=False)
class InnerProductData:
    """Gram matrices on the even and odd spaces, optionally per degree."""

    even: np.ndarray
    odd: np.ndarray
    degrees: tuple[np.ndarray, ...] | None = None

    def __post_init__(self):
        check_spd(self.even, "even Gram matrix")
        check_spd(self.odd, "odd Gram matrix")

    def parity(self, k: int) -> np.ndarray:
        return self.even if k % 2 == 0 else self.odd

    @property
    def exact(self) -> bool:
        return self.even.dtype == object and self.odd.dtype == object

    @classmethod
    def identity(cls, dims: tuple[int, ...]) -> "InnerProductData":
        return cls.from_degrees(dims, [ex.eye(d) for d in dims])

    @classmethod
    def identity_parity(cls, even_dim: int, odd_dim: int) -> "InnerProductData":
        return cls(ex.eye(even_dim), ex.eye(odd_dim))

    @classmethod
    def from_degrees(cls, dims, grams) -> "InnerProductData":
        grams = tuple(grams)
        for i, (d, G) in enumerate(zip(dims, grams)):
            if G.shape != (d, d):
                raise GramNotSPD(f"Gram matrix in degree {i} has shape {G.shape}, expected {(d, d)}")
            check_spd(G, f"Gram matrix in degree {i}")
        exact = all(G.dtype == object for G in grams)
        par = []
        for k in (0, 1):
            blocks = [grams[deg] for deg, _, _ in parity_blocks(dims, k)]
            if exact:
                par.append(ex.block_diag(*blocks) if blocks else ex.zeros(0, 0))
            else:
                par.append(sla.block_diag(*[ex.to_float(b) for b in blocks]) if blocks else np.zeros((0, 0)))
        return cls(par[0], par[1], grams)

    def degree(self, dims, i: int) -> np.ndarray:
        if self.degrees is not None:
            return self.degrees[i]
        G = self.parity(i % 2)
        for deg, a, b in parity_blocks(dims, i % 2):
            if deg == i:
                return G[a:b, a:b]
        raise KindMismatch(f"no degree {i} block")

    def scaled(self, s) -> "InnerProductData":
        degs = None if self.degrees is None else tuple(G * s for G in self.degrees)
        return InnerProductData(self.even * s, self.odd * s, degs)


def default_inner(tc: TwistedComplex, G: InnerProductData | None) -> InnerProductData:
    if G is not None:
        return G
    if tc.source is not None:
        return InnerProductData.identity(tc.source.dims)
    return InnerProductData.identity_parity(tc.even_dim, tc.odd_dim)


# -- ranks and Betti numbers --------------------------------------------------

def matrix_rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    if M.dtype == object:
        return ex.rank(M)
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > FLOAT_RANK_RTOL * max(1.0, s[0])))


@dataclass(frozen=True)
class BettiPair:
    b0: int
    b1: int

    def __iter__(self):
        return iter((self.b0, self.b1))

    @property
    def euler(self) -> int:
        return self.b0 - self.b1


def betti_twisted(tc: TwistedComplex) -> BettiPair:
    r0, r1 = matrix_rank(tc.D0), matrix_rank(tc.D1)
    return BettiPair(tc.even_dim - r0 - r1, tc.odd_dim - r1 - r0)


def betti_graded(gc: GradedComplex) -> list[int]:
    ranks = [matrix_rank(M) for M in gc.coboundaries]
    return [d - (ranks[i] if i < len(ranks) else 0) - (ranks[i - 1] if i > 0 else 0)
            for i, d in enumerate(gc.dims)]


def _representatives(outgoing: np.ndarray, incoming: np.ndarray) -> np.ndarray:
    """Kernel vectors of `outgoing` completing a basis of im(incoming)."""
    Z = ex.nullspace(outgoing)
    B = ex.column_basis(incoming)
    if Z.shape[1] == 0:
        return Z
    _, pivots = ex.rref(ex.hstack(B, Z))
    chosen = [p - B.shape[1] for p in pivots if p >= B.shape[1]]
    return Z[:, chosen] if chosen else ex.zeros(Z.shape[0], 0)


def cohomology_basis(tc: TwistedComplex, parity: int) -> list[np.ndarray]:
    """Deterministic rational cocycle representatives of H^{parity}."""
    if not tc.exact:
        raise KindMismatch("cohomology bases are computed exactly")
    R = _representatives(tc.D(parity), tc.D(parity + 1))
    return [R[:, j] for j in range(R.shape[1])]


def graded_cohomology_basis(gc: GradedComplex, degree: int) -> list[np.ndarray]:
    R = _representatives(gc.delta(degree), gc.delta(degree - 1))
    return [R[:, j] for j in range(R.shape[1])]


# -- adjoints, Laplacians, harmonic projection --------------------------------

def adjoint(d: np.ndarray, G_src: np.ndarray, G_dst: np.ndarray) -> np.ndarray:
    if d.dtype == object and G_src.dtype == object and G_dst.dtype == object:
        return ex.matmul(ex.inv(G_src), ex.matmul(d.T.copy(), G_dst))
    d, Gs, Gd = ex.to_float(d), ex.to_float(G_src), ex.to_float(G_dst)
    return np.linalg.solve(Gs, d.T @ Gd) if Gs.size else np.zeros(d.T.shape)


def _mm(A, B):
    if A.dtype == object and B.dtype == object:
        return ex.matmul(A, B)
    return ex.to_float(A) @ ex.to_float(B)


def laplacians(tc: TwistedComplex, G: InnerProductData | None = None) -> tuple[np.ndarray, np.ndarray]:
    G = default_inner(tc, G)
    out = []
    for k in (0, 1):
        dk, dk1 = tc.D(k), tc.D(k + 1)
        Gk, Gk1 = G.parity(k), G.parity(k + 1)
        lap = _mm(adjoint(dk, Gk, Gk1), dk) + _mm(dk1, adjoint(dk1, Gk1, Gk))
        out.append(lap)
    return out[0], out[1]


def harmonic_projection(z: np.ndarray, incoming: np.ndarray, G: np.ndarray) -> np.ndarray:
    """G-orthogonal projection of z off im(incoming), computed exactly."""
    B = ex.column_basis(incoming)
    if B.shape[1] == 0:
        return z.copy()
    GB = ex.matmul(G, B)
    c = ex.solve(ex.matmul(B.T.copy(), GB), ex.matvec(GB.T.copy(), z))
    return z - ex.matvec(B, c)


def volume_squared(refs: list[np.ndarray], incoming: np.ndarray, G: np.ndarray) -> Fraction:
    """Squared G-volume of the harmonic representatives of refs."""
    if not refs:
        return ex.ONE
    H = ex.hstack(*[harmonic_projection(r, incoming, G).reshape(-1, 1) for r in refs])
    return ex.det(ex.matmul(H.T.copy(), ex.matmul(G, H)))


def check_references(refs: list[np.ndarray], outgoing: np.ndarray, incoming: np.ndarray, label: str) -> None:
    dim = outgoing.shape[1]
    for r in refs:
        if len(r) != dim:
            raise ReferenceMismatch(f"{label}: reference vector has length {len(r)}, expected {dim}")
        if not ex.is_zero(ex.matvec(outgoing, r)):
            raise ReferenceMismatch(f"{label}: reference vector is not a cocycle")
    betti = dim - ex.rank(outgoing) - ex.rank(incoming)
    if len(refs) != betti:
        raise ReferenceMismatch(f"{label}: {len(refs)} references for a {betti}-dimensional cohomology")
    if refs:
        B = ex.column_basis(incoming)
        stacked = ex.hstack(B, *[r.reshape(-1, 1) for r in refs])
        if ex.rank(stacked) != B.shape[1] + len(refs):
            raise ReferenceMismatch(f"{label}: references are dependent modulo coboundaries")


# -- spectra --------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray      # nonzero, ascending, repeated by multiplicity
    zero_modes: int
    tol: float

    @property
    def dim(self) -> int:
        return self.zero_modes + len(self.eigenvalues)

    def multiplicities(self, rtol: float = 1e-9) -> list[tuple[float, int]]:
        out: list[tuple[float, int]] = []
        for v in self.eigenvalues:
            if out and abs(v - out[-1][0]) <= rtol * max(1.0, abs(v)):
                out[-1] = (out[-1][0], out[-1][1] + 1)
            else:
                out.append((float(v), 1))
        return out

    def log_det(self) -> float:
        return float(np.sum(np.log(self.eigenvalues)))


def _gen_eigvals(S: np.ndarray, G: np.ndarray) -> np.ndarray:
    try:
        return sla.eigh(S, G, eigvals_only=True) if S.size else np.zeros(0)
    except (np.linalg.LinAlgError, ValueError) as err:
        raise EigenFailure(str(err)) from err


def classify(vals: np.ndarray, tol: float = DEFAULT_TOL, gap: float | None = None) -> Spectrum:
    """Split eigenvalues into zero modes and the nonzero spectrum; ambiguous ones raise."""
    gap = 10 * tol if gap is None else gap
    vals = np.sort(np.asarray(vals, dtype=float))
    scale = float(np.max(np.abs(vals))) if vals.size else 0.0
    if scale == 0.0:
        return Spectrum(np.zeros(0), len(vals), tol)
    rel = vals / scale
    ambiguous = (np.abs(rel) >= tol / 10) & (np.abs(rel) < gap)
    if np.any(ambiguous):
        raise ToleranceAmbiguity(
            f"eigenvalue {vals[ambiguous][0]:.3e} (relative {rel[ambiguous][0]:.3e}) lies in the "
            f"ambiguous band [{tol / 10:.1e}, {gap:.1e}); supply the exact kernel dimension")
    nonzero = rel >= tol
    return Spectrum(vals[nonzero], int(np.sum(~nonzero)), tol)


def spectrum_prime(A: np.ndarray, G: np.ndarray | None = None, tol: float = DEFAULT_TOL,
                   gap: float | None = None) -> Spectrum:
    """Nonzero spectrum of a G-self-adjoint matrix A."""
    A = ex.to_float(A)
    G = np.eye(A.shape[0]) if G is None else ex.to_float(G)
    S = G @ A
    S = (S + S.T) / 2
    return classify(_gen_eigvals(S, G), tol, gap)


def dagger_d_spectrum(d: np.ndarray, G_src: np.ndarray, G_dst: np.ndarray,
                      tol: float = DEFAULT_TOL, gap: float | None = None) -> Spectrum:
    """Nonzero spectrum of d^dag d via the pencil (d^T G_dst d, G_src)."""
    df, Gs, Gd = ex.to_float(d), ex.to_float(G_src), ex.to_float(G_dst)
    if df.shape[1] == 0:
        return Spectrum(np.zeros(0), 0, tol)
    S = df.T @ Gd @ df
    S = (S + S.T) / 2
    return classify(_gen_eigvals(S, Gs), tol, gap)


@dataclass(frozen=True)
class DetPrime:
    log_value: float
    exact: Fraction | None
    rank: int

    @property
    def value(self) -> float:
        return math.exp(self.log_value)


def det_prime_exact(d: np.ndarray, G_src: np.ndarray, G_dst: np.ndarray) -> tuple[Fraction, int]:
    """Det' of d^dag d as det(R^T d^T G_dst d R) / det(R^T G_src R), R spanning im(d^dag)."""
    if d.size == 0:
        return ex.ONE, 0
    rowspace = ex.column_basis(d.T.copy())
    r = rowspace.shape[1]
    if r == 0:
        return ex.ONE, 0
    R = ex.matmul(ex.inv(G_src), rowspace)
    dR = ex.matmul(d, R)
    num = ex.det(ex.matmul(dR.T.copy(), ex.matmul(G_dst, dR)))
    den = ex.det(ex.matmul(R.T.copy(), ex.matmul(G_src, R)))
    return num / den, r


def det_prime(d: np.ndarray, G_src: np.ndarray | None = None, G_dst: np.ndarray | None = None,
              tol: float = DEFAULT_TOL, exact: bool | None = None, exact_limit: int = 256) -> DetPrime:
    """Product of the nonzero eigenvalues of d^dag d."""
    G_src = ex.eye(d.shape[1]) if G_src is None else G_src
    G_dst = ex.eye(d.shape[0]) if G_dst is None else G_dst
    check_spd(G_src, "source Gram matrix")
    check_spd(G_dst, "target Gram matrix")
    can_exact = all(M.dtype == object for M in (d, G_src, G_dst)) and min(d.shape) <= exact_limit
    if exact is None:
        exact = can_exact
    if exact:
        if not can_exact:
            raise KindMismatch("exact det' needs rational inputs")
        val, r = det_prime_exact(d, G_src, G_dst)
        return DetPrime(math.log(val) if val > 0 else float("-inf"), val, r)
    spec = dagger_d_spectrum(d, G_src, G_dst, tol)
    return DetPrime(spec.log_det(), None, len(spec.eigenvalues))


def parity_dims(dims) -> tuple[int, int]:
    return parity_dim(dims, 0), parity_dim(dims, 1)


def hodge_zero_modes(tc: TwistedComplex, G: InnerProductData | None = None, tol: float = DEFAULT_TOL,
                     gap: float = 1e-6) -> BettiPair:
    """Zero-mode counts of the floating Laplacians; ambiguous spectra raise."""
    lap = laplacians(tc, G)
    G = default_inner(tc, G)
    z = [spectrum_prime(lap[k], G.parity(k), tol, gap).zero_modes for k in (0, 1)]
    return BettiPair(z[0], z[1])
