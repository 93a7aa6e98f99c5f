"""Pointwise exterior algebra on R^n: Hodge star, the (g, B) star and the
Born-Infeld pairing.

Forms are coefficient vectors over the 2^n basis monomials dx^S, S ordered by
(degree, lexicographic).  Operators are 2^n x 2^n matrices.  The float path
uses numpy; when g and B are rational the same construction runs on sympy
numbers (square roots enter through the Cholesky frame) and stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial

import numpy as np
import sympy as sp

from .errors import GramNotSPD
from .report import CheckResult, fmt_value


# -- basis ----------------------------------------------------------------------

@lru_cache(maxsize=None)
def basis(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(S for k in range(n + 1) for S in combinations(range(n), k))


@lru_cache(maxsize=None)
def index(n: int) -> dict[tuple[int, ...], int]:
    return {S: i for i, S in enumerate(basis(n))}


def merge_sign(I: tuple[int, ...], J: tuple[int, ...]) -> int:
    """Sign of dx^I ^ dx^J relative to dx^{I u J}; 0 if they overlap."""
    if set(I) & set(J):
        return 0
    inversions = sum(1 for i in I for j in J if i > j)
    return -1 if inversions % 2 else 1


def _zeros(N: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty((N, N), dtype=object)
        out.fill(sp.Integer(0))
        return out
    return np.zeros((N, N))


def _vzeros(N: int, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(N, dtype=object)
        out.fill(sp.Integer(0))
        return out
    return np.zeros(N)


@dataclass(frozen=True, eq=False)
class ExteriorElement:
    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        if len(self.coeffs) != 2 ** self.n:
            raise ValueError(f"expected {2 ** self.n} coefficients, got {len(self.coeffs)}")

    @classmethod
    def from_dict(cls, n: int, terms: dict, exact: bool = False) -> "ExteriorElement":
        v = _vzeros(2 ** n, exact)
        for S, c in terms.items():
            S = tuple(S)
            sign = 1
            srt = tuple(sorted(S))
            if len(set(S)) != len(S):
                continue
            perm = [srt.index(s) for s in S]
            inv = sum(1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b])
            sign = -1 if inv % 2 else 1
            v[index(n)[srt]] += sign * (sp.nsimplify(c) if exact else c)
        return cls(n, v)

    @classmethod
    def unit(cls, n: int, S=(), exact: bool = False) -> "ExteriorElement":
        return cls.from_dict(n, {tuple(S): 1}, exact)

    def degree_part(self, k: int) -> "ExteriorElement":
        v = self.coeffs.copy()
        for i, S in enumerate(basis(self.n)):
            if len(S) != k:
                v[i] = 0 * v[i]
        return ExteriorElement(self.n, v)

    def terms(self) -> dict[tuple[int, ...], object]:
        return {S: c for S, c in zip(basis(self.n), self.coeffs) if c != 0}

    def top(self):
        return self.coeffs[-1]

    def wedge(self, other: "ExteriorElement") -> "ExteriorElement":
        exact = self.coeffs.dtype == object or other.coeffs.dtype == object
        v = _vzeros(2 ** self.n, exact)
        idx = index(self.n)
        for I, a in self.terms().items():
            for J, b in other.terms().items():
                s = merge_sign(I, J)
                if s:
                    v[idx[tuple(sorted(I + J))]] += s * a * b
        return ExteriorElement(self.n, v)

    def __add__(self, other: "ExteriorElement") -> "ExteriorElement":
        return ExteriorElement(self.n, self.coeffs + other.coeffs)

    def __sub__(self, other: "ExteriorElement") -> "ExteriorElement":
        return ExteriorElement(self.n, self.coeffs - other.coeffs)

    def __mul__(self, c) -> "ExteriorElement":
        return ExteriorElement(self.n, self.coeffs * c)

    __rmul__ = __mul__


# -- elementary operators --------------------------------------------------------

def wedge_matrix(n: int, alpha, exact: bool = False) -> np.ndarray:
    """Left exterior multiplication by the 1-form sum alpha_i dx^i."""
    N = 2 ** n
    M = _zeros(N, exact)
    idx = index(n)
    for col, S in enumerate(basis(n)):
        for i in range(n):
            if alpha[i] != 0 and i not in S:
                M[idx[tuple(sorted(S + (i,)))], col] += merge_sign((i,), S) * alpha[i]
    return M


def interior_matrix(n: int, X, exact: bool = False) -> np.ndarray:
    """Contraction with the vector sum X^i d/dx^i."""
    N = 2 ** n
    M = _zeros(N, exact)
    idx = index(n)
    for col, S in enumerate(basis(n)):
        for pos, i in enumerate(S):
            if X[i] != 0:
                rest = S[:pos] + S[pos + 1:]
                M[idx[rest], col] += (-1) ** pos * X[i]
    return M


def two_form(B, exact: bool = False) -> ExteriorElement:
    n = len(B)
    return ExteriorElement.from_dict(n, {(i, j): B[i][j] for i in range(n) for j in range(i + 1, n)}, exact)


def wedge_by(elem: ExteriorElement) -> np.ndarray:
    """Matrix of x -> elem ^ x."""
    n = elem.n
    exact = elem.coeffs.dtype == object
    M = _zeros(2 ** n, exact)
    for col, S in enumerate(basis(n)):
        e = ExteriorElement.unit(n, S, exact)
        M[:, col] = elem.wedge(e).coeffs
    return M


def exp_wedge(B, exact: bool = False) -> np.ndarray:
    """eps_B = exp(B ^ .), a finite sum."""
    n = len(B)
    W = wedge_by(two_form(B, exact))
    N = 2 ** n
    out = _zeros(N, exact)
    for i in range(N):
        out[i, i] = sp.Integer(1) if exact else 1.0
    term = out.copy()
    for k in range(1, n // 2 + 1):
        term = W @ term
        out = out + term * (sp.Rational(1, factorial(k)) if exact else 1.0 / factorial(k))
    return out


def sigma_matrix(n: int, exact: bool = False) -> np.ndarray:
    M = _zeros(2 ** n, exact)
    for i, S in enumerate(basis(n)):
        k = len(S)
        M[i, i] = (-1) ** (k * (k - 1) // 2)
    return M


def reversal_sigma(w: ExteriorElement) -> ExteriorElement:
    v = w.coeffs.copy()
    for i, S in enumerate(basis(w.n)):
        k = len(S)
        if (k * (k - 1) // 2) % 2:
            v[i] = -v[i]
    return ExteriorElement(w.n, v)


# -- the generalized metric ----------------------------------------------------------

def _is_rational_matrix(M) -> bool:
    return all(isinstance(x, (int, Fraction, sp.Rational)) or (isinstance(x, sp.Basic) and x.is_Rational)
               for x in np.asarray(M, dtype=object).flat)


def _sympy_matrix(M) -> sp.Matrix:
    return sp.Matrix([[sp.nsimplify(x) if not isinstance(x, Fraction) else sp.Rational(x.numerator, x.denominator)
                       for x in row] for row in np.asarray(M, dtype=object)])


@dataclass(frozen=True, eq=False)
class GeneralizedMetric:
    g: np.ndarray
    B: np.ndarray
    orientation: int = 1
    exact: bool = False

    def __post_init__(self):
        g, B = np.asarray(self.g), np.asarray(self.B)
        n = g.shape[0]
        if g.shape != (n, n) or B.shape != (n, n):
            raise GramNotSPD("g and B must be square of equal size")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if self.exact:
            gs, Bs = _sympy_matrix(g), _sympy_matrix(B)
            if gs != gs.T:
                raise GramNotSPD("g is not symmetric")
            if Bs != -Bs.T:
                raise GramNotSPD("B is not antisymmetric")
            if not all(gs[:k, :k].det() > 0 for k in range(1, n + 1)):
                raise GramNotSPD("g is not positive definite")
            object.__setattr__(self, "g", np.array(gs.tolist(), dtype=object))
            object.__setattr__(self, "B", np.array(Bs.tolist(), dtype=object))
        else:
            g, B = np.asarray(g, dtype=float), np.asarray(B, dtype=float)
            if not np.allclose(g, g.T, atol=1e-12):
                raise GramNotSPD("g is not symmetric")
            if not np.allclose(B, -B.T, atol=1e-12):
                raise GramNotSPD("B is not antisymmetric")
            try:
                np.linalg.cholesky(g)
            except np.linalg.LinAlgError as err:
                raise GramNotSPD("g is not positive definite") from err
            object.__setattr__(self, "g", g)
            object.__setattr__(self, "B", B)

    @classmethod
    def rational(cls, g, B=None, orientation: int = 1) -> "GeneralizedMetric":
        n = len(g)
        B = np.zeros((n, n), dtype=int) if B is None else B
        return cls(np.asarray(g, dtype=object), np.asarray(B, dtype=object), orientation, exact=True)

    @property
    def n(self) -> int:
        return self.g.shape[0]

    def frame(self) -> np.ndarray:
        """Columns e_i: a g-orthonormal frame from the Cholesky factor g = L L^T."""
        if self.exact:
            L = sp.Matrix(self.g.tolist()).cholesky(hermitian=False)
            E = np.array(L.inv().T.tolist(), dtype=object)
        else:
            L = np.linalg.cholesky(self.g)
            E = np.linalg.inv(L).T
        if self.orientation == -1:
            E = E.copy()
            E[:, -1] = -E[:, -1]
        return E

    def hat_operators(self) -> list[np.ndarray]:
        """e-hat_i = contraction with e_i plus wedge with (g + B)(e_i, .)."""
        E = self.frame()
        gB = self.g + self.B
        ops = []
        for i in range(self.n):
            e = E[:, i]
            alpha = gB.T @ e
            if self.exact:
                alpha = np.array([sp.simplify(a) for a in alpha], dtype=object)
            ops.append(interior_matrix(self.n, e, self.exact) + wedge_matrix(self.n, alpha, self.exact))
        return ops

    def star_matrix(self) -> np.ndarray:
        M = sigma_matrix(self.n, self.exact)
        prod = None
        for op in self.hat_operators():          # e-hat_1 acts first
            prod = op if prod is None else op @ prod
        out = M @ prod
        if self.exact:
            out = np.vectorize(sp.simplify, otypes=[object])(out)
        return out

    def pairing_matrix(self) -> np.ndarray:
        """P[a, b] = top coefficient of dx^a ^ star(dx^b)."""
        n = self.n
        S = self.star_matrix()
        N = 2 ** n
        P = _zeros(N, self.exact)
        top = tuple(range(n))
        for a, I in enumerate(basis(n)):
            comp = tuple(i for i in top if i not in I)
            b_idx = index(n)[comp]
            s = merge_sign(I, comp)
            P[a, :] = s * S[b_idx, :]
        if self.exact:
            P = np.vectorize(sp.simplify, otypes=[object])(P)
        return P


def generalized_star(gm: GeneralizedMetric, w: ExteriorElement) -> ExteriorElement:
    return ExteriorElement(gm.n, gm.star_matrix() @ w.coeffs)


def born_infeld_pair(gm: GeneralizedMetric, w: ExteriorElement, w2: ExteriorElement):
    """Top coefficient of w ^ star_(g,B) conj(w2); real coefficients here."""
    val = w.wedge(generalized_star(gm, w2)).top()
    return sp.simplify(val) if gm.exact else float(val)


def hodge_star(g) -> np.ndarray:
    """Classical Hodge star in the dx basis from minors of g^{-1}.

    star dx^I = sqrt(det g) sum_K sign(K, K^c) det(g^{-1}[K, I]) dx^{K^c}.
    """
    exact = np.asarray(g).dtype == object
    if exact:
        gs = sp.Matrix(np.asarray(g).tolist())
        ginv, vol = gs.inv(), sp.sqrt(gs.det())
    else:
        gs = np.asarray(g, dtype=float)
        ginv, vol = np.linalg.inv(gs), np.sqrt(np.linalg.det(gs))
    n = gs.shape[0]
    N = 2 ** n
    M = _zeros(N, exact)
    idx = index(n)
    for col, I in enumerate(basis(n)):
        k = len(I)
        for K in combinations(range(n), k):
            comp = tuple(i for i in range(n) if i not in K)
            if exact:
                minor = ginv.extract(list(K), list(I)).det() if k else sp.Integer(1)
            else:
                minor = np.linalg.det(ginv[np.ix_(K, I)]) if k else 1.0
            M[idx[comp], col] += merge_sign(K, comp) * minor * vol
    if exact:
        M = np.vectorize(sp.simplify, otypes=[object])(M)
    return M


def intertwining_sides(gm: GeneralizedMetric) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of both sides: P_(g,B) and eps_B^T P_g eps_B."""
    P_gB = gm.pairing_matrix()
    plain = GeneralizedMetric(gm.g, gm.B * 0, gm.orientation, gm.exact)
    eps = exp_wedge(gm.B, gm.exact)
    rhs = eps.T @ plain.pairing_matrix() @ eps
    return P_gB, rhs


def verify_intertwining(gm: GeneralizedMetric, samples, tol: float = 1e-10,
                        name: str = "born-infeld") -> CheckResult:
    """(w, w')_(g,B) against (eps_B w, eps_B w')_g on sampled pairs.

    The deviation is |left - right| / max(1, |left|, |right|).
    """
    P, R = intertwining_sides(gm)
    worst, wl, wr = 0.0, 0.0, 0.0
    for w, w2 in samples:
        a = np.asarray(w, dtype=float) if not gm.exact else w
        b = np.asarray(w2, dtype=float) if not gm.exact else w2
        left = float(a @ P @ b)
        right = float(a @ R @ b)
        dev = abs(left - right) / max(1.0, abs(left), abs(right))
        if dev >= worst:
            worst, wl, wr = dev, left, right
    return CheckResult(name, worst <= tol, fmt_value(wl), fmt_value(wr), worst, tol,
                       f"n={gm.n}, {len(samples)} pairs")


def random_metric(rng: np.random.Generator, n: int, with_b: bool = True) -> GeneralizedMetric:
    A = rng.uniform(-1, 1, (n, n))
    g = A @ A.T / n + np.eye(n)
    B = np.zeros((n, n))
    if with_b:
        U = rng.uniform(-1, 1, (n, n))
        B = U - U.T
    return GeneralizedMetric(g, B)
