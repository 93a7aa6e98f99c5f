"""Exact rational matrix arithmetic.

Matrices are numpy object arrays holding :class:`fractions.Fraction` entries.
Elimination works row by row and only touches nonzero entries, which keeps
coboundary matrices (very sparse) cheap.  Pivoting is deterministic: lowest
column first, then the first row carrying a nonzero entry in that column.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def frac(x) -> Fraction:
    """Coerce ints, Fractions and "num/den" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, (float, np.floating)):
        raise TypeError(f"refusing to convert float {x!r} to an exact rational")
    raise TypeError(f"cannot interpret {x!r} as a rational")


def qmat(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    """Build an exact (object dtype) matrix from nested sequences."""
    if shape is not None and (shape[0] == 0 or shape[1] == 0):
        return np.empty(shape, dtype=object)
    arr = np.array(rows, dtype=object)
    if arr.ndim == 1 and shape is not None:
        arr = arr.reshape(shape)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got ndim={arr.ndim}")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = frac(v)
    if shape is not None and out.shape != tuple(shape):
        raise ValueError(f"matrix shape {out.shape} != expected {shape}")
    return out


def qvec(values: Iterable) -> np.ndarray:
    vals = [frac(v) for v in values]
    out = np.empty(len(vals), dtype=object)
    out[:] = vals
    return out


def zeros(r: int, c: int) -> np.ndarray:
    out = np.empty((r, c), dtype=object)
    out.fill(ZERO)
    return out


def zvec(n: int) -> np.ndarray:
    out = np.empty(n, dtype=object)
    out.fill(ZERO)
    return out


def eye(n: int) -> np.ndarray:
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = ONE
    return out


def is_exact(M: np.ndarray) -> bool:
    return M.dtype == object and all(isinstance(v, Fraction) for v in M.flat)


def is_zero(M: np.ndarray) -> bool:
    return all(v == 0 for v in M.flat)


def to_float(M: np.ndarray) -> np.ndarray:
    return np.array(M, dtype=float) if M.size else np.zeros(M.shape)


def _rows(M: np.ndarray) -> list[dict[int, Fraction]]:
    return [{j: v for j, v in enumerate(row) if v != 0} for row in M]


_INT64_SAFE = 2 ** 62


def _int_entries(M: np.ndarray) -> np.ndarray | None:
    """M as an int64 array when every entry is an integer of modest size."""
    flat = M.ravel()
    if not all(x.denominator == 1 for x in flat):
        return None
    ints = [x.numerator for x in flat]
    if ints and max(map(abs, ints)) >= 2 ** 30:
        return None
    return np.array(ints, dtype=np.int64).reshape(M.shape)


def _from_ints(M: np.ndarray) -> np.ndarray:
    out = np.empty(M.shape, dtype=object)
    out.ravel()[:] = [Fraction(int(x)) for x in M.ravel()]
    return out


def matmul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact product, skipping zero entries of both factors.

    Integral factors whose product provably fits in int64 go through numpy.
    """
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size and B.size:
        Ai, Bi = _int_entries(A), _int_entries(B)
        if Ai is not None and Bi is not None:
            bound = int(np.abs(Ai).max()) * int(np.abs(Bi).max()) * A.shape[1]
            if bound < _INT64_SAFE:
                return _from_ints(Ai @ Bi)
    out = zeros(A.shape[0], B.shape[1])
    brows = _rows(B)
    for i, arow in enumerate(_rows(A)):
        acc: dict[int, Fraction] = {}
        for k, a in arow.items():
            for j, b in brows[k].items():
                acc[j] = acc.get(j, ZERO) + a * b
        for j, v in acc.items():
            out[i, j] = v
    return out


def matvec(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    return matmul(A, x.reshape(-1, 1)).reshape(-1)


def block(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Exact analogue of np.block that tolerates empty blocks."""
    heights = [max(b.shape[0] for b in row) for row in blocks]
    widths = [max(blocks[r][c].shape[1] for r in range(len(blocks))) for c in range(len(blocks[0]))]
    out = zeros(sum(heights), sum(widths))
    r0 = 0
    for r, row in enumerate(blocks):
        c0 = 0
        for c, b in enumerate(row):
            if b.size:
                out[r0:r0 + b.shape[0], c0:c0 + b.shape[1]] = b
            c0 += widths[c]
        r0 += heights[r]
    return out


def block_diag(*mats: np.ndarray) -> np.ndarray:
    out = zeros(sum(m.shape[0] for m in mats), sum(m.shape[1] for m in mats))
    r = c = 0
    for m in mats:
        if m.size:
            out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    out = zeros(A.shape[0] * B.shape[0], A.shape[1] * B.shape[1])
    for (i, j), a in np.ndenumerate(A):
        if a != 0:
            out[i * B.shape[0]:(i + 1) * B.shape[0], j * B.shape[1]:(j + 1) * B.shape[1]] = a * B
    return out


def rref(M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns."""
    nrows, ncols = M.shape
    rows = _rows(M)
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if c in rows[i]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = ONE / rows[r][c]
        prow = {j: v * inv for j, v in rows[r].items()}
        rows[r] = prow
        for i in range(nrows):
            if i != r and c in rows[i]:
                f = rows[i][c]
                row = rows[i]
                for j, v in prow.items():
                    nv = row.get(j, ZERO) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        pivots.append(c)
        r += 1
    out = zeros(nrows, ncols)
    for i, row in enumerate(rows):
        for j, v in row.items():
            out[i, j] = v
    return out, pivots


def _forward_rank(rows: list[dict[int, Fraction]], ncols: int) -> int:
    """Rank by forward elimination only (cheaper than a full rref)."""
    rank = 0
    nrows = len(rows)
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if c in rows[i]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pv = prow[c]
        for i in range(rank + 1, nrows):
            row = rows[i]
            if c in row:
                f = row[c] / pv
                for j, v in prow.items():
                    nv = row.get(j, ZERO) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
        rank += 1
        if rank == nrows:
            break
    return rank


def rank(M: np.ndarray) -> int:
    if M.size == 0:
        return 0
    # eliminate along the shorter dimension
    if M.shape[0] > M.shape[1]:
        M = M.T
    return _forward_rank(_rows(M), M.shape[1])


def nullspace(M: np.ndarray) -> np.ndarray:
    """Columns spanning ker M, one per free column (deterministic)."""
    n = M.shape[1]
    if M.shape[0] == 0:
        return eye(n)
    R, pivots = rref(M)
    free = [j for j in range(n) if j not in set(pivots)]
    out = zeros(n, len(free))
    for k, f in enumerate(free):
        out[f, k] = ONE
        for i, p in enumerate(pivots):
            out[p, k] = -R[i, f]
    return out


def column_basis(M: np.ndarray) -> np.ndarray:
    """The pivot columns of M: a basis of its column space."""
    if M.size == 0:
        return zeros(M.shape[0], 0)
    _, pivots = rref(M)
    return M[:, pivots] if pivots else zeros(M.shape[0], 0)


def hstack(*mats: np.ndarray) -> np.ndarray:
    nrows = mats[0].shape[0]
    out = zeros(nrows, sum(m.shape[1] for m in mats))
    c = 0
    for m in mats:
        if m.size:
            out[:, c:c + m.shape[1]] = m
        c += m.shape[1]
    return out


def solve(A: np.ndarray, b: np.ndarray) -> np.ndarray | None:
    """A particular solution of A x = b (free variables zero), or None."""
    aug = hstack(A, b.reshape(-1, 1))
    R, pivots = rref(aug)
    n = A.shape[1]
    if n in pivots:
        return None
    x = zvec(n)
    for i, p in enumerate(pivots):
        x[p] = R[i, n]
    return x


def det(M: np.ndarray) -> Fraction:
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("det of a non-square matrix")
    if n == 0:
        return ONE
    rows = _rows(M)
    sign = 1
    result = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if c in rows[i]), None)
        if piv is None:
            return ZERO
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        prow = rows[c]
        pv = prow[c]
        result *= pv
        for i in range(c + 1, n):
            row = rows[i]
            if c in row:
                f = row[c] / pv
                for j, v in prow.items():
                    nv = row.get(j, ZERO) - f * v
                    if nv:
                        row[j] = nv
                    else:
                        row.pop(j, None)
    return result * sign


def inv(M: np.ndarray) -> np.ndarray:
    n = M.shape[0]
    R, pivots = rref(hstack(M, eye(n)))
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:]


def is_perfect_square(x: Fraction) -> bool:
    if x < 0:
        return False
    return _isqrt_exact(x.numerator) is not None and _isqrt_exact(x.denominator) is not None


def _isqrt_exact(n: int) -> int | None:
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


def sqrt_exact(x: Fraction) -> Fraction | None:
    """Rational square root of x, or None when x is not a rational square."""
    if x < 0:
        return None
    a, b = _isqrt_exact(x.numerator), _isqrt_exact(x.denominator)
    if a is None or b is None:
        return None
    return Fraction(a, b)
