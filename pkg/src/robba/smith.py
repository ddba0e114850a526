"""Elimination over the local ring Z/p^N.

Matrices are numpy int64 arrays with entries in [0, p^N).  For p^N < 2^50
products are reduced with a floating-point quotient estimate (the int64
remainder wraps harmlessly); up to 2^61 a chunked multiply is used, and
larger moduli fall back to Python integers (object arrays).

Pivoting always picks an entry of minimal valuation, so the pivot
valuations are the elementary divisors of the matrix over Z_p (truncated
at N).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class Ring:
    """Z/p^N with vectorised modular arithmetic."""

    def __init__(self, p: int, N: int):
        self.p = p
        self.N = N
        self.mod = p**N
        bits = self.mod.bit_length()
        self.native = bits <= 61
        self.dtype = np.int64 if self.native else object
        self.bits = bits
        # chunk width for a*b with a < 2^bits: keep every partial product below 2^62
        self.chunk = max(1, 62 - bits)
        self.fmod = float(self.mod)

    def asarray(self, a) -> np.ndarray:
        if self.native:
            arr = np.asarray(a, dtype=object) % self.mod
            return arr.astype(np.int64)
        return np.asarray(a, dtype=object) % self.mod

    def zeros(self, shape):
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n):
        return np.eye(n, dtype=self.dtype) if self.native else np.identity(n, dtype=object)

    def mulmod(self, a, b):
        """Elementwise a*b mod p^N (broadcasting)."""
        mod = self.mod
        if not self.native:
            return (a * b) % mod
        if self.bits <= 31:
            return (a * b) % mod
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.bits <= 50:
            q = np.floor(a.astype(np.float64) * b.astype(np.float64) / self.fmod).astype(np.int64)
            with np.errstate(over="ignore"):
                r = a * b - q * mod
            return r % mod
        c = self.chunk
        mask = (1 << c) - 1
        nchunks = -(-self.bits // c)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.int64)
        for k in reversed(range(nchunks)):
            part = (b >> (k * c)) & mask
            out = ((out << c) % mod + a * part) % mod
        return out

    def matmul(self, A, B):
        """A @ B mod p^N."""
        mod = self.mod
        if not self.native:
            return A.dot(B) % mod
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        inner = max(A.shape[1], 1)
        # chunk B so each partial sum stays below 2^62
        c = max(1, 62 - self.bits - inner.bit_length())
        mask = (1 << c) - 1
        nchunks = -(-self.bits // c)
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in reversed(range(nchunks)):
            part = (B >> (k * c)) & mask
            out = (self.mulmod(out, 1 << c) + (A @ part) % mod) % mod
        return out

    def val(self, x: int) -> int:
        x = int(x) % self.mod
        if x == 0:
            return self.N
        v = 0
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def inv_unit(self, x: int) -> int:
        return pow(int(x), -1, self.mod)


@dataclass
class Elimination:
    """Result of a full local-ring elimination U A V = diag(p^v_i u_i)."""

    vals: list
    V: np.ndarray | None
    perm: list  # original index of the column that ended in position r
    rows: np.ndarray | None  # transformed right-hand sides (U b), if any
    diag_units: list

    def rank(self, ntol: int) -> int:
        return sum(1 for v in self.vals if v < ntol)


def eliminate(R: Ring, A, rhs=None, want_V: bool = False) -> Elimination:
    """Minimal-valuation pivoting; records column transform and transformed rhs."""
    A = R.asarray(A).copy()
    m, n = A.shape
    V = R.eye(n) if want_V else None
    B = None if rhs is None else R.asarray(rhs).copy().reshape(m, -1)
    vals, units = [], []
    perm = list(range(n))
    p, mod = R.p, R.mod
    r = 0
    while r < min(m, n):
        sub = A[r:, r:]
        piv = None
        for k in range(1, R.N + 1):
            hits = np.argwhere(sub % (p**k) != 0)
            if len(hits):
                i, j = hits[0]
                piv = (k - 1, r + int(i), r + int(j))
                break
        if piv is None:
            break
        v, i, j = piv
        if i != r:
            A[[r, i]] = A[[i, r]]
            if B is not None:
                B[[r, i]] = B[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            perm[r], perm[j] = perm[j], perm[r]
            if V is not None:
                V[:, [r, j]] = V[:, [j, r]]
        pv = p**v
        u = R.inv_unit(int(A[r, r]) // pv)
        # only rows/columns with a nonzero entry need touching (operators are sparse)
        nz = np.flatnonzero(A[r + 1:, r]) + r + 1
        if len(nz):
            f = R.mulmod(A[nz, r] // pv, u)
            prow = A[r, r:]
            A[nz, r:] = (A[nz, r:] - R.mulmod(f[:, None], prow[None, :])) % mod
            if B is not None:
                B[nz, :] = (B[nz, :] - R.mulmod(f[:, None], B[r, :][None, :])) % mod
        if V is not None:
            cz = np.flatnonzero(A[r, r + 1:]) + r + 1
            if len(cz):
                rowf = R.mulmod(A[r, cz] // pv, u)
                V[:, cz] = (V[:, cz] - R.mulmod(V[:, r][:, None], rowf[None, :])) % mod
        A[r, r + 1:] = 0
        vals.append(v)
        units.append(int(A[r, r]) // pv)
        r += 1
    return Elimination(vals, V, perm, B, units)


def elementary_valuations(R: Ring, A) -> list:
    A = R.asarray(A)
    if A.size == 0:
        return []
    return eliminate(R, A).vals


def rank(R: Ring, A, ntol: int) -> int:
    A = np.asarray(A)
    if A.size == 0 or A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return sum(1 for v in elementary_valuations(R, A) if v < ntol)


def kernel(R: Ring, A, ntol: int) -> np.ndarray:
    """Columns spanning the approximate kernel (pivots of valuation >= ntol count as zero)."""
    A = R.asarray(A)
    n = A.shape[1]
    if A.shape[0] == 0:
        return R.eye(n)
    el = eliminate(R, A, want_V=True)
    r = el.rank(ntol)
    # pivots of valuation >= ntol stay in the kernel
    return el.V[:, r:]


def solve(R: Ring, A, b, ntol: int, with_loss: bool = False):
    """Least-valuation solve of A x = b.

    Returns (x, residual_valuation): the residual is the valuation of the part
    of b outside the image (N means b is in the image modulo p^N).  With
    ``with_loss`` a third entry gives the largest pivot valuation divided
    out, i.e. the number of p-adic digits of x that are not determined.
    """
    A = R.asarray(A)
    m, n = A.shape
    b = R.asarray(b).reshape(m)
    el = eliminate(R, A, rhs=b, want_V=True)
    y = R.zeros(n)
    resid = R.N
    loss = 0
    cb = el.rows[:, 0]
    for i, v in enumerate(el.vals):
        c = int(cb[i])
        vc = R.val(c)
        if v >= ntol:
            resid = min(resid, vc)
            continue
        if vc < v:
            resid = min(resid, vc)
            continue
        y[i] = (c // p_pow(R, v)) * R.inv_unit(el.diag_units[i]) % R.mod
        loss = max(loss, v)
    for i in range(len(el.vals), m):
        resid = min(resid, R.val(int(cb[i])))
    x = R.matmul(el.V, y.reshape(n, 1)).reshape(n)
    return (x, resid, loss) if with_loss else (x, resid)


def p_pow(R: Ring, v: int) -> int:
    return R.p**v
