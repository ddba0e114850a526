"""Bounded complexes of finite free modules, cones, Bocksteins and heights.

Two coefficient rings are supported: exact rationals and Z/p^N read as a
capped approximation of Q_p.  Complexes over the dual numbers E[X]/(X^2)
are given by a pair (d0, h) with total differential d0 + X h.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import qlinalg as ql
from . import smith
from .errors import DegreeRange, DimensionMismatch, NotSquareZero, NotStabilized, PreconditionError

RINGS = ("rationals", "qp", "dual")


class Rationals:
    name = "rationals"

    def mat(self, A, m=None, n=None):
        A = ql.fmat(A)
        if m is not None and not A:
            return [[Fraction(0)] * (n or 0) for _ in range(m)]
        return A

    def zeros(self, m, n):
        return ql.zeros(m, n)

    def eye(self, n):
        return ql.identity(n)

    def matmul(self, A, B):
        if not A or not B or not B[0]:
            return ql.zeros(len(A), len(B[0]) if B else 0)
        return ql.matmul(A, B)

    def neg(self, A):
        return [[-x for x in r] for r in A]

    def is_zero(self, A) -> bool:
        return all(x == 0 for r in A for x in r)

    def rank(self, A) -> int:
        return ql.rank(A) if A and A[0] else 0

    def kernel(self, A, n) -> list:
        if not A:
            return ql.identity(n)
        return ql.kernel(A, n)

    def coords(self, basis, v):
        return ql.coordinates(basis, v)

    def scalar(self, x):
        return Fraction(x)

    def fmt(self, x) -> str:
        return str(x)


class CappedQp:
    """Z/p^N with pivots of valuation >= ntol treated as zero."""

    name = "qp"

    def __init__(self, p: int, N: int, ntol: int | None = None):
        self.p, self.N = p, N
        self.ntol = ntol if ntol is not None else -(-N // 2)
        self.R = smith.Ring(p, N)

    def mat(self, A, m=None, n=None):
        mod = self.R.mod
        if m is not None and not A:
            return [[0] * (n or 0) for _ in range(m)]
        return [[int(Fraction(x).numerator * pow(Fraction(x).denominator, -1, mod)) % mod for x in r]
                for r in A]

    def zeros(self, m, n):
        return [[0] * n for _ in range(m)]

    def eye(self, n):
        return [[int(i == j) for j in range(n)] for i in range(n)]

    def matmul(self, A, B):
        if not A or not B or not B[0]:
            return self.zeros(len(A), len(B[0]) if B else 0)
        return self.R.matmul(np.array(A, dtype=self.R.dtype), np.array(B, dtype=self.R.dtype)).tolist()

    def neg(self, A):
        return [[(-x) % self.R.mod for x in r] for r in A]

    def is_zero(self, A) -> bool:
        return all(self.R.val(x) >= self.N for r in A for x in r)

    def _check_gray(self, A):
        if not A or not A[0]:
            return
        for v in smith.elementary_valuations(self.R, A):
            if self.ntol <= v < self.N:
                raise NotStabilized(f"pivot of valuation {v} lies in the gray zone [{self.ntol}, {self.N})")

    def rank(self, A) -> int:
        if not A or not A[0]:
            return 0
        self._check_gray(A)
        return smith.rank(self.R, A, self.ntol)

    def kernel(self, A, n) -> list:
        if not A:
            return self.eye(n)
        K = smith.kernel(self.R, A, self.ntol)
        return [list(map(int, K[:, j])) for j in range(K.shape[1])]

    def coords(self, basis, v):
        A = [list(col) for col in zip(*basis)]
        x, resid = smith.solve(self.R, A, v, self.ntol)
        if resid < self.ntol:
            raise DimensionMismatch("vector is not in the span")
        return [int(c) for c in x]

    def scalar(self, x):
        return int(x) % self.R.mod

    def fmt(self, x) -> str:
        from .padic import PadicScalar, format_scalar
        return format_scalar(PadicScalar(self.p, int(x), 0, self.N))


def make_ring(tag: str, p: int = 5, N: int = 14, ntol: int | None = None):
    if tag == "rationals":
        return Rationals()
    if tag == "qp":
        return CappedQp(p, N, ntol)
    raise PreconditionError(f"unknown ring {tag!r}; expected one of {RINGS}")


@dataclass
class FiniteComplex:
    """C^lo -> ... -> C^hi; diffs[k] maps degree lo+k to lo+k+1."""

    ring: object
    lo: int
    ranks: list
    diffs: list
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if len(self.diffs) != max(len(self.ranks) - 1, 0):
            raise DimensionMismatch("need one differential between consecutive degrees")
        self.diffs = [self.ring.mat(D, self.ranks[k + 1], self.ranks[k]) for k, D in enumerate(self.diffs)]
        for k, D in enumerate(self.diffs):
            if len(D) != self.ranks[k + 1] or any(len(r) != self.ranks[k] for r in D):
                raise DimensionMismatch(f"differential out of degree {self.lo + k} has the wrong shape")
        if self.check:
            for k in range(len(self.diffs) - 1):
                if not self.ring.is_zero(self.ring.matmul(self.diffs[k + 1], self.diffs[k])):
                    raise NotSquareZero(f"d o d != 0 at degree {self.lo + k}")

    @property
    def hi(self) -> int:
        return self.lo + len(self.ranks) - 1

    def rank_at(self, i: int) -> int:
        return self.ranks[i - self.lo] if self.lo <= i <= self.hi else 0

    def d(self, i: int):
        """Matrix of d: C^i -> C^{i+1} (possibly empty)."""
        if self.lo <= i < self.hi:
            return self.diffs[i - self.lo]
        return self.ring.zeros(self.rank_at(i + 1), self.rank_at(i))

    def euler_char(self) -> int:
        return sum((-1) ** ((self.lo + k) % 2) * r for k, r in enumerate(self.ranks))

    def as_dict(self) -> dict:
        return {"range": [self.lo, self.hi], "ranks": list(self.ranks), "ring": self.ring.name,
                "diffs": [[[self.ring.fmt(x) for x in r] for r in D] for D in self.diffs]}


@dataclass
class ComplexMap:
    src: FiniteComplex
    tgt: FiniteComplex
    mats: dict  # degree -> matrix C^i -> D^i

    def at(self, i: int):
        ring = self.src.ring
        if i in self.mats:
            return self.mats[i]
        return ring.zeros(self.tgt.rank_at(i), self.src.rank_at(i))

    def is_chain_map(self) -> bool:
        ring = self.src.ring
        lo = min(self.src.lo, self.tgt.lo)
        hi = max(self.src.hi, self.tgt.hi)
        for i in range(lo, hi):
            a = ring.matmul(self.tgt.d(i), self.at(i))
            b = ring.matmul(self.at(i + 1), self.src.d(i))
            if a and a[0] and not ring.is_zero(_msub(ring, a, b)):
                return False
        return True


def _msub(ring, A, B):
    return _madd(ring, A, ring.neg(B))


def _madd(ring, A, B):
    if isinstance(ring, CappedQp):
        mod = ring.R.mod
        return [[(a + b) % mod for a, b in zip(r, s)] for r, s in zip(A, B)]
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def _blocks(ring, rows: list, row_dims: list, col_dims: list):
    """Assemble a block matrix; None blocks are zero."""
    out = []
    for bi, brow in enumerate(rows):
        for r in range(row_dims[bi]):
            line = []
            for bj, B in enumerate(brow):
                line += list(B[r]) if B is not None else [ring.scalar(0)] * col_dims[bj]
            out.append(line)
    return out


def _span(C: FiniteComplex, lo: int, hi: int, fn):
    return [fn(i) for i in range(lo, hi + 1)]


def shift(C: FiniteComplex, k: int) -> FiniteComplex:
    """C[k]^i = C^{i+k} with differential (-1)^k d."""
    sgn = (lambda D: C.ring.neg(D)) if k % 2 else (lambda D: D)
    return FiniteComplex(C.ring, C.lo - k, list(C.ranks), [sgn(D) for D in C.diffs], check=False)


def direct_sum(Cs) -> FiniteComplex:
    Cs = list(Cs)
    ring = Cs[0].ring
    lo = min(C.lo for C in Cs)
    hi = max(C.hi for C in Cs)
    ranks = [sum(C.rank_at(i) for C in Cs) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        rows = [[C.d(i) if C is D else None for D in Cs] for C in Cs]
        diffs.append(_blocks(ring, rows, [C.rank_at(i + 1) for C in Cs], [C.rank_at(i) for C in Cs]))
    return FiniteComplex(ring, lo, ranks, diffs, check=False)


def sum_map(maps, src: FiniteComplex, tgt: FiniteComplex, layout) -> ComplexMap:
    """Block map src = (+) src_j -> tgt = (+) tgt_i; layout[i][j] is a ComplexMap, a sign and map, or None."""
    ring = src.ring
    mats = {}
    lo, hi = min(src.lo, tgt.lo), max(src.hi, tgt.hi)
    tgts, srcs = maps
    for d in range(lo, hi + 1):
        rows = []
        for i, T in enumerate(tgts):
            row = []
            for j, S in enumerate(srcs):
                ent = layout[i][j]
                if ent is None:
                    row.append(None)
                else:
                    sgn, f = ent
                    M = f.at(d)
                    row.append(ring.neg(M) if sgn < 0 else M)
            rows.append(row)
        mats[d] = _blocks(ring, rows, [T.rank_at(d) for T in tgts], [S.rank_at(d) for S in srcs])
    return ComplexMap(src, tgt, mats)


def cone(f: ComplexMap) -> FiniteComplex:
    """cone(f)^i = C^{i+1} (+) D^i with d(c, x) = (-d c, f c + d x)."""
    C, D = f.src, f.tgt
    ring = C.ring
    lo = min(C.lo - 1, D.lo)
    hi = max(C.hi - 1, D.hi)
    ranks = [C.rank_at(i + 1) + D.rank_at(i) for i in range(lo, hi + 1)]
    diffs = []
    for i in range(lo, hi):
        rows = [[ring.neg(C.d(i + 1)), None], [f.at(i + 1), D.d(i)]]
        diffs.append(_blocks(ring, rows, [C.rank_at(i + 2), D.rank_at(i + 1)],
                             [C.rank_at(i + 1), D.rank_at(i)]))
    return FiniteComplex(ring, lo, ranks, diffs)


# cohomology ------------------------------------------------------------------

@dataclass
class Cohomology:
    complex: FiniteComplex
    dims: dict       # degree -> dimension
    reps: dict       # degree -> list of cocycle vectors
    image: dict      # degree -> independent spanning vectors of im d

    def coords(self, i: int, v) -> list:
        """Coordinates of the class of the cocycle v in the basis reps[i]."""
        ring = self.complex.ring
        basis = self.image[i] + self.reps[i]
        if not basis:
            return []
        x = ring.coords(basis, list(v))
        return x[len(self.image[i]):]

    def as_dict(self) -> dict:
        ring = self.complex.ring
        return {"dims": {str(k): v for k, v in sorted(self.dims.items())},
                "reps": {str(k): [[ring.fmt(x) for x in r] for r in v] for k, v in sorted(self.reps.items())}}


def _independent(ring, vecs: list, start: list) -> list:
    """Greedy choice of vectors extending start while raising the rank."""
    chosen = []
    cur = list(start)
    r = ring.rank(cur) if cur else 0
    for v in vecs:
        trial = cur + [v]
        rt = ring.rank(trial)
        if rt > r:
            chosen.append(v)
            cur, r = trial, rt
    return chosen


def cohomology(C: FiniteComplex) -> Cohomology:
    ring = C.ring
    dims, reps, image = {}, {}, {}
    for i in range(C.lo, C.hi + 1):
        n = C.rank_at(i)
        dout = C.d(i)
        Z = ring.kernel(dout, n) if n else []
        din = C.d(i - 1)
        cols = [list(c) for c in zip(*din)] if din and din[0] else []
        B = _independent(ring, cols, [])
        H = _independent(ring, Z, B)
        dims[i], reps[i], image[i] = len(H), H, B
    return Cohomology(C, dims, reps, image)


def elementary_divisors(C: FiniteComplex) -> dict:
    """Per-differential pivot valuations (capped ring) or ranks (rationals)."""
    ring = C.ring
    out = {}
    for i in range(C.lo, C.hi):
        D = C.d(i)
        if isinstance(ring, CappedQp):
            out[i] = smith.elementary_valuations(ring.R, D) if D and D[0] else []
        else:
            out[i] = [0] * ring.rank(D)
    return out


def induced_map(HC: Cohomology, HD: Cohomology, mats, i: int, shift_by: int = 0) -> list:
    """Matrix of a cochain map on cohomology: H^i(C) -> H^{i+shift_by}(D)."""
    ring = HC.complex.ring
    cols = []
    for z in HC.reps[i]:
        w = ring.matmul(mats, [[x] for x in z])
        cols.append(HD.coords(i + shift_by, [r[0] for r in w]))
    nrow = HD.dims.get(i + shift_by, 0)
    return [[cols[j][r] for j in range(len(cols))] for r in range(nrow)]


# Selmer cone -----------------------------------------------------------------

SHIFTS = {"s23": 1, "intro": -1}


def selmer_cone(glob: FiniteComplex, res_maps: list, conds: list, convention: str = "s23") -> FiniteComplex:
    """cone(global (+) U_v -> (+) loc_v) shifted per convention; the map is res_v - i_v."""
    if convention not in SHIFTS:
        raise PreconditionError(f"unknown shift convention {convention!r}")
    if len(res_maps) != len(conds):
        raise DimensionMismatch("one local condition per restriction map")
    locs = [r.tgt for r in res_maps]
    Us = [c.src for c in conds]
    for C in [glob] + locs + Us:
        if C.lo < 0 or C.hi > 2:
            raise DegreeRange(f"input complexes must sit in degrees [0, 2], got [{C.lo}, {C.hi}]")
    for r, c in zip(res_maps, conds):
        if r.src is not glob or c.tgt is not r.tgt:
            raise DimensionMismatch("maps must run from the global complex and from U_v into loc_v")
    srcs = [glob] + Us
    S = direct_sum(srcs)
    T = direct_sum(locs)
    k = len(locs)
    layout = [[(1, res_maps[v])] + [(-1, conds[v]) if j == v else None for j in range(k)] for v in range(k)]
    F = sum_map((locs, srcs), S, T, layout)
    return shift(cone(F), SHIFTS[convention])


# dual numbers: Bockstein and heights ------------------------------------------

@dataclass
class DualComplex:
    """A complex over E[X]/(X^2) with differential d0 + X h."""

    ring: object
    lo: int
    ranks: list
    d0: list
    h: list

    def __post_init__(self):
        ring = self.ring
        self.reduction = FiniteComplex(ring, self.lo, list(self.ranks), self.d0, check=False)
        self.h = [ring.mat(H, self.ranks[k + 1], self.ranks[k]) for k, H in enumerate(self.h)]
        if len(self.h) != len(self.reduction.diffs):
            raise DimensionMismatch("h needs one matrix per differential")
        for k in range(len(self.h) - 1):
            d0d0 = ring.matmul(self.reduction.diffs[k + 1], self.reduction.diffs[k])
            anti = _madd(ring, ring.matmul(self.reduction.diffs[k + 1], self.h[k]),
                         ring.matmul(self.h[k + 1], self.reduction.diffs[k]))
            if not ring.is_zero(d0d0) or not ring.is_zero(anti):
                raise NotSquareZero(f"(d0 + X h)^2 != 0 at degree {self.lo + k}")

    def h_at(self, i: int):
        if self.lo <= i < self.lo + len(self.h):
            return self.h[i - self.lo]
        return self.ring.zeros(self.reduction.rank_at(i + 1), self.reduction.rank_at(i))

    def total(self) -> FiniteComplex:
        """The underlying E-complex on a + X b: (a, b) -> (d0 a, h a + d0 b)."""
        ring = self.ring
        C = self.reduction
        diffs = []
        for i in range(C.lo, C.hi):
            n0, n1 = C.rank_at(i), C.rank_at(i + 1)
            diffs.append(_blocks(ring, [[C.d(i), None], [self.h_at(i), C.d(i)]], [n1, n1], [n0, n0]))
        return FiniteComplex(ring, C.lo, [2 * r for r in C.ranks], diffs, check=False)


@dataclass
class BocksteinMap:
    degree: int
    matrix: list
    source: Cohomology
    target: Cohomology


def bockstein(A: DualComplex, H: Cohomology | None = None) -> dict:
    """beta: H^i(C_E) -> H^{i+1}(C_E) by lift, apply d0 + X h, reduce."""
    ring = A.ring
    C = A.reduction
    H = H or cohomology(C)
    T = A.total()
    out = {}
    for i in range(C.lo, C.hi):
        n = C.rank_at(i)
        cols = []
        for z in H.reps[i]:
            lift = list(z) + [ring.scalar(0)] * n
            img = ring.matmul(T.d(i), [[x] for x in lift])
            img = [r[0] for r in img]
            m = C.rank_at(i + 1)
            head, tail = img[:m], img[m:]
            if not ring.is_zero([head]):
                raise PreconditionError("representative is not a cocycle")
            cols.append(H.coords(i + 1, tail))
        nrow = H.dims.get(i + 1, 0)
        out[i] = BocksteinMap(i, [[cols[j][r] for j in range(len(cols))] for r in range(nrow)], H, H)
    return out


def height_pair(x, y, beta, pairing):
    """<x, y> = pairing(beta x, y) = (beta x)^T P y."""
    x, y = list(x), list(y)
    if not beta:
        return 0
    if len(beta[0]) != len(x) or len(pairing) != len(beta) or (pairing and len(pairing[0]) != len(y)):
        raise DimensionMismatch("shapes of x, y, beta and the pairing do not match")
    bx = [sum((b * xi for b, xi in zip(row, x)), 0) for row in beta]
    return sum((bx[r] * pairing[r][c] * y[c] for r in range(len(bx)) for c in range(len(y))), 0)


def height_gram(beta, pairing) -> list:
    """Gram matrix G[i][j] = <e_i, e_j> = (beta^T P)[i][j]."""
    if not beta:
        return []
    n, m = len(beta[0]), len(pairing[0]) if pairing else 0
    return [[height_pair([int(k == i) for k in range(n)], [int(k == j) for k in range(m)], beta, pairing)
             for j in range(m)] for i in range(n)]


def complex_from_json(obj: dict, p: int = 5, N: int = 14, ntol: int | None = None):
    """Parse {range, ranks, diffs, ring} (plus h for the dual ring)."""
    tag = obj.get("ring", "rationals")
    lo = int(obj["range"][0])
    ranks = [int(r) for r in obj["ranks"]]
    if lo + len(ranks) - 1 != int(obj["range"][1]):
        raise DimensionMismatch("range and ranks disagree")
    conv = lambda D: [[Fraction(str(x)) for x in r] for r in D]
    if tag == "dual":
        base = make_ring(obj.get("base", "rationals"), p, N, ntol)
        return DualComplex(base, lo, ranks, [conv(D) for D in obj["diffs"]], [conv(D) for D in obj["h"]])
    return FiniteComplex(make_ring(tag, p, N, ntol), lo, ranks, [conv(D) for D in obj["diffs"]])
