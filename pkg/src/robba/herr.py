"""Herr complexes of (phi, Gamma)-modules at finite precision.

The complex  C0 -> C1 -> C2  with
    d0 x     = ((phi-1)x, (gamma_0-1)x)
    d1 (y,z) = (gamma_0-1)y - (phi-1)z
is realised on a window of Laurent series: C0 holds poles up to order L,
C1 = (poles up to the phi pole cap) + (poles up to L), C2 = poles up to
the cap, all truncated mod X^M and with coefficients in Z/p^N.  Everything
is restricted to Delta-invariants through the averaging projector.

A single window has boundary effects (cocycles near the truncation that
are not coboundaries only because their primitive falls outside).  The
dimension of H^i is therefore measured as the rank of the map from
H^i(window) into H^i(larger window), whose pole bound is deeper by
about N.  Both windows are exact subcomplexes, so the map is
a chain map and its image only sees classes that survive enlargement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import NotStabilized, PreconditionError, WindowOverflow
from .padic import _teich_int, vp_frac
from .phigamma import PhiGammaModule
from .series import Window, gamma_poly, gamma_unit_inverse, mul_mod, phi_inf_inverse
from .smith import Ring, eliminate, kernel, rank

MIN_M = 40
MAX_ROUNDS = 4


# single-variable operators on a window -----------------------------------

def pole_cap(p: int, L: int, N: int) -> int:
    return p * L + (p - 1) * (N + 1) + p


@lru_cache(maxsize=32)
def _phi_matrix(p: int, L: int, M: int, N: int, Lw: int) -> np.ndarray:
    """phi on degrees [-L, M) into degrees [-Lw, M)."""
    R = Ring(p, N)
    mod = R.mod
    nf, nd = Lw + M, L + M
    out = [[0] * nd for _ in range(nf)]
    g = list(gamma_poly(p, p, M, N))
    cur = [1] + [0] * (M - 1)
    for k in range(M):
        col = L + k
        for j, c in enumerate(cur):
            if c:
                out[Lw + j][col] = c
        cur = mul_mod(cur, g, M, mod)
    for k in range(1, L + 1):
        r = phi_inf_inverse(p, k, N)
        for j, c in enumerate(r):
            if c % mod:
                d = -p * k - j
                if d < -Lw:
                    raise WindowOverflow(f"phi(X^-{k}) reaches pole order {-d} > {Lw}")
                out[Lw + d][L - k] = c % mod
    return R.asarray(out)


@lru_cache(maxsize=64)
def _gamma_matrix(p: int, c: int, Lw: int, M: int, N: int) -> np.ndarray:
    """gamma_c on degrees [-Lw, M); c an integer representative of the unit."""
    R = Ring(p, N)
    mod = R.mod
    nf = Lw + M
    out = [[0] * nf for _ in range(nf)]
    g = list(gamma_poly(p, c, M, N))
    cur = [1] + [0] * (M - 1)
    for k in range(M):
        for j, x in enumerate(cur):
            if x:
                out[Lw + j][Lw + k] = x
        cur = mul_mod(cur, g, M, mod)
    if Lw:
        hinv = gamma_unit_inverse(p, c, nf, N)
        cur = [1] + [0] * (nf - 1)
        for k in range(1, Lw + 1):
            cur = mul_mod(cur, hinv, nf, mod)
            # coefficient j of (X/g)^k sits in degree j - k
            for j in range(0, M + k):
                x = cur[j]
                if x:
                    out[Lw + j - k][Lw - k] = x
    return R.asarray(out)


def _teich_rep(p: int, a: int, N: int, n: int) -> int:
    return _teich_int(p, a, N + n + 2)


@lru_cache(maxsize=64)
def _delta_projector(p: int, m: int, Lw: int, M: int, N: int) -> np.ndarray:
    """(1/(p-1)) sum_a omega(a)^m gamma_omega(a) on degrees [-Lw, M)."""
    R = Ring(p, N)
    nf = Lw + M
    acc = R.zeros((nf, nf))
    for a in range(1, p):
        w = _teich_rep(p, a, N, nf)
        G = _gamma_matrix(p, w, Lw, M, N)
        acc = (acc + R.mulmod(G, pow(w, m % (p - 1), R.mod))) % R.mod
    return R.mulmod(acc, pow(p - 1, -1, R.mod))


def _invariant_columns(p: int, m: int, lo: int, hi: int) -> list:
    """Degrees k in [lo, hi) whose monomial survives the projector (leading term X^k)."""
    return [k for k in range(lo, hi) if (k + m) % (p - 1) == 0]


def invariant_basis(p: int, m: int, L: int, Lw: int, M: int, N: int, full: bool) -> np.ndarray:
    """Unitriangular basis of the Delta-invariants (projector images of surviving monomials)."""
    P = _delta_projector(p, m, Lw, M, N)
    lo = -Lw if full else -L
    off = 0 if full else Lw - L
    cols = [k + Lw for k in _invariant_columns(p, m, lo, M)]
    return P[off:, :][:, cols]


# module complex -------------------------------------------------------------

@dataclass
class HerrComplex:
    module: PhiGammaModule
    p: int
    L: int
    M: int
    N: int
    Lw: int
    e_phi: int
    e_gamma: int
    d0: np.ndarray
    d1: np.ndarray
    B: list
    ring: Ring = field(repr=False)

    @property
    def nf(self) -> int:
        return self.Lw + self.M

    @property
    def nd(self) -> int:
        return self.L + self.M

    @property
    def rank(self) -> int:
        return self.module.rank

    def trust_bands(self) -> dict:
        return {"C0": [-self.L, self.M], "C1": [[-self.Lw, self.M], [-self.L, self.M]],
                "C2": [-self.Lw, self.M]}

    def coords(self, deg: int) -> list:
        """Labels (part, basis index, X-degree) of the coordinates of C^deg."""
        d = self.rank
        full = [("f", i, k) for i in range(d) for k in range(-self.Lw, self.M)]
        dom = [("d", i, k) for i in range(d) for k in range(-self.L, self.M)]
        return [dom, full + dom, full][deg]

    def composite_defect(self) -> int:
        prod = self.ring.matmul(self.d1, self.d0)
        nz = prod[prod != 0]
        if nz.size == 0:
            return self.N
        return min(self.ring.val(int(x)) for x in nz)


def _integral_matrix(A, p: int, R: Ring):
    """Scale a Fraction matrix to an integral one; returns (matrix mod p^N, exponent)."""
    e = 0
    for row in A:
        for x in row:
            if x:
                e = max(e, -int(vp_frac(x, p)))
    f = Fraction(p) ** e
    out = []
    for row in A:
        r = []
        for x in row:
            y = x * f
            r.append(y.numerator * pow(y.denominator, -1, R.mod) % R.mod)
        out.append(r)
    return out, e


def build_herr(M: PhiGammaModule, win: Window, L: int | None = None) -> HerrComplex:
    """Assemble d0, d1 and the Delta-invariant bases for the window."""
    p = M.p
    L = win.L if L is None else L
    if win.M < MIN_M:
        raise WindowOverflow(f"complex needs M >= {MIN_M} (got {win.M})")
    if win.M < p * win.L:
        raise WindowOverflow(f"complex needs M >= p*L (got M={win.M})")
    consts = M.constant_matrices()
    if consts is None:
        raise PreconditionError("the complex engine needs constant structure matrices")
    N, Mx = win.N, win.M
    R = Ring(p, N)
    mod = R.mod
    Lw = pole_cap(p, L, N)
    nf, nd, off = Lw + Mx, L + Mx, Lw - L
    d = M.rank
    Aphi, ephi = _integral_matrix(consts[0], p, R)
    Agam, egam = _integral_matrix(consts[1], p, R)
    one_phi, one_gam = p**ephi % mod, p**egam % mod

    Phi = _phi_matrix(p, L, Mx, N, Lw)
    Gam = _gamma_matrix(p, 1 + p, Lw, Mx, N)
    E = R.zeros((nf, nd))
    E[np.arange(nd) + off, np.arange(nd)] = 1

    A0 = R.zeros((d * nf, d * nd))   # phi - 1 : dom -> full
    G = R.zeros((d * nf, d * nf))    # gamma - 1 : full -> full
    for i in range(d):
        for j in range(d):
            blk = R.mulmod(Phi, Aphi[i][j]) if Aphi[i][j] else R.zeros((nf, nd))
            gbl = R.mulmod(Gam, Agam[i][j]) if Agam[i][j] else R.zeros((nf, nf))
            if i == j:
                blk = (blk - R.mulmod(E, one_phi)) % mod
                gbl = (gbl - R.mulmod(R.eye(nf), one_gam)) % mod
            A0[i * nf:(i + 1) * nf, j * nd:(j + 1) * nd] = blk
            G[i * nf:(i + 1) * nf, j * nf:(j + 1) * nf] = gbl
    rows_dom = np.concatenate([np.arange(nd) + off + i * nf for i in range(d)])
    Gd = G[np.ix_(rows_dom, rows_dom)]
    d0 = np.vstack([A0, Gd])
    d1 = np.hstack([G, (-A0) % mod])

    Bf = [invariant_basis(p, w, L, Lw, Mx, N, True) for w in M.weights]
    Bd = [invariant_basis(p, w, L, Lw, Mx, N, False) for w in M.weights]
    B0 = _block_diag(R, Bd)
    B2 = _block_diag(R, Bf)
    B1 = _block_diag(R, [B2, B0])
    return HerrComplex(M, p, L, Mx, N, Lw, ephi, egam, d0, d1, [B0, B1, B2], R)


def _block_diag(R: Ring, blocks) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = R.zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def _embed(H: HerrComplex, Hp: HerrComplex, deg: int, vecs: np.ndarray) -> np.ndarray:
    """Inclusion of the coordinates of H into those of the larger Hp."""
    dst = {t: i for i, t in enumerate(Hp.coords(deg))}
    idx = np.array([dst[t] for t in H.coords(deg)], dtype=np.int64)
    out = Hp.ring.zeros((len(dst), vecs.shape[1]))
    out[idx] = vecs
    return out


def comparison_depth(p: int, win: Window) -> int:
    """Pole bound of the comparison window.

    The spurious top-degree class of a window sits in its deepest pole band
    and its dual functional reaches about (p-1)N degrees back, so the larger
    window's pole cap must clear the smaller one's by at least that much.
    """
    return win.L + -(-(p - 1) * win.N // p) + 1


def stable_dims(M: PhiGammaModule, win: Window, L_big: int | None = None) -> tuple:
    """(h0, h1, h2) as ranks of H(window L) -> H(window 2L+1)."""
    H = build_herr(M, win)
    Hp = build_herr(M, win, L=comparison_depth(M.p, win) if L_big is None else L_big)
    R, ntol = H.ring, win.ntol
    Z = []
    for i, dmat in enumerate([H.d0, H.d1, None]):
        B = H.B[i]
        if dmat is None:
            Z.append(B)
            continue
        K = kernel(R, R.matmul(dmat, B), ntol)
        Z.append(R.matmul(B, K))
    images = [None, R.matmul(Hp.d0, Hp.B[0]), R.matmul(Hp.d1, Hp.B[1])]
    hs = []
    for i in range(3):
        z = _embed(H, Hp, i, Z[i])
        if images[i] is None:
            hs.append(rank(R, z, ntol))
        else:
            hs.append(rank(R, np.hstack([images[i], z]), ntol) - rank(R, images[i], ntol))
    return tuple(hs)


def cohomology_basis(M: PhiGammaModule, deg: int, win: Window | None = None) -> list:
    """Cocycles of the window whose classes span the stable image in H^deg."""
    win = win or M.win
    H = build_herr(M, win)
    Hp = build_herr(M, win, L=comparison_depth(M.p, win))
    R, ntol = H.ring, win.ntol
    B = H.B[deg]
    if deg < 2:
        B = R.matmul(B, kernel(R, R.matmul([H.d0, H.d1][deg], B), ntol))
    z = _embed(H, Hp, deg, B)
    if deg == 0:
        res = z
    else:
        img = R.matmul([Hp.d0, Hp.d1][deg - 1], Hp.B[deg - 1])
        el = eliminate(R, img, rhs=z)
        res = el.rows[el.rank(ntol):, :]
    chosen = []
    if res.shape[0] and res.shape[1]:
        er = eliminate(R, res)
        chosen = [er.perm[k] for k, v in enumerate(er.vals) if v < ntol]
    out = []
    for col in chosen:
        parts = _devectorize(H, deg, B[:, col])
        out.append(CohClass(deg, parts, ntol, M))
    return out


def _components(M: PhiGammaModule) -> list:
    """Index sets of the block decomposition of the structure matrices."""
    d = M.rank
    parent = list(range(d))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for A in (M.A_phi, M.A_gamma):
        for i in range(d):
            for j in range(d):
                if i != j and not A[i][j].is_zero():
                    parent[find(i)] = find(j)
    groups = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def submodule(M: PhiGammaModule, idx: list) -> PhiGammaModule:
    return PhiGammaModule(
        M.p, M.win,
        tuple(tuple(M.A_phi[i][j] for j in idx) for i in idx),
        tuple(tuple(M.A_gamma[i][j] for j in idx) for i in idx),
        tuple(M.weights[i] for i in idx), tuple(M.labels[i] for i in idx),
        None if M.chars is None else tuple(M.chars[i] for i in idx), M.name)


def dims_at(M: PhiGammaModule, win: Window) -> tuple:
    """Stable dims on one window, summed over the block decomposition."""
    tot = [0, 0, 0]
    for idx in _components(M):
        h = stable_dims(submodule(M, idx), win)
        tot = [a + b for a, b in zip(tot, h)]
    return tuple(tot)


@dataclass
class CohReport:
    p: int
    h0: int
    h1: int
    h2: int
    stabilized: bool
    windows: list
    label: str = ""
    history: list = field(default_factory=list)

    @property
    def dims(self) -> tuple:
        return (self.h0, self.h1, self.h2)

    @property
    def euler_char(self) -> int:
        return self.h0 - self.h1 + self.h2

    def as_dict(self, key: str = "char") -> dict:
        return {"p": self.p, key: self.label, "h0": self.h0, "h1": self.h1, "h2": self.h2,
                "euler_char": self.euler_char, "stabilized": self.stabilized,
                "windows": [w.as_dict() for w in self.windows]}


_DIMS_CACHE: dict = {}


def cohomology_dims(M: PhiGammaModule, win: Window | None = None, rounds: int = MAX_ROUNDS,
                    strict: bool = False) -> CohReport:
    """Dimensions on growing windows; stabilized once three consecutive valid rounds agree."""
    win = win or M.win
    key = (M.chars, M.weights, win, rounds) if M.chars is not None else None
    if key is not None and key in _DIMS_CACHE:
        rep = _DIMS_CACHE[key]
        if strict and not rep.stabilized:
            raise NotStabilized(f"dimensions did not stabilize: {rep.history}")
        return rep
    history = []
    windows = []
    stabilized = False
    w = win
    for _ in range(rounds):
        windows.append(w)
        try:
            history.append(dims_at(M, w))
        except WindowOverflow:
            history.append(None)
        tail = history[-3:]
        if len(tail) == 3 and None not in tail and tail[0] == tail[1] == tail[2]:
            stabilized = True
            break
        w = w.grown()
    valid = [h for h in history if h is not None]
    best = valid[-1] if valid else (0, 0, 0)
    rep = CohReport(M.p, *best, stabilized, windows, M.name, history)
    if key is not None:
        _DIMS_CACHE[key] = rep
    if strict and not stabilized:
        raise NotStabilized(f"dimensions did not stabilize: {history}")
    return rep


# module elements and classes ------------------------------------------------
#
# An element of a rank-d module is a tuple of d LaurentSeries (coordinates
# in the module basis).  A degree-1 cochain is a pair (y, z) of elements:
# y is the phi-component and z the gamma-component.

def _as_elem(M: PhiGammaModule, v):
    from .series import LaurentSeries
    if isinstance(v, LaurentSeries):
        v = (v,)
    v = tuple(v)
    if len(v) != M.rank:
        raise PreconditionError(f"element has {len(v)} coordinates, module rank is {M.rank}")
    return v


def _apply_matrix(A, v):
    out = []
    for row in A:
        acc = None
        for a, x in zip(row, v):
            if a.is_zero():
                continue
            term = x * a
            acc = term if acc is None else acc + term
        out.append(acc if acc is not None else v[0] * 0)
    return tuple(out)


def phi_module(M: PhiGammaModule, v):
    from .series import apply_phi
    return _apply_matrix(M.A_phi, [apply_phi(x) for x in _as_elem(M, v)])


def gamma_module(M: PhiGammaModule, v):
    from .series import apply_gamma
    return _apply_matrix(M.A_gamma, [apply_gamma(x, 1 + M.p) for x in _as_elem(M, v)])


def psi_module(M: PhiGammaModule, v):
    """psi on D: psi(A_phi^{-1}... ) specialised to constant diagonal phi-matrices."""
    from .series import apply_psi
    consts = M.constant_matrices()
    if consts is None or any(consts[0][i][j] for i in range(M.rank) for j in range(M.rank) if i != j):
        raise PreconditionError("psi is implemented for diagonal constant phi-matrices")
    return tuple(apply_psi(x).scale(1 / consts[0][i][i]) for i, x in enumerate(_as_elem(M, v)))


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def d0_apply(M: PhiGammaModule, x):
    x = _as_elem(M, x)
    return (_sub(phi_module(M, x), x), _sub(gamma_module(M, x), x))


def d1_apply(M: PhiGammaModule, y, z):
    y, z = _as_elem(M, y), _as_elem(M, z)
    return _sub(_sub(gamma_module(M, y), y), _sub(phi_module(M, z), z))


def elem_valuation(v) -> int:
    return min(x.valuation() for x in v)


@dataclass
class CohClass:
    degree: int
    rep: tuple           # degree 0/2: (elem,); degree 1: (y, z)
    residual_valuation: int
    module: PhiGammaModule = field(repr=False)
    # digits to which the representative pins down the intended class (None: all of them)
    class_prec: int | None = None

    def scaled(self, c) -> "CohClass":
        rep = tuple(tuple(x.scale(c) for x in e) for e in self.rep)
        cp = self.class_prec
        if cp is not None and _as_frac(c) != 0:
            cp += int(vp_frac(_as_frac(c), self.module.p))
        return CohClass(self.degree, rep, self.residual_valuation, self.module, cp)

    def __add__(self, other: "CohClass") -> "CohClass":
        rep = tuple(tuple(a + b for a, b in zip(e, f)) for e, f in zip(self.rep, other.rep))
        cps = [c for c in (self.class_prec, other.class_prec) if c is not None]
        return CohClass(self.degree, rep, min(self.residual_valuation, other.residual_valuation),
                        self.module, min(cps) if cps else None)


@dataclass
class Coboundary:
    degree: int
    primitive: tuple
    residual_valuation: int


def cocycle_defect(c: CohClass) -> int:
    """Valuation of d(c) (N-capped); degree 2 cochains are always cocycles."""
    M = c.module
    if c.degree == 0:
        y, z = d0_apply(M, c.rep[0])
        return min(elem_valuation(y), elem_valuation(z))
    if c.degree == 1:
        return elem_valuation(d1_apply(M, *c.rep))
    return min(x.prec for x in c.rep[0])


def _vectorize(H: HerrComplex, deg: int, parts) -> np.ndarray:
    """Window coordinates of a cochain given as a list of elements (one per part)."""
    R = H.ring
    labels = H.coords(deg)
    index = {t: i for i, t in enumerate(labels)}
    out = [0] * len(labels)
    kinds = {0: ["d"], 1: ["f", "d"], 2: ["f"]}[deg]
    for kind, elem in zip(kinds, parts):
        for i, x in enumerate(elem):
            if x.s > 0:
                raise PreconditionError("cochain has p-adic denominators; rescale it first")
            for k, n in x.items():
                if k >= H.M:
                    break
                key = (kind, i, k)
                if key not in index:
                    raise WindowOverflow(f"pole of order {-k} outside the window band")
                out[index[key]] = n
    return R.asarray(out)


def _devectorize(H: HerrComplex, deg: int, vec) -> tuple:
    from .series import LaurentSeries
    labels = H.coords(deg)
    kinds = {0: ["d"], 1: ["f", "d"], 2: ["f"]}[deg]
    parts = []
    for kind in kinds:
        elem = []
        for i in range(H.rank):
            coeffs = {}
            for t, x in zip(labels, vec):
                if t[0] == kind and t[1] == i and int(x):
                    coeffs[t[2]] = int(x)
            lo = min(list(coeffs) + [0])
            num = [0] * (H.M - lo)
            for k, x in coeffs.items():
                num[k - lo] = x
            elem.append(LaurentSeries(H.p, lo, num, 0, H.N, H.M))
        parts.append(tuple(elem))
    return tuple(parts)


def _max_s(parts) -> int:
    return max(x.s for e in parts for x in e)


def class_reduce(c: CohClass, win: Window | None = None):
    """Decide whether c is a coboundary on the window; returns CohClass or Coboundary."""
    from .errors import Inconclusive
    M = c.module
    win = win or M.win
    parts = c.rep
    s = _max_s(parts)
    if s:
        parts = tuple(tuple(x.scale(M.p ** s) for x in e) for e in parts)
    prec = min(x.prec for e in parts for x in e)
    xprec = min(x.xprec for e in parts for x in e)
    N = min(win.N, prec)
    Mx = min(win.M, xprec)
    if N < 4 or Mx < MIN_M:
        raise WindowOverflow(f"cochain precision too small to decide (N={N}, M={Mx})")
    poles = max(max(x.pole_bound for e in parts for x in e), 1)
    L = max(win.L, poles)
    w = Window(min(L, Mx // M.p), Mx, N, M.p, None if win.tol is None else min(win.tol, N))
    H = build_herr(M, w, L=max(comparison_depth(M.p, w), L))
    R = H.ring
    ntol = w.ntol
    deg = c.degree
    if deg == 0:
        # no coboundaries in degree 0: the class is zero iff the cocycle is
        v = min(x.valuation() for x in parts[0])
        return Coboundary(0, parts, v) if v >= N else CohClass(0, c.rep, v, M)
    v = _vectorize(H, deg, parts)
    P = _projector_for(H, deg)
    v = R.matmul(P, v.reshape(-1, 1)).reshape(-1)
    D = R.matmul([H.d0, H.d1][deg - 1], H.B[deg - 1])
    y, resid = _solve(R, D, v, ntol)
    if resid >= N:
        x = R.matmul(H.B[deg - 1], y.reshape(-1, 1)).reshape(-1)
        prim = _devectorize(H, deg - 1, x)
        if s:
            prim = tuple(tuple(e.scale(Fraction(1, M.p ** s)) for e in part) for part in prim)
        return Coboundary(deg, prim, resid)
    if resid >= ntol:
        raise Inconclusive(f"coboundary residual {resid} lies in the gray zone [{ntol}, {N})")
    return CohClass(deg, c.rep, resid, M)


def _solve(R, D, v, ntol):
    from .smith import solve
    return solve(R, D, v, ntol)


def _projector_for(H: HerrComplex, deg: int) -> np.ndarray:
    """Delta-projector on the coordinates of C^deg."""
    R = H.ring
    blocks = []
    Pf = [_delta_projector(H.p, w, H.Lw, H.M, H.N) for w in H.module.weights]
    off = H.Lw - H.L
    Pd = [P[off:, off:] for P in Pf]
    if deg == 1:
        blocks = Pf + Pd
    elif deg == 2:
        blocks = Pf
    else:
        blocks = Pd
    return _block_diag(R, blocks)


# explicit cocycles on D_m ---------------------------------------------------

def _dm_module(m: int, win: Window) -> PhiGammaModule:
    from .phigamma import d_m, mk_rank1
    return mk_rank1(d_m(win.p, m), win)


def _del_power(f, k: int):
    from .series import derivative_del
    for _ in range(k):
        f = derivative_del(f)
    return f


def _alpha_a(win: Window):
    """Solve (1 - phi) a = (1 - chi(gamma) gamma)(1/X + 1/2) with a(0) = 0."""
    from .series import LaurentSeries, apply_gamma, EXACT_TAIL
    p, N, Mx = win.p, win.N, win.M
    f = LaurentSeries.from_coeffs(p, {-1: 1, 0: Fraction(1, 2)}, N, Mx, tail_val=EXACT_TAIL)
    g = f - apply_gamma(f, 1 + p).scale(1 + p)
    if g.pole_bound:
        raise PreconditionError("right-hand side unexpectedly has a polar part")
    R = Ring(p, N)
    mod = R.mod
    Phi = _phi_matrix(p, 0, Mx, N, 0).tolist()
    gc = [g.coeff(k).residue(N) if g.coeff(k).valuation() >= 0 else None for k in range(Mx)]
    if any(x is None for x in gc):
        raise PreconditionError("right-hand side is not integral")
    a = [0] * Mx
    # (1 - phi) is triangular on X^k R^+ with diagonal 1 - p^k, a unit for k >= 1
    for k in range(1, Mx):
        acc = gc[k] + sum(Phi[k][j] * a[j] for j in range(1, k))
        a[k] = acc * pow(1 - p**k, -1, mod) % mod
    return f, LaurentSeries(p, 0, a, 0, N, Mx)


def _beta_b(win: Window):
    """Solve (1 - phi)(1/X) = (1 - chi(gamma) gamma) b on the window."""
    from .series import LaurentSeries, apply_phi
    from .smith import solve
    p, N, Mx = win.p, win.N, win.M
    inv_x = LaurentSeries.monomial(p, -1, N, Mx)
    h = inv_x - apply_phi(inv_x)
    Lw = pole_cap(p, win.L, N)
    if h.pole_bound > Lw:
        raise WindowOverflow("phi(1/X) does not fit the window")
    R = Ring(p, N)
    G = _gamma_matrix(p, 1 + p, Lw, Mx, N)
    T = (R.eye(Lw + Mx) - R.mulmod(G, 1 + p)) % R.mod
    vec = [0] * (Lw + Mx)
    for k, n in h.items():
        if k < Mx:
            vec[k + Lw] = n
    x, resid, loss = solve(R, T, vec, win.ntol, with_loss=True)
    if resid < win.ntol:
        from .errors import PrecisionLoss
        raise PrecisionLoss(f"(1 - chi(gamma) gamma) b = (1 - phi)(1/X) unsolvable on the window ({resid})")
    # b solves the window equation mod p^N, but non-unit pivots leave its
    # top `loss` digits free: other solutions differ by near-kernel vectors
    return LaurentSeries(p, -Lw, [int(v) for v in x], 0, N, Mx), inv_x, loss


def cocycle_alpha(m: int, win: Window) -> CohClass:
    """The class alpha_m = del^{m-1}(1/X + 1/2, a) e_m in H^1(D_m)."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    f, a = _alpha_a(win)
    M = _dm_module(m, win)
    rep = ((_del_power(f, m - 1),), (_del_power(a, m - 1),))
    c = CohClass(1, rep, 0, M)
    c.residual_valuation = cocycle_defect(c)
    return c


def cocycle_beta(m: int, win: Window) -> CohClass:
    """The class beta_m = del^{m-1}(b, 1/X) e_m in H^1(D_m)."""
    if m < 1:
        raise PreconditionError("m must be >= 1")
    b, inv_x, loss = _beta_b(win)
    M = _dm_module(m, win)
    rep = ((_del_power(b, m - 1),), (_del_power(inv_x, m - 1),))
    c = CohClass(1, rep, 0, M, win.N - loss)
    c.residual_valuation = cocycle_defect(c)
    return c


def psi_fixed_check(m: int, win: Window):
    """(passes, defect): is del^{m-1}(1/X) e_m fixed by psi on D_m?"""
    from .series import LaurentSeries
    if m < 1 or m > 5:
        raise PreconditionError("psi_fixed_check supports 1 <= m <= 5")
    M = _dm_module(m, win)
    f = _del_power(LaurentSeries.monomial(win.p, -1, win.N, win.M), m - 1)
    return psi_check(M, (f,), win)


def psi_check(M: PhiGammaModule, v, win: Window):
    out = psi_module(M, v)
    d = min(a.defect(b.with_prec(xprec=a.xprec)) for a, b in zip(out, _as_elem(M, v)))
    return d >= win.ntol, d


# f/c decomposition and l-invariants ------------------------------------------

def fc_decompose(c: CohClass, win: Window | None = None) -> list:
    """Coordinates of c in the basis (cl alpha, cl beta) of each D_m summand."""
    from .errors import Inconclusive
    from .pairing import dm_pairing_row, dm_gram
    M = c.module
    win = win or M.win
    if M.chars is None:
        raise PreconditionError("fc_decompose needs a direct sum of D_m pieces")
    out = []
    for i, ch in enumerate(M.chars):
        if ch.dp != Fraction(M.p) ** (ch.m - 1) or ch.m < 1:
            raise PreconditionError(f"summand {i} is not of the form D_m")
        rep = tuple((e[i],) for e in c.rep)
        G = dm_gram(ch.m, win)
        v = dm_pairing_row(ch.m, rep, win, c.class_prec)
        det = G[0][0] * G[1][1] - G[0][1] * G[1][0]
        if det.is_zero():
            raise Inconclusive("pairing matrix is singular at this precision")
        x = (v[0] * G[1][1] - v[1] * G[1][0]) / det
        y = (v[1] * G[0][0] - v[0] * G[0][1]) / det
        out.append((x, y))
    return out


def ell_invariant(F, C, p: int, prec: int):
    """det(F C^{-1}) for the f- and c-coordinate matrices of a line in H^1."""
    from .errors import CProjectionSingular
    from .padic import PadicScalar
    precs = [x.prec for row in F + C for x in row if isinstance(x, PadicScalar) and x.prec is not None]
    F = [[_as_frac(x) for x in row] for row in F]
    C = [[_as_frac(x) for x in row] for row in C]
    if len(F) != len(C) or any(len(r) != len(F) for r in F + C):
        raise PreconditionError("f and c coordinate matrices must be square of equal size")
    dc = frac_det(C)
    if dc == 0:
        raise CProjectionSingular("c-projection of the line is not invertible")
    df = frac_det(F)
    if precs:
        # first-order error of det F / det C from entries known to p^P
        n = len(F)
        vmin = min((vp_frac(x, p) for row in F + C for x in row if x), default=0)
        pd = min(precs) + (n - 1) * vmin
        vc = vp_frac(dc, p)
        vf = vp_frac(df, p) if df else pd
        prec = int(min(prec, pd - vc, pd + vf - 2 * vc))
    return PadicScalar.of(p, df / dc, prec)


def _as_frac(x) -> Fraction:
    from .padic import PadicScalar
    return x.lift() if isinstance(x, PadicScalar) else Fraction(x)


def frac_det(A) -> Fraction:
    """Determinant of a small rational matrix by elimination."""
    A = [list(map(Fraction, r)) for r in A]
    n = len(A)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [a - f * b for a, b in zip(A[r], A[c])]
    return det
