"""Cup products on Herr complexes and the duality pairing.

Classes are paired into H^2 of R(x|x|), which is identified with Q_p by
the residue map  x e -> -res(x dt) / log(1+p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import inf

from .errors import NotStabilized, PreconditionError
from .herr import (
    CohClass,
    cocycle_alpha,
    cocycle_beta,
    cohomology_basis,
    cohomology_dims,
    gamma_module,
    phi_module,
)
from .padic import PadicScalar, log_unit, vp_frac
from .phigamma import Character, PhiGammaModule, chi, dual_twist, mk_rank1, tensor
from .series import LaurentSeries, Window, make_t, residue_dt


def _tensor_elem(x, y) -> tuple:
    return tuple(a * b for a in x for b in y)


def _add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _neg(u):
    return tuple(-a for a in u)


def cup(a: CohClass, b: CohClass) -> CohClass:
    """Cup product of representatives, landing in the tensor product module."""
    i, j = a.degree, b.degree
    if i + j > 2:
        raise PreconditionError(f"cup of degrees {i} and {j} leaves the complex")
    T = tensor(a.module, b.module)
    B = b.module
    if i == 0 and j == 0:
        rep = (_tensor_elem(a.rep[0], b.rep[0]),)
    elif i == 0 and j == 1:
        rep = (_tensor_elem(a.rep[0], b.rep[0]), _tensor_elem(a.rep[0], b.rep[1]))
    elif i == 1 and j == 0:
        rep = (_tensor_elem(a.rep[0], b.rep[0]), _tensor_elem(a.rep[1], b.rep[0]))
    elif i == 1 and j == 1:
        x1, x2 = a.rep
        y1, y2 = b.rep
        rep = (_add(_tensor_elem(x2, gamma_module(B, y1)), _neg(_tensor_elem(x1, phi_module(B, y2)))),)
    else:
        rep = (_tensor_elem(a.rep[0], b.rep[0]),)
    return CohClass(i + j, rep, min(a.residual_valuation, b.residual_valuation), T)


def _cone_parts(c: CohClass, zero):
    """(x_{i-1}, x_i) in the cone of phi-1 on the gamma-complex."""
    if c.degree == 0:
        return (None, c.rep[0])
    if c.degree == 1:
        return (c.rep[0], c.rep[1])
    return (c.rep[0], None)


def derived_cup(a: CohClass, b: CohClass) -> CohClass:
    """Cup product through the total-complex formula.

    With gamma-degrees deg(x_k) = k, the gamma-cup is x_k (x) gamma^k(y_l)
    and vanishes when k + l > 1.
    """
    i, j = a.degree, b.degree
    if i + j > 2:
        raise PreconditionError(f"cup of degrees {i} and {j} leaves the complex")
    T = tensor(a.module, b.module)
    B = b.module
    xa = _cone_parts(a, None)
    yb = _cone_parts(b, None)
    # gamma-degree of x_{i-1}, x_i and y_{j-1}, y_j
    ka = (i - 1, i)
    kb = (j - 1, j)

    def gcup(x, kx, y, ky):
        if x is None or y is None or kx < 0 or ky < 0 or kx + ky > 1:
            return None
        return _tensor_elem(x, gamma_module(B, y) if kx == 1 else y)

    def phi_y(y):
        return None if y is None else phi_module(B, y)

    t1 = gcup(xa[1], ka[1], yb[0], kb[0])
    t2 = gcup(xa[0], ka[0], phi_y(yb[1]), kb[1])
    first = None
    for t, sgn in ((t1, 1), (t2, (-1) ** j)):
        if t is None:
            continue
        t = t if sgn == 1 else _neg(t)
        first = t if first is None else _add(first, t)
    second = gcup(xa[1], ka[1], yb[1], kb[1])
    d = i + j
    zero = _zero_elem(T, a)
    if d == 0:
        rep = (second,)
    elif d == 1:
        rep = (first if first is not None else zero, second if second is not None else zero)
    else:
        rep = (first if first is not None else zero,)
    return CohClass(d, rep, min(a.residual_valuation, b.residual_valuation), T)


def _zero_elem(T: PhiGammaModule, a: CohClass):
    x = a.rep[0][0]
    return tuple(LaurentSeries.zero(x.p, x.prec, x.xprec) for _ in range(T.rank))


def contract(c: CohClass, D: PhiGammaModule) -> CohClass:
    """Evaluate D (x) D*(chi) -> R(chi) on a class in the tensor module."""
    d = D.rank
    out = []
    for e in c.rep:
        acc = None
        for k in range(d):
            x = e[k * d + k]
            acc = x if acc is None else acc + x
        out.append((acc,))
    return CohClass(c.degree, tuple(out), c.residual_valuation, mk_rank1(chi(D.p), D.win))


def inv_brauer(c: CohClass) -> PadicScalar:
    """-res(x dt) / log(1+p) on H^2 of R(x|x|)."""
    if c.degree != 2:
        raise PreconditionError("inv is defined on degree-2 classes")
    M = c.module
    if M.rank != 1 or (M.chars and (M.chars[0].m, M.chars[0].dp) != (1, 1)):
        raise PreconditionError("inv needs a class of R(x|x|)")
    x = c.rep[0][0]
    lam = log_unit(PadicScalar(M.p, 1 + M.p), x.prec + 1)
    return -residue_dt(x) / lam


def _trim(c: CohClass, K: int) -> CohClass:
    """Drop X-degrees >= K (and the p-denominators they carried)."""
    rep = tuple(tuple(x.with_prec(xprec=K).compact() if x.xprec > K else x for x in e) for e in c.rep)
    return CohClass(c.degree, rep, c.residual_valuation, c.module, c.class_prec)


def _pole(c: CohClass) -> int:
    return max(x.pole_bound for e in c.rep for x in e)


def pair(a: CohClass, b: CohClass, D: PhiGammaModule | None = None) -> PadicScalar:
    """<a, b> = inv(cup(a, b)) for a in H^i(D), b in H^{2-i}(D*(chi)).

    Only X-degrees below the other factor's pole order reach the residue,
    so both sides are cut there first; this keeps high-degree denominators
    (such as those of t) from eating precision.
    """
    D = D or a.module
    cps = [c.class_prec for c in (a, b) if c.class_prec is not None]
    a, b = _trim(a, _pole(b) + 1), _trim(b, _pole(a) + 1)
    x = inv_brauer(contract(cup(a, b), D))
    if cps:
        # a class known only up to p^k-small phantom classes moves inv by p^(k-1)
        x = x.with_prec(min(x.prec, min(cps) - 1))
    return x


# explicit bases for D_m and its dual -----------------------------------------

@lru_cache(maxsize=16)
def _alpha(m: int, win: Window) -> CohClass:
    return cocycle_alpha(m, win)


@lru_cache(maxsize=16)
def _beta(m: int, win: Window) -> CohClass:
    return cocycle_beta(m, win)


def dual_h1_basis(m: int, win: Window) -> list:
    """log(1+p) t^{m-1} in the phi- resp. gamma-slot: a basis of H^1 of R(x^{1-m})."""
    p = win.p
    D = mk_rank1(Character(p, 1 - m, Fraction(p) ** (1 - m)), win)
    # t and log(1+p) are exact: carry enough digits to absorb the denominators of t^(m-1)
    depth = max(vp_frac(Fraction(k), p) for k in range(1, win.M + 1))
    guard = win.N + 2 + 2 * (m - 1) * depth
    lam = log_unit(PadicScalar(p, 1 + p), guard)
    t = make_t(win, guard)
    u = t ** (m - 1) if m > 1 else t.const(1)
    u = u.scale(lam)
    zero = LaurentSeries.zero(p, u.prec, u.xprec)
    return [CohClass(1, ((u,), (zero,)), win.N, D), CohClass(1, ((zero,), (u,)), win.N, D)]


def dm_gram(m: int, win: Window) -> list:
    """Pairings of (alpha_m, beta_m) against the dual basis."""
    basis = dual_h1_basis(m, win)
    return [[pair(c, u) for u in basis] for c in (_alpha(m, win), _beta(m, win))]


def dm_pairing_row(m: int, rep, win: Window, class_prec: int | None = None) -> list:
    from .phigamma import d_m
    c = CohClass(1, rep, win.N, mk_rank1(d_m(win.p, m), win), class_prec)
    return [pair(c, u) for u in dual_h1_basis(m, win)]


# duality matrices -------------------------------------------------------------

@dataclass
class PairingMatrix:
    i: int
    basis_left: list
    basis_right: list
    entries: list
    det_valuation: float

    @property
    def dims(self) -> tuple:
        return (len(self.basis_left), len(self.basis_right))

    def as_dict(self) -> dict:
        dv = self.det_valuation
        return {"i": self.i, "dims": list(self.dims),
                "entries": [[str(x) for x in row] for row in self.entries],
                "det_valuation": "inf" if dv == inf else int(dv)}


def _det_valuation(E) -> float:
    n = len(E)
    if n == 0:
        return 0
    if len(E[0]) != n:
        return inf
    from .herr import frac_det
    prec = min((x.prec for row in E for x in row if x.prec is not None), default=None)
    det = frac_det([[x.lift() for x in row] for row in E])
    if det == 0:
        return inf
    v = vp_frac(det, E[0][0].p)
    if prec is not None and v >= prec:
        return inf
    return v


def _is_dm(ch: Character) -> bool:
    return ch.m >= 1 and ch.dp == Fraction(ch.p) ** (ch.m - 1)


def class_basis(D: PhiGammaModule, deg: int, win: Window) -> list:
    """Cocycles spanning H^deg(D); explicit formulas for rank-1 pieces when known."""
    if D.chars is not None and D.rank == 1:
        ch = D.chars[0]
        p = D.p
        if deg == 1 and _is_dm(ch):
            return [_alpha(ch.m, win), _beta(ch.m, win)]
        if deg == 1 and ch.m <= 0 and ch.dp == Fraction(p) ** ch.m:
            return dual_h1_basis(1 - ch.m, win)
        if deg == 0 and ch.m <= 0 and ch.dp == Fraction(p) ** ch.m:
            t = make_t(win)
            k = -ch.m
            x = t ** k if k else t.const(1)
            return [CohClass(0, ((x,),), win.N, D)]
        if deg == 2 and _is_dm(ch):
            from .herr import _del_power
            x = _del_power(LaurentSeries.monomial(p, -1, win.N, win.M), ch.m - 1)
            return [CohClass(2, ((x,),), win.N, D)]
    return cohomology_basis(D, deg, win)


def duality_matrix(D: PhiGammaModule, i: int, win: Window | None = None) -> PairingMatrix:
    """Matrix of <H^i(D), H^{2-i}(D*(chi))> in explicit bases."""
    win = win or D.win
    if i not in (0, 1, 2):
        raise PreconditionError("degree must be 0, 1 or 2")
    Dd = dual_twist(D)
    for mod in (D, Dd):
        rep = cohomology_dims(mod, win)
        if not rep.stabilized:
            raise NotStabilized(f"cohomology of {mod.name} did not stabilize")
    left = class_basis(D, i, win)
    right = class_basis(Dd, 2 - i, win)
    entries = [[pair(a, b, D) for b in right] for a in left]
    return PairingMatrix(i, left, right, entries, _det_valuation(entries))
