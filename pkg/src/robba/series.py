"""Truncated Laurent series approximating elements of the Robba ring.

A :class:`LaurentSeries` stores coefficients ``num[i] / p**s`` for degrees
``lo + i`` below ``xprec``.  Every coefficient is known modulo ``p**prec``
(one absolute precision per series), and the unknown tail beyond ``xprec``
is assumed to have valuation at least ``tail_val``.

Polar parts live in the Robba ring, i.e. they are expansions valid on an
annulus next to the boundary.  For rational functions with poles inside the
open disc (such as ``1/((1+X)^p - 1)``) that means the expansion at
infinity: ``phi(X^-k)`` has pole order ``p*k`` and a tail of higher poles
whose coefficients decay p-adically.  Tails are cut once they vanish modulo
the working precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import NotInvertible, PreconditionError, WindowOverflow
from .padic import PadicScalar, _teich_int, vp_int


@dataclass(frozen=True)
class Window:
    """Finite approximation window: pole bound L, X-adic precision M, p-adic precision N."""

    L: int = 4
    M: int = 200
    N: int = 14
    p: int = 5
    tol: int | None = None  # overrides the default rank threshold ceil(N/2)

    def __post_init__(self):
        if self.L < 0 or self.M < 8 or self.N < 4:
            raise PreconditionError(f"window needs L>=0, M>=8, N>=4 (got {self})")
        if self.tol is not None and not 1 <= self.tol <= self.N:
            raise PreconditionError(f"ntol must lie in [1, N] (got {self.tol})")
        if self.M < self.p * self.L:
            raise PreconditionError(f"window needs M >= p*L (got M={self.M}, p*L={self.p * self.L})")

    @property
    def pole_cap(self) -> int:
        """Largest pole order a phi-image of a trusted input can reach before its tail vanishes."""
        return self.p * self.L + (self.p - 1) * (self.N + 1) + self.p

    @property
    def ntol(self) -> int:
        return self.tol if self.tol is not None else -(-self.N // 2)

    def grown(self) -> "Window":
        return Window(self.L, -(-3 * self.M // 2), self.N + 2, self.p, self.tol)

    def as_dict(self) -> dict:
        return {"L": self.L, "M": self.M, "N": self.N, "ntol": self.ntol}


# integer polynomial kernels --------------------------------------------

def _kron_mul(a: list, b: list, n: int) -> list:
    """Product of two non-negative integer coefficient lists, truncated to length n.

    Kronecker substitution: pack each list into one big integer and let the
    interpreter's integer multiplication do the convolution.
    """
    a = a[:n]
    b = b[:n]
    if not a or not b or n <= 0:
        return [0] * max(n, 0)
    ma, mb = max(a), max(b)
    if ma == 0 or mb == 0:
        return [0] * n
    nbytes = ((ma * mb * min(len(a), len(b))).bit_length() + 8) // 8
    A = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in a), "little")
    B = int.from_bytes(b"".join(x.to_bytes(nbytes, "little") for x in b), "little")
    raw = (A * B).to_bytes((len(a) + len(b)) * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") for i in range(n)]


def mul_mod(a: list, b: list, n: int, mod: int) -> list:
    return [x % mod for x in _kron_mul(a, b, n)]


def inv_unit(a: list, n: int, mod: int) -> list:
    """Inverse of a power series with unit constant term, modulo (X^n, mod)."""
    u = pow(a[0], -1, mod)
    b = [u] + [0] * (n - 1)
    # Newton iteration doubles the X-adic precision each step
    k = 1
    while k < n:
        k2 = min(2 * k, n)
        ab = mul_mod(a[:k2], b[:k2], k2, mod)
        corr = [(-x) % mod for x in ab]
        corr[0] = (corr[0] + 2) % mod
        b = mul_mod(b[:k2], corr, k2, mod) + [0] * (n - k2)
        k = k2
    return b[:n]


def binom_coeffs(c: int, n: int, p: int, prec: int) -> list:
    """Coefficients of (1+X)^c modulo (X^n, p^prec).

    c is an integer representative of a p-adic integer, correct modulo
    p^(prec + n).  Numerator and denominator are tracked as unit part and
    p-adic valuation, so the numbers never outgrow p^prec.
    """
    mod = p**prec
    out = [1 % mod]
    unit, vnum, vden = 1, 0, 0
    for j in range(1, n):
        x = c - j + 1
        if x == 0:
            return out + [0] * (n - j)
        while x % p == 0:
            x //= p
            vnum += 1
        y = j
        while y % p == 0:
            y //= p
            vden += 1
        unit = unit * (x % mod) * pow(y, -1, mod) % mod
        e = vnum - vden
        out.append(unit * p**e % mod if e < prec else 0)
    return out


@lru_cache(maxsize=256)
def gamma_poly(p: int, c: int, n: int, prec: int) -> tuple:
    """(1+X)^c - 1 modulo (X^n, p^prec) for c correct modulo p^(prec + n)."""
    out = binom_coeffs(c, n, p, prec)
    out[0] = 0
    return tuple(out)


@lru_cache(maxsize=256)
def phi_inf_inverse(p: int, k: int, prec: int) -> tuple:
    """Coefficients r_j of q(U)^(-k), where (1+X)^p - 1 = X^p q(1/X).

    Only the terms with v(r_j) < prec are returned (v(r_j) >= j/(p-1)).
    """
    mod = p**prec
    depth = (p - 1) * prec + 1
    q = [comb(p, i) % mod for i in range(p)]
    qi = inv_unit(q, depth, mod)
    out = [1] + [0] * (depth - 1)
    for _ in range(k):
        out = mul_mod(out, qi, depth, mod)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


# the series type ---------------------------------------------------------

EXACT_TAIL = 10**6  # tail_val of series whose unknown tail is known to vanish

class LaurentSeries:
    """Truncated Laurent series over Q_p (see module docstring)."""

    __slots__ = ("p", "lo", "num", "s", "prec", "xprec", "tail_val")

    def __init__(self, p, lo, num, s, prec, xprec, tail_val=0):
        self.p = p
        self.s = s
        self.prec = prec
        self.xprec = xprec
        self.tail_val = tail_val
        mod = p ** (prec + s) if prec + s > 0 else 1
        num = [x % mod for x in num]
        hi = xprec - lo
        if hi < len(num):
            num = num[:max(hi, 0)]
        # minimal pole bound: strip zero coefficients below degree 0
        start = 0
        while start < len(num) and lo + start < 0 and num[start] == 0:
            start += 1
        num = num[start:]
        lo += start
        if lo > 0:
            num = [0] * lo + num
            lo = 0
        if not num and lo < 0:
            lo = 0
        while num and num[-1] == 0 and lo + len(num) - 1 > 0:
            num.pop()
        self.lo = lo
        self.num = num

    # constructors ---------------------------------------------------
    @classmethod
    def from_coeffs(cls, p: int, coeffs: dict, prec: int, xprec: int, tail_val: int = 0):
        """Build from a {degree: int | Fraction | PadicScalar} mapping."""
        fr = {}
        for k, v in coeffs.items():
            if k >= xprec:
                continue
            if isinstance(v, PadicScalar):
                prec = min(prec, v.prec) if v.prec is not None else prec
                v = v.lift()
            fr[k] = Fraction(v)
        s = 0
        for v in fr.values():
            if v:
                s = max(s, -min(0, int(vp_int(v.numerator, p) - vp_int(v.denominator, p))))
        lo = min([k for k in fr if fr[k]] + [0])
        mod = p ** (prec + s)
        num = [0] * (max([k for k in fr] + [0]) - lo + 1)
        for k, v in fr.items():
            x = v * p**s
            den = x.denominator
            num[k - lo] = x.numerator * pow(den, -1, mod) % mod
        return cls(p, lo, num, s, prec, xprec, tail_val)

    @classmethod
    def zero(cls, p, prec, xprec):
        return cls(p, 0, [], 0, prec, xprec)

    @classmethod
    def monomial(cls, p, k, prec, xprec, coeff=1):
        """c X^k with a known-zero tail."""
        return cls.from_coeffs(p, {k: coeff}, prec, xprec, tail_val=EXACT_TAIL)

    @classmethod
    def one(cls, p, prec, xprec):
        return cls.monomial(p, 0, prec, xprec)

    @classmethod
    def X(cls, win: Window):
        return cls.monomial(win.p, 1, win.N, win.M)

    def like(self, lo, num, s=None, prec=None, xprec=None, tail_val=None):
        return LaurentSeries(self.p, lo, num, self.s if s is None else s,
                             self.prec if prec is None else prec,
                             self.xprec if xprec is None else xprec,
                             self.tail_val if tail_val is None else tail_val)

    # queries ----------------------------------------------------------
    @property
    def mod(self) -> int:
        return self.p ** (self.prec + self.s)

    def coeff(self, k: int) -> PadicScalar:
        if k >= self.xprec:
            raise PreconditionError(f"degree {k} is beyond the X-adic precision {self.xprec}")
        i = k - self.lo
        n = self.num[i] if 0 <= i < len(self.num) else 0
        return PadicScalar(self.p, n, -self.s, self.prec)

    def coeff_frac(self, k: int) -> Fraction:
        i = k - self.lo
        n = self.num[i] if 0 <= i < len(self.num) else 0
        return Fraction(self._signed(n), self.p**self.s)

    def _signed(self, n):
        mod = self.mod
        return n - mod if n > mod // 2 else n

    def degrees(self):
        return range(self.lo, self.lo + len(self.num))

    def items(self):
        for i, n in enumerate(self.num):
            if n:
                yield self.lo + i, n

    def order(self):
        """Lowest degree carrying a nonzero coefficient (None for 0)."""
        for k, _ in self.items():
            return k
        return None

    @property
    def pole_bound(self) -> int:
        o = self.order()
        return 0 if o is None or o >= 0 else -o

    def valuation(self) -> int:
        """Gauss valuation, capped at the absolute precision."""
        best = self.prec
        for _, n in self.items():
            best = min(best, vp_int(n, self.p) - self.s)
        return int(best)

    def polar_part(self) -> "LaurentSeries":
        k = -self.lo
        return self.like(self.lo, self.num[:max(k, 0)])

    def regular_part(self) -> "LaurentSeries":
        k = max(-self.lo, 0)
        return self.like(0, self.num[k:])

    def is_zero(self) -> bool:
        return not any(self.num)

    # precision plumbing --------------------------------------------------
    def with_prec(self, prec=None, xprec=None) -> "LaurentSeries":
        prec = self.prec if prec is None else min(prec, self.prec)
        xprec = self.xprec if xprec is None else min(xprec, self.xprec)
        return self.like(self.lo, list(self.num), prec=prec, xprec=xprec)

    def rescale(self, s: int) -> "LaurentSeries":
        """Same value with denominator exponent s >= self.s."""
        if s == self.s:
            return self
        f = self.p ** (s - self.s)
        return self.like(self.lo, [x * f for x in self.num], s=s)

    def compact(self) -> "LaurentSeries":
        """Drop superfluous powers of p from the common denominator."""
        s = self.s
        num = list(self.num)
        while s > 0 and all(x % self.p == 0 for x in num):
            num = [x // self.p for x in num]
            s -= 1
        return self.like(self.lo, num, s=s)

    def _aligned(self, other):
        if not isinstance(other, LaurentSeries):
            other = self.const(other)
        if other.p != self.p:
            raise PreconditionError("mixing series over different primes")
        s = max(self.s, other.s)
        return self.rescale(s), other.rescale(s)

    def const(self, c) -> "LaurentSeries":
        return LaurentSeries.from_coeffs(self.p, {0: c}, self.prec, self.xprec)

    # ring operations -------------------------------------------------
    def __add__(self, other):
        a, b = self._aligned(other)
        lo = min(a.lo, b.lo)
        n = max(a.lo + len(a.num), b.lo + len(b.num)) - lo
        num = [0] * n
        for i, x in enumerate(a.num):
            num[a.lo - lo + i] += x
        for i, x in enumerate(b.num):
            num[b.lo - lo + i] += x
        return LaurentSeries(self.p, lo, num, a.s, min(a.prec, b.prec), min(a.xprec, b.xprec),
                             min(a.tail_val, b.tail_val))

    __radd__ = __add__

    def __neg__(self):
        return self.like(self.lo, [-x for x in self.num])

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = self.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentSeries":
        """Multiply by a scalar (int, Fraction or PadicScalar)."""
        if isinstance(c, PadicScalar):
            prec = self.prec if c.prec is None else min(self.prec + c.valuation(), c.prec + self.valuation())
            if c.is_zero():
                return LaurentSeries(self.p, 0, [], 0, int(prec), self.xprec)
            c_frac = c.lift()
        else:
            c_frac = Fraction(c)
            prec = self.prec + (0 if c_frac == 0 else vp_int(c_frac.numerator, self.p)
                                - vp_int(c_frac.denominator, self.p))
            if c_frac == 0:
                return LaurentSeries(self.p, 0, [], 0, self.prec, self.xprec)
        prec = int(prec)
        v = int(vp_int(c_frac.numerator, self.p) - vp_int(c_frac.denominator, self.p))
        s = self.s + max(0, -v)
        unit = c_frac / Fraction(self.p) ** v
        mod = self.p ** (prec + s) if prec + s > 0 else 1
        u = unit.numerator * pow(unit.denominator, -1, mod) % mod
        f = u * self.p ** max(v, 0)
        return LaurentSeries(self.p, self.lo, [x * f for x in self.num], s, prec, self.xprec,
                             self.tail_val + v)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        if other.p != self.p:
            raise PreconditionError("mixing series over different primes")
        oa, ob = self.order(), other.order()
        if oa is None or ob is None:
            return LaurentSeries(self.p, 0, [], 0, min(self.prec, other.prec),
                                 min(self.xprec, other.xprec))
        va, vb = self.valuation(), other.valuation()
        prec = min(self.prec + vb, other.prec + va)
        xprec = min(self.xprec + min(ob, 0), other.xprec + min(oa, 0))
        s = self.s + other.s
        n = xprec - (self.lo + other.lo)
        if n <= 0:
            return LaurentSeries(self.p, 0, [], s, prec, xprec)
        num = _kron_mul(self.num, other.num, n)
        return LaurentSeries(self.p, self.lo + other.lo, num, s, prec, xprec,
                             min(self.tail_val + other.tail_val, va + vb))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return invert(self) ** (-e)
        out = self.const(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by X^k."""
        return self.like(self.lo + k, list(self.num), xprec=self.xprec + k)

    # comparison --------------------------------------------------------
    def defect(self, other, band=None) -> int:
        """Valuation of self - other on the common band (degrees < band)."""
        d = self - other
        if band is not None:
            d = d.with_prec(xprec=band)
        return d.valuation()

    def __repr__(self):
        return f"LaurentSeries({format_series(self, max_terms=8)})"


def format_series(f: LaurentSeries, max_terms: int | None = None) -> str:
    """Render in the CLI literal grammar."""
    terms = []
    for k, n in f.items():
        c = f.coeff_frac(k)
        if c == 0:
            continue
        cs = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        if k == 0:
            t = cs
        else:
            mono = "X" if k == 1 else f"X^{k}"
            t = mono if c == 1 else (f"-{mono}" if c == -1 else f"{cs}*{mono}")
        terms.append(t)
        if max_terms and len(terms) >= max_terms:
            terms.append("...")
            break
    body = " + ".join(terms).replace("+ -", "- ") if terms else "0"
    return f"{body} + O(X^{f.xprec}; {f.p}^{f.prec})"


# inversion -----------------------------------------------------------------

def invert(f: LaurentSeries) -> LaurentSeries:
    """Inverse in the field of Laurent series at 0.

    Writes f = c X^v (1 + g).  When g has negative Gauss valuation w the
    degree-k coefficient of the inverse can be as large as p^(-k w), and
    the reported precision is lowered by that amount over the whole band.
    """
    v = f.order()
    if v is None:
        raise NotInvertible("series is indistinguishable from 0")
    p = f.p
    lead = f.coeff_frac(v)
    vl = int(vp_int(lead.numerator, p) - vp_int(lead.denominator, p))
    K = f.xprec - v
    u = [f.coeff_frac(v + i) / lead for i in range(K)]
    w = min([0] + [int(vp_int(x.numerator, p) - vp_int(x.denominator, p)) for x in u[1:] if x])
    b = [Fraction(1)] + [Fraction(0)] * (K - 1)
    for k in range(1, K):
        b[k] = -sum(u[i] * b[k - i] for i in range(1, k + 1) if u[i])
    prec = f.prec - 2 * vl + 2 * (K - 1) * w
    if prec <= 0:
        raise NotInvertible(f"inverse has no correct digits at this window (K={K}, w={w})")
    coeffs = {i - v: bi / lead for i, bi in enumerate(b) if bi}
    return LaurentSeries.from_coeffs(p, coeffs, prec, f.xprec - 2 * v)


# operators ----------------------------------------------------------------

def _as_int_unit(c, p: int, need: int) -> int:
    """Integer representative of a unit c in Z_p, correct modulo p^need."""
    if isinstance(c, PadicScalar):
        if c.valuation() != 0:
            raise PreconditionError("gamma parameter must be a p-adic unit")
        if c.prec is not None and c.prec < need:
            raise PreconditionError("gamma parameter known to insufficient precision")
        return c.mantissa
    c = int(c)
    if c % p == 0:
        raise PreconditionError("gamma parameter must be a p-adic unit")
    return c


def _substitute(f: LaurentSeries, g: list, polar_fn) -> LaurentSeries:
    """f(g) for g a power series with g(0)=0; polar terms handled by polar_fn(k) -> LaurentSeries."""
    p = f.p
    M = f.xprec
    mod = f.mod
    out = LaurentSeries(p, 0, [], f.s, f.prec, M, f.tail_val)
    reg = [f.num[i] for i in range(len(f.num)) if f.lo + i >= 0]
    if reg and M > 0:
        acc = [0] * M
        gm = [x % mod for x in g[:M]] + [0] * max(0, M - len(g))
        for c in reversed(reg[:M]):
            acc = mul_mod(acc, gm, M, mod)
            acc[0] = (acc[0] + c) % mod
        out = out + LaurentSeries(p, 0, acc, f.s, f.prec, M, f.tail_val)
    for k, n in f.items():
        if k >= 0:
            break
        out = out + polar_fn(-k).rescale(f.s).scale_int(n, f.s)
    return out


def _scale_int(self: LaurentSeries, n: int, s: int) -> LaurentSeries:
    """Multiply by the integer numerator n of a coefficient whose denominator is p^s."""
    return self.like(self.lo, [x * n for x in self.num])


LaurentSeries.scale_int = _scale_int


def apply_phi(f: LaurentSeries, pole_cap: int | None = None) -> LaurentSeries:
    """phi(f)(X) = f((1+X)^p - 1); polar part expanded on the boundary annulus."""
    p = f.p
    M = f.xprec
    g = list(gamma_poly(p, p, max(M, 2), f.prec + f.s))
    mod = f.mod

    def polar(k):
        r = phi_inf_inverse(p, k, f.prec + f.s)
        lo = -p * k - (len(r) - 1)
        num = list(reversed(r))
        return LaurentSeries(p, lo, [x % mod for x in num], f.s, f.prec, M, f.tail_val)

    out = _substitute(f, g, polar)
    if pole_cap is not None and out.pole_bound > pole_cap:
        raise WindowOverflow(f"phi image has pole order {out.pole_bound} > cap {pole_cap}")
    return out


def gamma_unit_inverse(p: int, c: int, n: int, prec: int) -> list:
    """X / ((1+X)^c - 1) modulo (X^n, p^prec)."""
    mod = p**prec
    g = gamma_poly(p, c, n + 2, prec)
    h = list(g[1:n + 1])
    return inv_unit(h, n, mod)


def apply_gamma(f: LaurentSeries, c) -> LaurentSeries:
    """gamma_c(f)(X) = f((1+X)^c - 1) for c in Z_p^*."""
    p = f.p
    M = f.xprec
    pole = f.pole_bound
    need = f.prec + f.s + M + pole + 2
    ci = _as_int_unit(c, p, f.prec)
    if isinstance(c, PadicScalar) and c.prec is not None:
        ci = _lift_unit(c, need)
    g = list(gamma_poly(p, ci % p ** (need + M), max(M, 2), f.prec + f.s))
    mod = f.mod
    hinv = gamma_unit_inverse(p, ci % p ** (need + M + pole), M + pole + 1, f.prec + f.s)

    powers = [[1]]

    def polar(k):
        # (X/g)^k, built incrementally across the poles of f
        while len(powers) <= k:
            powers.append(mul_mod(powers[-1], hinv, M + pole + 1, mod))
        return LaurentSeries(p, -k, powers[k], f.s, f.prec, M, f.tail_val)

    return _substitute(f, g, polar)


def _lift_unit(c: PadicScalar, need: int) -> int:
    """Recover a longer representative for Teichmuller lifts; otherwise use the stored digits."""
    x = c.mantissa
    p = c.p
    # Teichmuller points are the only inexact units we feed in; re-lift them if possible
    if pow(x, p - 1, p ** c.prec) == 1 % p ** c.prec:
        return _teich_int(p, x % p, need)
    return x


def apply_psi(f: LaurentSeries) -> LaurentSeries:
    """The left inverse of phi: f = sum_i (1+X)^i phi(f_i)  ->  f_0.

    Works in the basis (1+X)^j, where the decomposition is read off from
    j mod p.  Polar terms use X^-k = phi(X^-k) * (phi(X)/X)^k, so
    psi(X^-k) = X^-k * psi((phi(X)/X)^k) exactly.
    """
    p = f.p
    M = f.xprec
    mod = f.mod
    out_x = min(M, M // p + f.tail_val - f.prec + 1)
    if out_x <= 0:
        raise WindowOverflow(f"psi needs a larger X-adic window (M={M}, N={f.prec})")
    reg = [f.num[i] for i in range(len(f.num)) if f.lo + i >= 0]
    res = LaurentSeries(p, 0, [], f.s, f.prec, out_x, f.tail_val)
    if reg:
        coeffs = _psi_poly(reg, p, mod)
        res = res + LaurentSeries(p, 0, coeffs, f.s, f.prec, out_x, f.tail_val)
    for k, n in f.items():
        if k >= 0:
            break
        res = res + psi_polar(p, -k, f.prec + f.s, out_x).rescale(f.s).scale_int(n, f.s)
    return res


def _psi_poly(a: list, p: int, mod: int) -> list:
    """psi on a polynomial given in the X basis."""
    n = len(a)
    # to the Y = 1+X basis: X^k = sum_j C(k,j) (-1)^(k-j) Y^j
    b = [0] * n
    for k, ak in enumerate(a):
        if ak:
            for j in range(0, k + 1, 1):
                if j % p == 0:
                    b[j] += ak * comb(k, j) * (-1) ** (k - j)
    keep = [b[j] % mod for j in range(0, n, p)]
    # back to the X basis: Y^i = sum_l C(i,l) X^l
    out = [0] * len(keep)
    for i, bi in enumerate(keep):
        if bi:
            for l in range(i + 1):
                out[l] += bi * comb(i, l)
    return [x % mod for x in out]


@lru_cache(maxsize=512)
def _psi_polar_cached(p: int, k: int, prec: int) -> tuple:
    mod = p**prec
    # (phi(X)/X)^k = (sum_{i<p} Y^i)^k as a Y-polynomial
    base = [1] * p
    poly = [1]
    for _ in range(k):
        poly = mul_mod(poly, base, len(poly) + p - 1, mod)
    keep = [poly[j] for j in range(0, len(poly), p)]
    out = [0] * len(keep)
    for i, bi in enumerate(keep):
        for l in range(i + 1):
            out[l] += bi * comb(i, l)
    return tuple(x % mod for x in out)


def psi_polar(p: int, k: int, prec: int, xprec: int) -> LaurentSeries:
    """psi(X^-k) with coefficients scaled so the series has s=0."""
    poly = list(_psi_polar_cached(p, k, prec))
    return LaurentSeries(p, -k, poly, 0, prec, xprec)


def derivative_del(f: LaurentSeries) -> LaurentSeries:
    """The derivation (1+X) d/dX."""
    lo = f.lo - 1
    n = len(f.num) + 1
    num = [0] * n
    for i, a in enumerate(f.num):
        k = f.lo + i
        if a and k:
            num[i] += k * a        # k a_k X^(k-1)
            num[i + 1] += k * a    # k a_k X^k
    return LaurentSeries(f.p, lo, num, f.s, f.prec, f.xprec - 1, f.tail_val)


def residue_dt(f: LaurentSeries) -> PadicScalar:
    """res(f dt) with dt = dX/(1+X): the X^-1 coefficient of f/(1+X)."""
    acc = 0
    for k, n in f.items():
        if k >= 0:
            break
        acc += (-1) ** (-k - 1) * n
    return PadicScalar(f.p, acc, -f.s, f.prec)


def make_t(win: Window, prec: int | None = None) -> LaurentSeries:
    """t = log(1+X)."""
    N = win.N if prec is None else prec
    coeffs = {n: Fraction((-1) ** (n - 1), n) for n in range(1, win.M)}
    return LaurentSeries.from_coeffs(win.p, coeffs, N, win.M)


def delta_project(f: LaurentSeries, m: int) -> LaurentSeries:
    """(1/(p-1)) sum_a omega(a)^m gamma_{omega(a)}(f): projector onto Delta-invariants."""
    p = f.p
    need = f.prec + f.s + f.xprec + f.pole_bound + 4
    acc = None
    for a in range(1, p):
        w = _teich_int(p, a, need + f.xprec)
        wm = pow(w, m % (p - 1), p ** (need + f.xprec))
        term = apply_gamma(f, PadicScalar(p, w, 0, need + f.xprec)).scale(wm)
        acc = term if acc is None else acc + term
    return acc.scale(Fraction(1, p - 1)).with_prec(prec=f.prec)
