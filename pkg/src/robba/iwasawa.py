"""The Iwasawa algebra Z_p[[X]] (X = gamma_0 - 1) at finite precision.

Weierstrass preparation, characteristic ideals of square presentations,
the involution gamma -> gamma^{-1}, and growth norms on the discs W_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import inf

from .errors import IndistinguishableFromZero, NotIntegral, NotTorsion, PrecisionLoss, PreconditionError
from .padic import PadicScalar, _check_prime, format_scalar
from .series import inv_unit, mul_mod


class IwasawaSeries:
    """sum a_k X^k for k < xprec, every a_k known modulo p^prec."""

    __slots__ = ("p", "coeffs", "prec", "xprec")

    def __init__(self, p: int, coeffs, prec: int, xprec: int | None = None):
        _check_prime(p)
        xprec = len(coeffs) if xprec is None else xprec
        cs = [PadicScalar.of(p, c, prec) for c in list(coeffs)[:xprec]]
        cs += [PadicScalar.zero(p, prec)] * (xprec - len(cs))
        self.p, self.coeffs, self.prec, self.xprec = p, tuple(cs), prec, xprec

    @classmethod
    def from_residues(cls, p: int, ints, prec: int, xprec: int | None = None) -> "IwasawaSeries":
        return cls(p, [int(c) for c in ints], prec, xprec)

    @property
    def is_integral(self) -> bool:
        return all(c.is_zero() or c.val >= 0 for c in self.coeffs)

    def residues(self, n: int | None = None) -> list:
        """Coefficients as integers mod p^n (n defaults to prec)."""
        if not self.is_integral:
            raise NotIntegral("series has coefficients of negative valuation")
        n = self.prec if n is None else n
        return [c.residue(n) for c in self.coeffs]

    def valuation(self):
        return min((c.valuation() for c in self.coeffs), default=inf)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def truncate(self, xprec: int) -> "IwasawaSeries":
        return IwasawaSeries(self.p, self.coeffs[:xprec], self.prec, min(xprec, self.xprec))

    def _binary(self, other):
        if not isinstance(other, IwasawaSeries):
            other = IwasawaSeries(self.p, [other], self.prec, self.xprec)
        if other.p != self.p:
            raise PreconditionError("mixing series over different primes")
        return other, min(self.prec, other.prec), min(self.xprec, other.xprec)

    def __add__(self, other):
        other, n, k = self._binary(other)
        return IwasawaSeries(self.p, [a + b for a, b in zip(self.coeffs[:k], other.coeffs[:k])], n, k)

    __radd__ = __add__

    def __neg__(self):
        return IwasawaSeries(self.p, [-a for a in self.coeffs], self.prec, self.xprec)

    def __sub__(self, other):
        return self + (-self._binary(other)[0])

    def __mul__(self, other):
        other, n, k = self._binary(other)
        mod = self.p**n
        prod = mul_mod(self.residues(n)[:k], other.residues(n)[:k], k, mod)
        return IwasawaSeries.from_residues(self.p, prod, n, k)

    __rmul__ = __mul__

    def defect(self, other) -> int:
        """Minimal valuation of self - other over the common X-range (N-capped)."""
        other, n, k = self._binary(other)
        d = self - other
        return min(n, min((c.valuation() for c in d.coeffs), default=n))

    def __eq__(self, other):
        other, n, _ = self._binary(other)
        return self.defect(other) >= n

    __hash__ = None

    def __repr__(self):
        return f"IwasawaSeries({format_iwasawa(self, 8)})"


def format_iwasawa(f: IwasawaSeries, max_terms: int | None = None) -> str:
    terms = []
    for k, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        body = format_scalar(PadicScalar(c.p, c.mantissa, c.val))
        terms.append(body if k == 0 else f"{body}*X" + (f"^{k}" if k > 1 else ""))
        if max_terms and len(terms) >= max_terms:
            break
    return " + ".join(terms or ["0"]) + f" + O(X^{f.xprec}; {f.p}^{f.prec})"


@dataclass
class WeierstrassData:
    p: int
    mu: int
    P: list           # integer coefficients mod p^(prec - mu), constant term first, monic
    u: IwasawaSeries
    prec: int
    defect: int       # valuation of p^mu P u - f on the certified range

    @property
    def lam(self) -> int:
        return len(self.P) - 1

    def as_dict(self, head: int = 6) -> dict:
        n = self.prec - self.mu
        return {
            "mu": self.mu,
            "lambda": self.lam,
            "P": [format_scalar(PadicScalar.of(self.p, c, n)) for c in self.P],
            "unit_head": [format_scalar(c) for c in self.u.coeffs[:head]],
            "x_precision": self.u.xprec,
            "defect": self.defect,
        }


def _division_quotient(g: list, lam: int, n: int, mod: int) -> list:
    """q with X^lam = q g + r, deg r < lam, for g whose first lam terms are divisible by p."""
    K = len(g)
    low = g[:lam] + [0] * (K - lam)
    U = g[lam:] + [0] * lam
    Uinv = inv_unit(U, K, mod)
    q = list(Uinv)
    # q <- U^{-1} (1 - tau(q g_low)); each pass gains one p-adic digit
    for _ in range(n + 1):
        h = mul_mod(q, low, K, mod)
        tau = h[lam:] + [0] * lam
        one_minus = [(-c) % mod for c in tau]
        one_minus[0] = (one_minus[0] + 1) % mod
        q_new = mul_mod(Uinv, one_minus, K, mod)
        if q_new == q:
            break
        q = q_new
    return q


def weierstrass_prep(f: IwasawaSeries) -> WeierstrassData:
    """f = p^mu P u with P distinguished and u a unit."""
    if not f.is_integral:
        raise NotIntegral("Weierstrass preparation needs an integral series")
    p, N, K = f.p, f.prec, f.xprec
    mu = f.valuation()
    if mu >= N:
        raise IndistinguishableFromZero("series vanishes to the working precision")
    n = N - mu
    mod = p**n
    g = [c.residue(N) // p**mu % mod for c in f.coeffs]
    lam = next(k for k, c in enumerate(g) if c % p)
    # truncation errors at X^K drift down lam degrees per digit gained
    ku = K - lam * n
    if ku < 1:
        raise PrecisionLoss(f"X-precision {K} too small for lambda={lam} at {n} digits")
    if lam == 0:
        P = [1]
        u = g
    else:
        q = _division_quotient(g, lam, n, mod)
        qg = mul_mod(q, g, K, mod)
        # q g = X^lam - r is the distinguished polynomial itself
        P = [c % mod for c in qg[:lam]] + [1]
        u = inv_unit(q, K, mod)
    u_ser = IwasawaSeries.from_residues(p, u[:ku], n, ku)
    Pser = IwasawaSeries.from_residues(p, P + [0] * (ku - len(P)), n, ku) if ku > lam else None
    defect = N
    if Pser is not None:
        prod = (Pser * u_ser).residues(n)
        fN = f.residues(N)
        for k in range(ku):
            d = (prod[k] * p**mu - fN[k]) % p**N
            if d:
                v = 0
                while d % p == 0:
                    d //= p
                    v += 1
                defect = min(defect, v)
    return WeierstrassData(p, mu, P, u_ser, N, defect)


def _det(A):
    n = len(A)
    total = None
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = A[0][perm[0]]
        for i in range(1, n):
            term = term * A[i][perm[i]]
        if inv % 2:
            term = -term
        total = term if total is None else total + term
    return total


def char_ideal(A) -> WeierstrassData:
    """Weierstrass data of det A for the module presented by the square matrix A."""
    n = len(A)
    if n == 0 or any(len(r) != n for r in A):
        raise PreconditionError("presentation matrix must be square and non-empty")
    if n > 4:
        raise PreconditionError("presentation matrices are capped at 4x4")
    d = _det(A)
    if d.valuation() >= d.prec:
        raise NotTorsion("determinant vanishes to the working precision")
    return weierstrass_prep(d)


def involution_iota(f: IwasawaSeries) -> IwasawaSeries:
    """Substitute X -> (1+X)^{-1} - 1 = -X/(1+X)."""
    p, N, K = f.p, f.prec, f.xprec
    s = max(0, -min((c.val for c in f.coeffs if not c.is_zero()), default=0))
    mod = p ** (N + s)
    a = [(c * p**s).residue(N + s) if not c.is_zero() else 0 for c in f.coeffs]
    y = [0] + [(-1) ** (k + 1) % mod for k in range(K - 1)]   # -X/(1+X) = -X + X^2 - ...
    acc = [0] * K
    for c in reversed(a):
        acc = mul_mod(acc, y, K, mod)
        acc[0] = (acc[0] + c) % mod
    coeffs = [PadicScalar.of(p, Fraction(c, p**s), N) for c in acc]
    return IwasawaSeries(p, coeffs, N, K)


@dataclass
class WnNorm:
    n: int
    value: Fraction          # min_k v(a_k) + k/n over the stored range
    argmin: int
    tail_min: Fraction       # the same minimum over the upper half of the range
    in_disc: bool            # tail strictly above the head: growth consistent with W_n

    def as_dict(self) -> dict:
        return {"n": self.n, "value": str(self.value), "argmin": self.argmin,
                "tail_min": str(self.tail_min), "in_disc": self.in_disc}


def wn_norm(f: IwasawaSeries, n: int) -> WnNorm:
    """Valuation form of the sup-norm on W_n: v(a_k) + k/n must tend to infinity."""
    if n < 1:
        raise PreconditionError("disc index must be positive")
    vals = []
    for k, c in enumerate(f.coeffs):
        v = c.valuation() if not c.is_zero() else f.prec
        vals.append(Fraction(v) + Fraction(k, n))
    if not vals:
        return WnNorm(n, Fraction(f.prec), 0, Fraction(f.prec), True)
    half = len(vals) // 2
    best = min(range(len(vals)), key=lambda k: vals[k])
    head = min(vals[:max(half, 1)])
    tail = min(vals[half:])
    return WnNorm(n, vals[best], best, tail, tail > head)


def wn_membership(f: IwasawaSeries, ns=(1, 2, 3, 4)) -> bool:
    """Heuristic: f plausibly lies in the distribution algebra if every tested disc looks convergent."""
    return all(wn_norm(f, n).in_disc for n in ns)


def log_series(p: int, prec: int, xprec: int) -> IwasawaSeries:
    """log(1+X) = sum (-1)^{k+1} X^k / k."""
    coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, xprec)]
    return IwasawaSeries(p, coeffs, prec, xprec)
