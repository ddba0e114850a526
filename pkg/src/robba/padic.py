"""Capped-absolute-precision p-adic scalars.

A :class:`PadicScalar` stores ``mantissa * p**val`` known modulo
``p**prec``.  ``prec=None`` marks an exact value.  Precision only ever
shrinks under arithmetic, following the usual capped-absolute rules::

    add/sub : min(prec_a, prec_b)
    mul     : min(prec_a + v(b), prec_b + v(a))
    div     : min(prec_a - v(b), prec_b + v(a) - 2 v(b))
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import inf

from .errors import DivisionByZero, NotPrincipalUnit, PreconditionError


def vp_int(n: int, p: int) -> float:
    """Valuation of an integer; ``inf`` for zero."""
    if n == 0:
        return inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_frac(x, p: int) -> float:
    x = Fraction(x)
    if x == 0:
        return inf
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def _check_prime(p: int) -> None:
    if p < 3 or p > 97 or p % 2 == 0 or any(p % q == 0 for q in range(3, int(p**0.5) + 1, 2)):
        raise PreconditionError(f"p must be an odd prime <= 97, got {p}")


def _pmin(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class PadicScalar:
    """An element of Q_p known modulo ``p**prec`` (exact when ``prec`` is None)."""

    __slots__ = ("p", "mantissa", "val", "prec", "cancelled")

    def __init__(self, p: int, mantissa: int, val: int = 0, prec: int | None = None,
                 cancelled: bool = False):
        self.p = p
        self.prec = prec
        self.cancelled = cancelled
        if mantissa == 0:
            self.mantissa, self.val = 0, 0
            return
        while mantissa % p == 0:
            mantissa //= p
            val += 1
        if prec is not None:
            if val >= prec:
                # indistinguishable from zero: keep only the precision
                self.mantissa, self.val = 0, 0
                self.cancelled = True
                return
            mantissa %= p ** (prec - val)
        self.mantissa, self.val = mantissa, val

    # construction -----------------------------------------------------
    @classmethod
    def of(cls, p: int, x, prec: int | None = None) -> "PadicScalar":
        """Build from an int or Fraction; ``prec`` caps the absolute precision."""
        if isinstance(x, PadicScalar):
            return x.with_prec(prec) if prec is not None else x
        x = Fraction(x)
        if x == 0:
            return cls(p, 0, 0, prec)
        num, den = x.numerator, x.denominator
        vd = 0
        while den % p == 0:
            den //= p
            vd += 1
        vn = 0
        while num % p == 0:
            num //= p
            vn += 1
        val = vn - vd
        if prec is None:
            if den != 1:
                raise PreconditionError(f"{x} is not exactly representable; give a precision")
            return cls(p, num, val, None)
        if val >= prec:
            return cls(p, 0, 0, prec)
        mod = p ** (prec - val)
        return cls(p, num * pow(den, -1, mod) % mod, val, prec)

    @classmethod
    def zero(cls, p: int, prec: int | None = None) -> "PadicScalar":
        return cls(p, 0, 0, prec)

    # queries ------------------------------------------------------------
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        """True when the value is indistinguishable from 0."""
        return self.mantissa == 0

    def valuation(self):
        if self.mantissa == 0:
            return inf if self.prec is None else self.prec
        return self.val

    def unit_part(self) -> int:
        return self.mantissa

    def lift(self) -> Fraction:
        """A rational representative."""
        return Fraction(self.mantissa) * Fraction(self.p) ** self.val

    def residue(self, n: int) -> int:
        """Integer representative modulo p^n (requires non-negative valuation)."""
        if self.mantissa == 0:
            return 0
        if self.val < 0:
            raise PreconditionError("value is not integral")
        return self.mantissa * self.p ** self.val % self.p ** n

    def with_prec(self, prec: int) -> "PadicScalar":
        return PadicScalar(self.p, self.mantissa, self.val, _pmin(self.prec, prec))

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.p != self.p:
                raise PreconditionError("mixing scalars over different primes")
            return other
        return PadicScalar.of(self.p, other)

    def __neg__(self):
        return PadicScalar(self.p, -self.mantissa, self.val, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        prec = _pmin(self.prec, other.prec)
        v = min(self.val if self.mantissa else inf, other.val if other.mantissa else inf)
        if v == inf:
            return PadicScalar(self.p, 0, 0, prec)
        a = self.mantissa * self.p ** (self.val - v) if self.mantissa else 0
        b = other.mantissa * self.p ** (other.val - v) if other.mantissa else 0
        total = a + b
        out = PadicScalar(self.p, total, v, prec)
        if total == 0 or (out.mantissa == 0 and (self.mantissa or other.mantissa)):
            out.cancelled = prec is not None
        return out

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if (self.mantissa == 0 and self.prec is None) or (other.mantissa == 0 and other.prec is None):
            return PadicScalar(self.p, 0)
        prec = _pmin(
            None if self.prec is None else self.prec + _finite(other.valuation(), self.prec),
            None if other.prec is None else other.prec + _finite(self.valuation(), other.prec),
        )
        if self.mantissa == 0 or other.mantissa == 0:
            return PadicScalar(self.p, 0, 0, prec)
        return PadicScalar(self.p, self.mantissa * other.mantissa, self.val + other.val, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.mantissa == 0:
            raise DivisionByZero("inverse of a value indistinguishable from 0")
        v = self.val
        if self.prec is None:
            if abs(self.mantissa) != 1:
                raise PreconditionError("inverse of an exact non-unit-power needs a precision")
            return PadicScalar(self.p, self.mantissa, -v, None)
        rel = self.prec - v
        return PadicScalar(self.p, pow(self.mantissa, -1, self.p ** rel), -v, rel - v)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.mantissa == 0:
            raise DivisionByZero("division by a value indistinguishable from 0")
        if other.prec is None and self.prec is not None:
            # exact divisor: only the dividend limits the precision
            prec = self.prec - other.val
            if self.mantissa == 0:
                return PadicScalar(self.p, 0, 0, prec)
            rel = prec - (self.val - other.val)
            u = self.mantissa * pow(other.mantissa, -1, self.p ** max(rel, 1))
            return PadicScalar(self.p, u, self.val - other.val, prec)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PadicScalar(self.p, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def equals(self, other) -> bool:
        """Indistinguishable within the combined precision."""
        return (self - other).is_zero()

    def __eq__(self, other):
        try:
            return self.equals(other)
        except (TypeError, ValueError):
            return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"PadicScalar({self})"

    def __str__(self):
        return format_scalar(self)


def _finite(v, fallback):
    return v if v != inf else fallback


def format_scalar(x: PadicScalar) -> str:
    """Render in the CLI literal grammar, e.g. ``63 + O(5^3)``."""
    if x.mantissa == 0:
        body = "0"
    elif x.val >= 0:
        body = str(x.mantissa * x.p ** x.val)
    elif x.val == -1:
        body = f"{x.mantissa}*p^-1"
    else:
        body = f"{x.mantissa}*p^{x.val}"
    if x.prec is None:
        return body
    return f"{body} + O({x.p}^{x.prec})"


# special functions ------------------------------------------------------

@lru_cache(maxsize=4096)
def _teich_int(p: int, a: int, prec: int) -> int:
    mod = p ** prec
    x = a % mod
    # x <- x^p converges to the Teichmuller lift; each step gains one digit
    for _ in range(prec):
        x = pow(x, p, mod)
    return x


def teichmuller(p: int, a: int, prec: int) -> PadicScalar:
    """The (p-1)-th root of unity congruent to ``a`` mod p."""
    _check_prime(p)
    if a % p == 0:
        raise PreconditionError("teichmuller lift needs a unit residue")
    return PadicScalar(p, _teich_int(p, a, prec), 0, prec)


def log_unit(u: PadicScalar, prec: int | None = None) -> PadicScalar:
    """p-adic logarithm of a principal unit.

    For exact ``u`` the target precision must be given.
    """
    p = u.p
    target = _pmin(u.prec, prec)
    if target is None:
        raise PreconditionError("log_unit of an exact value needs a target precision")
    x = u - 1
    vx = x.valuation()
    if vx < 1:
        raise NotPrincipalUnit(f"{u} is not congruent to 1 mod p")
    if vx == inf or x.is_zero():
        return PadicScalar(p, 0, 0, target)
    xr = x.lift()
    total = Fraction(0)
    k = 1
    # stop once every remaining term k*v(x) - v(k) is >= target
    while True:
        if k * vx - _max_vk(p, k) >= target and all(
            j * vx - _max_vk(p, j) >= target for j in range(k, k + p * 4)
        ):
            break
        total += (-1) ** (k + 1) * xr**k / k
        k += 1
    return PadicScalar.of(p, total, target)


def _max_vk(p: int, k: int) -> int:
    v = 0
    while k % p == 0:
        k //= p
        v += 1
    return v


def binom_zp(c: PadicScalar, k: int) -> PadicScalar:
    """Generalised binomial coefficient C(c, k) for c in Z_p."""
    if k < 0:
        raise PreconditionError("k must be non-negative")
    p = c.p
    if c.prec is None:
        q = c.lift()
        num = Fraction(1)
        for i in range(k):
            num *= q - i
        fact = 1
        for i in range(2, k + 1):
            fact *= i
        return PadicScalar.of(p, num / fact)
    num = PadicScalar(p, 1)
    for i in range(k):
        num = num * (c - i)
    fact = 1
    for i in range(2, k + 1):
        fact *= i
    out = num / PadicScalar.of(p, fact)
    if out.prec is not None and out.prec <= 0:
        from .errors import PrecisionLoss
        raise PrecisionLoss(f"C(c,{k}) consumed the whole precision budget")
    return out


def binom_int(c: int, k: int, p: int, prec: int) -> int:
    """C(c, k) mod p^prec for an integer representative c of a p-adic integer.

    ``c`` must be correct modulo p^(prec + v_p(k!)).
    """
    num = 1
    den = 1
    for i in range(k):
        num *= c - i
        den *= i + 1
    return (num // den) % p**prec


def rational_reconstruction(x: PadicScalar, bound: int | None = None) -> Fraction | None:
    """The fraction a/b with |a|, b <= bound congruent to x, if one exists.

    Defaults to bound = sqrt(p^prec / 2), where the answer is unique.
    """
    if x.prec is None:
        return x.lift()
    if x.mantissa == 0:
        return Fraction(0)
    p = x.p
    shift = min(x.val, 0)
    n = x.prec - shift
    mod = p**n
    r = x.mantissa * p ** (x.val - shift) % mod
    bound = bound or int((mod // 2) ** 0.5)
    # extended Euclid on (mod, r), stopping once the remainder drops below the bound
    r0, r1, s0, s1 = mod, r, 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    out = Fraction(r1, s1) * Fraction(p) ** shift
    if vp_int(out.denominator, p) > -shift:
        return None
    return out
