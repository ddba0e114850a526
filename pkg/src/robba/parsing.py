"""Mini-grammars for the command line.

    scalar    := sint ['/' int] ['*' pw] | pw          ['+' 'O(' base '^' int ')']
    pw        := 'p' ['^' sint]
    series    := term (('+'|'-') term)*                 ['+' 'O(X^' int ';' base '^' int ')']
    term      := [coeff ['*']] 'X' ['^' sint] | coeff
    character := 'm=' sint ',s=' ('0'|'1') [',u=' scalar]

``base`` is the prime itself or the letter p.  Whitespace is ignored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, PreconditionError
from .padic import PadicScalar
from .phigamma import Character


class _Cursor:
    def __init__(self, text: str, p: int):
        self.text = text
        self.i = 0
        self.p = p

    def skip(self):
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self, s: str = None):
        self.skip()
        if s is None:
            return self.text[self.i] if self.i < len(self.text) else ""
        return self.text.startswith(s, self.i)

    def eat(self, s: str) -> bool:
        if self.peek(s):
            self.i += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.eat(s):
            self.fail(f"expected {s!r}")

    def fail(self, msg: str):
        raise ParseError(msg, self.text, min(self.i, len(self.text)))

    def done(self) -> bool:
        self.skip()
        return self.i >= len(self.text)

    def uint(self) -> int:
        self.skip()
        j = self.i
        while j < len(self.text) and self.text[j].isdigit():
            j += 1
        if j == self.i:
            self.fail("expected an integer")
        v = int(self.text[self.i:j])
        self.i = j
        return v

    def sint(self) -> int:
        neg = self.eat("-")
        return -self.uint() if neg else self.uint()

    def base(self):
        """The prime in an O-term: either the digits of p or the letter p."""
        if self.eat("p"):
            return
        start = self.i
        b = self.uint()
        if b != self.p:
            self.i = start
            self.fail(f"O-term base {b} does not match p={self.p}")

    def power_of_p(self) -> Fraction:
        self.expect("p")
        if self.eat("^"):
            return Fraction(self.p) ** self.sint()
        return Fraction(self.p)

    def coeff(self) -> Fraction:
        """sint ['/' int] ['*' pw] | pw"""
        if self.peek("p"):
            return self.power_of_p()
        c = Fraction(self.sint())
        if self.eat("/"):
            start = self.i
            d = self.uint()
            if d == 0:
                self.i = start
                self.fail("zero denominator")
            c /= d
        save = self.i
        if self.eat("*"):
            if self.peek("p"):
                c *= self.power_of_p()
            else:
                self.i = save
        return c


def parse_scalar(text: str, p: int) -> PadicScalar:
    cur = _Cursor(text, p)
    neg = cur.eat("-")
    c = cur.coeff()
    if neg:
        c = -c
    prec = None
    if cur.eat("+"):
        cur.expect("O(")
        cur.base()
        cur.expect("^")
        prec = cur.sint()
        cur.expect(")")
    if not cur.done():
        cur.fail("unexpected trailing input")
    try:
        return PadicScalar.of(p, c, prec)
    except PreconditionError as e:
        raise ParseError(str(e), text, 0) from None


@dataclass
class SeriesLiteral:
    coeffs: dict        # degree -> Fraction
    xprec: int | None
    prec: int | None

    def pole_order(self) -> int:
        return max([0] + [-k for k, c in self.coeffs.items() if c != 0])


def parse_series(text: str, p: int) -> SeriesLiteral:
    cur = _Cursor(text, p)
    coeffs: dict = {}
    xprec = prec = None
    sign = -1 if cur.eat("-") else 1
    first = True
    while True:
        if not first:
            if cur.eat("+"):
                sign = 1
            elif cur.eat("-"):
                sign = -1
            else:
                break
        first = False
        if sign == 1 and cur.peek("O("):
            cur.expect("O(")
            cur.expect("X^")
            xprec = cur.uint()
            cur.expect(";")
            cur.base()
            cur.expect("^")
            prec = cur.uint()
            cur.expect(")")
            break
        if cur.peek("X"):
            c = Fraction(1)
        elif cur.peek() in "0123456789p":
            c = cur.coeff()
        else:
            cur.fail("expected a term")
        deg = 0
        if cur.eat("*"):
            if not cur.peek("X"):
                cur.fail("expected 'X' after '*'")
        if cur.eat("X"):
            deg = cur.sint() if cur.eat("^") else 1
        coeffs[deg] = coeffs.get(deg, Fraction(0)) + sign * c
    if not cur.done():
        cur.fail("unexpected trailing input")
    return SeriesLiteral({k: v for k, v in coeffs.items() if v != 0}, xprec, prec)


def parse_character(text: str, p: int) -> Character:
    cur = _Cursor(text, p)
    cur.expect("m=")
    m = cur.sint()
    cur.expect(",")
    cur.expect("s=")
    start = cur.i
    s = cur.uint()
    if s not in (0, 1):
        cur.i = start
        cur.fail("s must be 0 or 1")
    u = Fraction(1)
    if cur.eat(","):
        cur.expect("u=")
        start = cur.i
        neg = cur.eat("-")
        u = cur.coeff() * (-1 if neg else 1)
        if u == 0 or u.numerator % p == 0 or u.denominator % p == 0:
            cur.i = start
            cur.fail("u must be a p-adic unit")
    if not cur.done():
        cur.fail("unexpected trailing input")
    return Character.from_parts(p, m, s, u)


def series_to_laurent(lit: SeriesLiteral, p: int, win):
    from .series import LaurentSeries
    N = lit.prec if lit.prec is not None else win.N
    M = lit.xprec if lit.xprec is not None else win.M
    return LaurentSeries.from_coeffs(p, {k: c for k, c in lit.coeffs.items() if k < M}, N, M)


def series_to_iwasawa(lit: SeriesLiteral, p: int, N: int, K: int, text: str = ""):
    from .iwasawa import IwasawaSeries
    if lit.pole_order():
        raise ParseError("Iwasawa series cannot have negative powers of X", text, 0)
    N = lit.prec if lit.prec is not None else N
    K = lit.xprec if lit.xprec is not None else K
    coeffs = [lit.coeffs.get(k, Fraction(0)) for k in range(K)]
    return IwasawaSeries(p, coeffs, N, K)
