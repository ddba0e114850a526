from fractions import Fraction

import pytest

from robba.errors import ParseError
from robba.parsing import parse_character, parse_scalar, parse_series, series_to_iwasawa

p = 5


@pytest.mark.parametrize("text, value, prec", [("63 + O(5^3)", 63, 3), ("3*p^-2", Fraction(3, 25), None),
                                               ("-1/2 + O(p^4)", Fraction(-1, 2), 4)])
def test_scalars(text, value, prec):
    x = parse_scalar(text, p)
    assert x.prec == prec
    assert x.equals(x.of(p, value, prec))


def test_series_literal():
    lit = parse_series("X^-2 + 3 - 2*X + O(X^10; 5^8)", p)
    assert lit.coeffs == {-2: 1, 0: 3, 1: -2}
    assert (lit.xprec, lit.prec, lit.pole_order()) == (10, 8, 2)


def test_iwasawa_literal():
    f = series_to_iwasawa(parse_series("p^2 + p*X + X^3", p), p, 10, 8)
    assert [c.residue(10) for c in f.coeffs[:4]] == [25, 5, 0, 1]


def test_character():
    ch = parse_character("m=2,s=1", p)
    assert (ch.m, ch.dp) == (2, 5)


@pytest.mark.parametrize("text, pos", [("m=1,s=2", 6), ("m=1,s=1,u=5", 10), ("m=1,s=1,x", 8)])
def test_character_errors_point_at_the_problem(text, pos):
    with pytest.raises(ParseError) as e:
        parse_character(text, p)
    assert e.value.pos == pos
    assert "^" in str(e.value)


def test_wrong_base():
    with pytest.raises(ParseError):
        parse_scalar("1 + O(7^3)", p)
