from fractions import Fraction

import pytest

from robba.errors import DivisionByZero, PreconditionError
from robba.padic import (PadicScalar, binom_zp, format_scalar, log_unit, rational_reconstruction,
                         teichmuller, vp_frac)

p = 5


def test_inverse_of_three():
    a = PadicScalar.of(p, Fraction(1, 3), 10)
    assert (a * 3).equals(PadicScalar.of(p, 1, 10))
    assert a.prec == 10


def test_valuation_and_units():
    x = PadicScalar.of(p, 50, 10)
    assert x.valuation() == 2
    assert x.unit_part() == 2
    assert vp_frac(Fraction(3, 125), p) == -3


def test_precision_is_the_minimum_under_addition():
    a = PadicScalar.of(p, 7, 4)
    b = PadicScalar.of(p, 3, 9)
    assert (a + b).prec == 4


def test_product_loses_precision_by_the_other_valuation():
    a = PadicScalar.of(p, 25, 10)       # v = 2
    b = PadicScalar.of(p, 1, 6)
    assert (a * b).prec == 8


def test_exact_needs_p_integral_denominator():
    with pytest.raises(PreconditionError):
        PadicScalar.of(p, Fraction(1, 3))
    assert PadicScalar.of(p, Fraction(1, 5)).valuation() == -1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        PadicScalar.of(p, 1, 5) / PadicScalar.zero(p, 5)


def test_format():
    assert format_scalar(PadicScalar.of(p, 63, 3)) == "63 + O(5^3)"


def test_teichmuller_is_a_root_of_unity():
    w = teichmuller(p, 2, 12)
    assert (w ** (p - 1)).equals(PadicScalar.of(p, 1, 12))
    assert w.residue(1) == 2


def test_log_is_additive():
    u, v = PadicScalar.of(p, 6, 14), PadicScalar.of(p, 11, 14)
    lhs = log_unit(u * v, 14)
    rhs = log_unit(u, 14) + log_unit(v, 14)
    assert (lhs - rhs).valuation() >= 12
    assert log_unit(u, 14).valuation() == 1


def test_binomial_matches_integers():
    for k in range(6):
        from math import comb
        assert binom_zp(PadicScalar.of(p, 9, 12), k).equals(PadicScalar.of(p, comb(9, k), 12))


@pytest.mark.parametrize("q", [Fraction(3, 7), Fraction(-2, 9), Fraction(5, 3), Fraction(1, 25), Fraction(-7, 4)])
def test_rational_reconstruction(q):
    assert rational_reconstruction(PadicScalar.of(p, q, 16)) == q
