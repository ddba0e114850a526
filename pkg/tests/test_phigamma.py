from fractions import Fraction

import pytest

from robba.errors import PreconditionError
from robba.phigamma import (Character, chi, d_m, direct_sum, dual_twist, frobenius_on_dcris, mk_rank1,
                            tensor)

p = 5


def test_character_labels():
    assert Character.from_parts(p, 1, 1).label() == "m=1,dp=1"
    assert d_m(p, 2).label() == "m=2,dp=5"
    assert chi(p).label() == "m=1,dp=1"


def test_dual_twist_of_d_m():
    ch = d_m(p, 3)
    assert ch.dual().m == -2
    assert ch.dual().dp == Fraction(1, 25)


def test_commutation(win):
    for m in (0, 1, 2):
        assert mk_rank1(Character.from_parts(p, m, 1), win).commutation_defect() >= win.N - 1


def test_sums_and_tensors(win):
    A, B = mk_rank1(d_m(p, 1), win), mk_rank1(chi(p), win)
    assert direct_sum([A, B]).rank == 2
    T = tensor(A, dual_twist(A))
    assert T.rank == 1
    assert T.commutation_defect() >= win.N - 1


def test_frobenius_on_dcris():
    assert frobenius_on_dcris(d_m(p, 1)) in (Fraction(1), Fraction(1, p))


def test_bad_prime():
    with pytest.raises(PreconditionError):
        Character.from_parts(4, 1, 0)
