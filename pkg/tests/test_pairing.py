from robba.herr import CohClass, Coboundary, class_reduce
from robba.padic import PadicScalar, log_unit
from robba.pairing import _alpha, _beta, cup, dm_gram, dual_h1_basis, duality_matrix, inv_brauer, pair
from robba.phigamma import chi, d_m, mk_rank1
from robba.series import LaurentSeries

p = 5


def test_inv_normalization(win):
    M = mk_rank1(chi(p), win)
    c = CohClass(2, ((LaurentSeries.monomial(p, -1, win.N, win.M),),), win.N, M)
    want = -1 / log_unit(PadicScalar(p, 1 + p), win.N + 2)
    assert (inv_brauer(c) - want).valuation() >= win.N - 3


def test_d1_gram_shape(win):
    G = dm_gram(1, win)
    assert G[0][0].is_zero()                   # f against f
    assert G[0][1].residue(8) == 1
    assert G[1][0].residue(7) == p**7 - 1        # certified to 7 digits only


def test_beta_entries_carry_reduced_precision(win):
    G = dm_gram(1, win)
    assert G[1][1].prec < win.N - 1 <= G[0][0].prec


def test_graded_anticommutativity(win):
    a, b = _alpha(1, win), _beta(1, win)
    s = cup(a, b) + cup(b, a)
    assert isinstance(class_reduce(s), Coboundary)


def test_pairing_is_bilinear(win):
    a = _alpha(1, win)
    u = dual_h1_basis(1, win)[1]
    assert pair(a.scaled(3), u).equals(pair(a, u) * 3)


def test_duality_d2(win):
    P = duality_matrix(mk_rank1(d_m(p, 2), win), 1, win)
    assert P.dims == (2, 2)
    assert P.det_valuation == 0
