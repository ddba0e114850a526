import pytest

from robba.errors import PreconditionError
from robba.series import (LaurentSeries, Window, apply_gamma, apply_phi, apply_psi, delta_project,
                          derivative_del, format_series, invert, make_t, residue_dt)

p = 5


def rand_series(rng, win, pole=3):
    return LaurentSeries.from_coeffs(p, {k: rng.randrange(p**win.N) for k in range(-pole, win.M)},
                                     win.N, win.M)


@pytest.mark.parametrize("kw", [dict(M=4), dict(N=2), dict(L=50, M=100), dict(tol=20)])
def test_window_validation(kw):
    with pytest.raises(PreconditionError):
        Window(**kw)


def test_window_growth_keeps_tolerance():
    w = Window(tol=5).grown()
    assert (w.M, w.N, w.ntol) == (300, 16, 5)
    assert Window().ntol == 7


def test_psi_phi_is_identity(win, rng):
    for _ in range(5):
        f = rand_series(rng, win)
        assert apply_psi(apply_phi(f)).defect(f) >= win.N - 3


def test_phi_commutes_with_gamma(win, rng):
    f = rand_series(rng, win)
    a = apply_phi(apply_gamma(f, 6))
    b = apply_gamma(apply_phi(f), 6)
    assert a.defect(b) >= win.N - 3


def test_psi_fixes_inverse_x(win):
    x = LaurentSeries.monomial(p, -1, win.N, win.M)
    assert apply_psi(x).defect(x) >= win.N


def test_del_of_t_is_one(win):
    one = LaurentSeries.one(p, win.N, win.M)
    assert derivative_del(make_t(win)).defect(one) >= win.N - 3


def test_residue_of_inverse_x(win):
    assert residue_dt(LaurentSeries.monomial(p, -1, win.N, win.M)).residue(win.N) == 1


def test_invert_unit(win):
    f = LaurentSeries.from_coeffs(p, {0: 1, 1: 1}, win.N, win.M)
    assert (invert(f) * f).defect(LaurentSeries.one(p, win.N, win.M)) >= win.N


def test_delta_projector_is_idempotent(win):
    f = LaurentSeries.from_coeffs(p, {-2: 1, 3: 2, 7: 1}, win.N, win.M)
    g = delta_project(f, 1)
    assert delta_project(g, 1).defect(g) >= win.N


def test_format_shows_precision(win):
    f = LaurentSeries.from_coeffs(p, {-1: 1, 2: 3}, win.N, win.M)
    assert format_series(f) == "X^-1 + 3*X^2 + O(X^200; 5^14)"
