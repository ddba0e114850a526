import pytest

from robba.errors import CProjectionSingular
from robba.herr import (CohClass, Coboundary, class_reduce, cocycle_alpha, cocycle_beta, cohomology_dims,
                        d0_apply, ell_invariant, fc_decompose, psi_fixed_check)
from robba.phigamma import Character, d_m, mk_rank1
from robba.series import LaurentSeries, Window, delta_project

p = 5


def test_trivial_character_dims(win):
    rep = cohomology_dims(mk_rank1(Character.from_parts(p, 0, 0), win), win)
    assert rep.stabilized
    assert rep.dims == (1, 2, 0)


def test_tiny_window_does_not_stabilize():
    w = Window(M=20)
    rep = cohomology_dims(mk_rank1(Character.from_parts(p, 0, 0), w), w)
    assert not rep.stabilized


@pytest.mark.parametrize("m", [1, 2, 3])
def test_explicit_cocycles(win, m):
    assert cocycle_alpha(m, win).residual_valuation >= win.N - 3
    b = cocycle_beta(m, win)
    assert b.residual_valuation >= win.N - 3
    assert b.class_prec <= win.N


@pytest.mark.parametrize("m", [1, 2, 3])
def test_psi_fixed(win, m):
    ok, defect = psi_fixed_check(m, win)
    assert ok and defect >= win.N - 3


def test_coboundaries_reduce_to_zero(win, rng):
    M = mk_rank1(d_m(p, 1), win)
    x = LaurentSeries.from_coeffs(p, {k: rng.randrange(125) for k in range(-1, 10)}, win.N, win.M)
    y, z = d0_apply(M, (delta_project(x, 1),))
    assert isinstance(class_reduce(CohClass(1, (y, z), win.N, M)), Coboundary)


def test_alpha_is_not_a_coboundary(win):
    r = class_reduce(cocycle_alpha(1, win))
    assert isinstance(r, CohClass)


def test_fc_coordinates_of_the_basis(win):
    (x, y), = fc_decompose(cocycle_alpha(1, win), win)
    assert x.residue(6) == 1 and y.is_zero()
    (x, y), = fc_decompose(cocycle_beta(1, win), win)
    assert x.is_zero() and y.residue(6) == 1


def test_ell_invariant_exact_and_singular():
    assert ell_invariant([[3]], [[7]], p, 10).equals(ell_invariant([[6]], [[14]], p, 10))
    with pytest.raises(CProjectionSingular):
        ell_invariant([[1, 0], [0, 1]], [[1, 2], [2, 4]], p, 10)
