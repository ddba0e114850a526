from fractions import Fraction

import pytest

from robba.errors import PreconditionError, PropertyViolation
from robba.fildmod import (dual_submodule, elliptic_model, filtration_Di, full_dual_filtration, graded_W,
                           make_module, search_filtrations, submodule, verify_D1D3)
from robba.qlinalg import Subspace

p = 5


def test_elliptic_filtration():
    M, D = elliptic_model(p)
    F = filtration_Di(M, D)
    assert [S.dim for S in F] == [0, 0, 1, 2, 2]
    assert verify_D1D3(M, D, F).ok


def test_graded_pieces():
    M, D = elliptic_model(p)
    W0, W1 = graded_W(M, D)
    assert W0.phi_m() == [[Fraction(1, p)]]
    assert W1.phi_m() == [[Fraction(1)]]


def test_search_is_unique():
    M, D = elliptic_model(p)
    out = search_filtrations(M, D)
    assert out["unique"] and out["exhaustive"] and out["solutions"] == 1


def test_biduality():
    M, D = elliptic_model(p)
    dual = full_dual_filtration(M, D)
    assert dual == filtration_Di(M.dual(), dual_submodule(M, D))
    assert all(x.annihilator() == y for x, y in zip(dual, filtration_Di(M, D)[::-1]))
    assert M.dual().dual().phi_m() == M.phi_m()


def test_crystalline_line():
    C = make_module(p, [[3]], [[0]], [(0, [[1]])])
    D = submodule(C, [[1]])
    assert [S.dim for S in filtration_Di(C, D)] == [0, 1, 1, 1, 1]
    assert [w.dim for w in graded_W(C, D)] == [0, 0]


def test_module_validation():
    with pytest.raises(PropertyViolation):
        make_module(p, [[1, 0], [0, 1]], [[0, 1], [0, 0]], [])        # N phi != p phi N
    M, _ = elliptic_model(p)
    with pytest.raises(PreconditionError):
        submodule(M, [[0, 1]])


def test_subspace_algebra():
    A = Subspace(3, [[1, 0, 0], [0, 1, 0]])
    B = Subspace(3, [[0, 1, 0], [0, 0, 1]])
    assert (A & B) == Subspace(3, [[0, 1, 0]])
    assert (A + B).dim == 3
    assert A.annihilator() == Subspace(3, [[0, 0, 1]])
