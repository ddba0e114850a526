from fractions import Fraction as F

import pytest

from robba.errors import DegreeRange, NotSquareZero
from robba.homalg import (CappedQp, ComplexMap, DualComplex, FiniteComplex, Rationals, bockstein, cohomology,
                          cone, elementary_divisors, height_gram, selmer_cone, shift)

Q = Rationals()


def ident(n):
    return [[F(int(i == j)) for j in range(n)] for i in range(n)]


def test_acyclic_pair():
    C = FiniteComplex(Q, 0, [1, 1], [[[F(1)]]])
    assert cohomology(C).dims == {0: 0, 1: 0}


def test_square_zero_enforced():
    with pytest.raises(NotSquareZero):
        FiniteComplex(Q, 0, [1, 1, 1], [[[F(1)]], [[F(1)]]])


def test_cone_of_identity_is_acyclic():
    C = FiniteComplex(Q, 0, [2, 1], [[[F(1), F(2)]]])
    f = ComplexMap(C, C, {0: ident(2), 1: ident(1)})
    assert all(v == 0 for v in cohomology(cone(f)).dims.values())


def test_shift_moves_degrees():
    C = FiniteComplex(Q, 0, [1, 1], [[[F(0)]]])
    S = shift(C, 1)
    assert (S.lo, S.hi) == (-1, 0)
    assert cohomology(S).dims == {-1: 1, 0: 1}


def test_capped_ring_sees_torsion():
    Z = CappedQp(5, 14)
    K = 6
    X = [[F(int(i == j + 1)) for j in range(K)] for i in range(K)]
    L = FiniteComplex(Z, 0, [K, K], [X])
    assert cohomology(L).dims == {0: 1, 1: 1}
    assert elementary_divisors(L)[0] == [0] * (K - 1)


def _local_identity():
    G = FiniteComplex(Q, 0, [1, 1], [[[F(0)]]])
    L = FiniteComplex(Q, 0, [1, 1], [[[F(0)]]])
    U = FiniteComplex(Q, 0, [1], [])
    res = ComplexMap(G, L, {0: ident(1), 1: ident(1)})
    inc = ComplexMap(U, L, {0: ident(1)})
    return G, res, inc


def test_selmer_conventions_differ_by_two():
    G, res, inc = _local_identity()
    a = selmer_cone(G, [res], [inc], "s23")
    b = selmer_cone(G, [res], [inc], "intro")
    assert b.lo - a.lo == 2
    assert cohomology(a).dims[a.lo] == cohomology(b).dims[b.lo]


def test_selmer_rejects_bad_degrees():
    G, res, inc = _local_identity()
    bad = shift(G, 1)
    with pytest.raises(DegreeRange):
        selmer_cone(bad, [ComplexMap(bad, res.tgt, {})], [inc])


def test_bockstein_with_zero_differential():
    A = DualComplex(Q, 0, [2, 2], [[[0, 0], [0, 0]]], [[[1, 2], [3, 4]]])
    assert bockstein(A)[0].matrix == [[1, 2], [3, 4]]


def test_height_gram():
    assert height_gram([[1, 2], [3, 4]], [[1, 0], [0, 2]]) == [[1, 6], [2, 8]]
