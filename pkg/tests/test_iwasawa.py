from fractions import Fraction

import pytest

from robba.errors import IndistinguishableFromZero, NotIntegral, NotTorsion
from robba.iwasawa import (IwasawaSeries, char_ideal, involution_iota, log_series, weierstrass_prep,
                           wn_membership, wn_norm)

p, N, K = 5, 14, 200


def S(c, k=K):
    return IwasawaSeries(p, c, N, k)


@pytest.mark.parametrize("coeffs, mu, lam", [([0, 1], 0, 1), ([5, 5], 1, 0), ([0, 125, 125], 3, 1),
                                            ([25, 5, 0, 1], 0, 3)])
def test_known_preparations(coeffs, mu, lam):
    W = weierstrass_prep(S(coeffs))
    assert (W.mu, W.lam) == (mu, lam)
    assert W.defect >= N - 2


def test_random_round_trip(rng):
    for _ in range(10):
        mu, lam = rng.randrange(3), rng.randrange(4)
        P = [rng.randrange(0, p**N, p) for _ in range(lam)] + [1]
        u = [rng.randrange(1, p)] + [rng.randrange(p**N) for _ in range(K - 1)]
        W = weierstrass_prep(S([p**mu]) * S(P) * S(u))
        assert (W.mu, W.lam) == (mu, lam)
        assert all((a - b) % p ** (N - mu) == 0 for a, b in zip(W.P, P))


def test_errors():
    with pytest.raises(IndistinguishableFromZero):
        weierstrass_prep(S([0]))
    with pytest.raises(NotIntegral):
        weierstrass_prep(S([Fraction(1, 5), 1]))
    with pytest.raises(NotTorsion):
        char_ideal([[S([0, 1]), S([0, 1])], [S([0, 1]), S([0, 1])]])


def test_char_ideal_of_triangular():
    W = char_ideal([[S([0, 1]), S([5])], [S([0]), S([0, 1])]])
    assert W.lam == 2 and W.mu == 0


def test_iota_is_an_involution():
    f = S([3, 1, 4, 1, 5, 9], 40)
    assert involution_iota(involution_iota(f)).defect(f) >= N


def test_iota_of_x():
    g = involution_iota(S([0, 1], 10))
    assert [c.residue(N) % p**N for c in g.coeffs[:4]] == [0, p**N - 1, 1, p**N - 1]


def test_growth_norms():
    L = log_series(p, N, 60)
    assert wn_norm(L, 1).in_disc
    assert wn_membership(S([1, 1], 60))


def test_iota_inverts_the_generator():
    g = S([1, 1], 30)
    assert (involution_iota(g) * g).defect(S([1], 30)) >= N
