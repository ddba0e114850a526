import numpy as np

from robba.smith import Ring, elementary_valuations, kernel, rank, solve

R = Ring(5, 12)


def test_rank_respects_threshold():
    A = np.diag([1, 5, 5**9]).astype(object)
    assert elementary_valuations(R, A) == [0, 1, 9]
    assert rank(R, A, 6) == 2
    assert rank(R, A, 10) == 3


def test_kernel_of_rank_one():
    A = np.array([[1, 2], [2, 4]], dtype=object)
    K = kernel(R, A, 6)
    assert K.shape == (2, 1)
    assert not any(int(x) % R.mod for x in R.matmul(A, K).reshape(-1))


def test_solve_reports_lost_digits():
    A = np.diag([1, 25]).astype(object)
    x, resid, loss = solve(R, A, [3, 50], 6, with_loss=True)
    assert resid == 12 and loss == 2
    assert int(x[1]) % 5**10 == 2


def test_solve_flags_inconsistent_rhs():
    A = np.diag([1, 25]).astype(object)
    _, resid = solve(R, A, [3, 1], 6)
    assert resid == 0
