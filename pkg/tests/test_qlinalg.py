from fractions import Fraction

import pytest

from robba.errors import NotInvertible
from robba.qlinalg import coordinates, det, inverse, kernel, matmul, identity, rank


def test_inverse_and_det():
    A = [[2, 1], [7, 4]]
    assert matmul(inverse(A), A) == identity(2)
    assert det(A) == 1
    with pytest.raises(NotInvertible):
        inverse([[1, 2], [2, 4]])


def test_kernel_and_rank():
    A = [[1, 2, 3], [2, 4, 6]]
    assert rank(A) == 1
    assert len(kernel(A, 3)) == 2


def test_coordinates():
    assert coordinates([[1, 0], [1, 1]], [3, 2]) == [Fraction(1), Fraction(2)]
