import random

import pytest

from robba.series import Window


@pytest.fixture(scope="session")
def win():
    return Window()


@pytest.fixture
def rng():
    return random.Random(20240501)
