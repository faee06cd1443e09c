import random

import pytest

from twofold import api
from twofold.oracle import Oracle


@pytest.fixture(scope="session")
def ora():
    return Oracle(192)


@pytest.fixture(scope="session")
def f64():
    return api(64)


@pytest.fixture(scope="session")
def f32():
    return api(32)


@pytest.fixture()
def rng():
    return random.Random(20240917)


def rand_double(rng, emin=-300, emax=300):
    return rng.uniform(-1.0, 1.0) * 2.0 ** rng.randint(emin, emax)


def rand_single(rng, emin=-60, emax=60):
    from twofold._fp import r32

    return r32(rng.uniform(-1.0, 1.0) * 2.0 ** rng.randint(emin, emax))
