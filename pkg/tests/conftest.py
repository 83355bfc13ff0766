import random
from math import gcd

import pytest

from quatlat.errors import NotPositiveDefinite
from quatlat.forms import parse_form

FOUR_SQUARES = (1, 0, 0, 0, 1, 0, 0, 1, 0, 1)
WATSON = (1, 0, 0, 0, 1, 0, 0, 7, 0, 7)
D6780 = (1, 0, 0, 0, 3, 3, 3, 5, 1, 34)


@pytest.fixture(scope="session")
def four_squares():
    return parse_form(FOUR_SQUARES)


@pytest.fixture(scope="session")
def watson():
    return parse_form(WATSON)


@pytest.fixture(scope="session")
def d6780():
    return parse_form(D6780)


def random_primitive_form(rng):
    """Random primitive positive-definite form, coefficients within [-10, 10]."""
    while True:
        diag = [rng.randint(1, 10) for _ in range(4)]
        off = [rng.randint(-4, 4) for _ in range(6)]
        coeffs = (diag[0], off[0], off[1], off[2],
                  diag[1], off[3], off[4], diag[2], off[5], diag[3])
        if gcd(*coeffs) != 1:
            continue
        try:
            return parse_form(coeffs)
        except NotPositiveDefinite:
            continue


@pytest.fixture(scope="session")
def corpus():
    rng = random.Random(0)
    return [random_primitive_form(rng) for _ in range(50)]


@pytest.fixture(scope="session")
def small_corpus(corpus):
    return corpus[:8]
