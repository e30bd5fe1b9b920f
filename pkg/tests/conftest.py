from fractions import Fraction

import numpy as np
import pytest

from essential_chow import chow
from essential_chow.pieri import VARIANTS, build_resolution


@pytest.fixture(scope="session")
def resolutions():
    return {v: build_resolution(v) for v in VARIANTS}


@pytest.fixture(scope="session")
def chow_matrices(resolutions):
    out = {}
    for v, res in resolutions.items():
        sym = chow.chow_matrix_symmetric(v, res)
        out[(v, chow.SYM10)] = sym
        out[(v, chow.ESS9)] = chow.pullback_to_essential(sym)
    return out


def rand_q(rng, num=9, den=9):
    return Fraction(int(rng.integers(-num, num + 1)), int(rng.integers(1, den + 1)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
