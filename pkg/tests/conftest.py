import random
from fractions import Fraction
from functools import lru_cache

import pytest

from amplifiber.exact import RatMatrix
from amplifiber.grassmann import build_Z_moment_curve


@lru_cache(maxsize=None)
def instance(n, k, m):
    return build_Z_moment_curve(n, m, k)


def random_matrix(rng, rows, cols, lo=-9, hi=9, den=5):
    return RatMatrix([[Fraction(rng.randint(lo, hi), rng.randint(1, den)) for _ in range(cols)]
                      for _ in range(rows)])


@pytest.fixture
def rng():
    return random.Random(20261016)
