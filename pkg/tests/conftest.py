import os
import random

import pytest
from hypothesis import HealthCheck, settings

from cleandecomp.rings import (
    IntegersMod,
    LocalizedIntegers,
    MatrixRing,
    PolynomialRing,
    Q,
    Z,
    random_element,
)
from cleandecomp.matrices import Matrix

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

SEED = int(os.environ.get("CLEANDECOMP_SEED", "0"))

# the eight entry rings the randomized construction sweep runs over
SWEEP_RINGS = (
    Z,
    Q,
    IntegersMod(2),
    IntegersMod(6),
    IntegersMod(7),
    LocalizedIntegers((2, 3)),
    PolynomialRing(Q, "x"),
    MatrixRing(IntegersMod(2), 2),
)


@pytest.fixture
def rng():
    return random.Random(SEED)


def random_matrix(ring, size, rng):
    return Matrix(
        ring,
        tuple(
            tuple(random_element(ring, rng).value for _ in range(size))
            for _ in range(size)
        ),
    )
