import numpy as np
import pytest

from cartan_hartogs.domains import sample_interior, type_i

# (m, n, N, K, lambda); every set has mn + N <= 8.
PARAM_SETS = [
    (1, 1, 1, 1.0, 3.0),
    (2, 1, 2, 1.0, 5.0),
    (2, 2, 1, 0.5, 1.5),
    (1, 3, 2, 2.0, 0.7),
    (2, 3, 2, 1.7, 4.0),
]
PARAM_IDS = ["ball", "m2n1N2", "m2n2K05", "m1n3K2", "m2n3K17"]


def ball():
    return type_i(1, 1, 1, 1.0, 3.0)


def sample_points(domain, count, x_max=0.9, seed=0):
    rng = np.random.default_rng(seed)
    return [sample_interior(domain, rng, x_max) for _ in range(count)]


def random_direction(rng, dim):
    return rng.standard_normal(dim) + 1j * rng.standard_normal(dim)


@pytest.fixture(params=PARAM_SETS, ids=PARAM_IDS)
def domain(request):
    return type_i(*request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
