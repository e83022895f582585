import numpy as np
import pytest

from cfdecomp.graph import edge_weights
from cfdecomp.topology import GainMatrix


def random_gains(rng, K, N, power=4.0):
    """Heavy-tailed positive gains so each user has a clear best beam."""
    return GainMatrix(rng.uniform(0.0, 1.0, size=(K, N)) ** power + 1e-6)


def random_instance(rng, max_K=12, max_N=8, min_N=2):
    K = int(rng.integers(1, max_K + 1))
    N = int(rng.integers(min_N, max_N + 1))
    return random_gains(rng, K, N)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def toy_weights():
    # 3 users, 4 beams: users 0, 1 best served by beam 0, user 2 by beam 2
    return edge_weights(np.array([
        [1.0, 0.4, 0.1, 0.05],
        [1.0, 0.2, 0.3, 0.1],
        [0.2, 0.5, 1.0, 0.6],
    ]))
