import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hopwalk import pointprocess, walk


def poisson_instance(seed, n_min=4, n_max=12, dim=2, alpha=1.0, side=3.5):
    """Poisson sample conditioned on a point count in [n_min, n_max]: the
    seed is advanced deterministically until the count lands in range."""
    s = int(seed)
    while True:
        xi = pointprocess.sample_poisson(1.0, dim, side, s)
        if n_min <= len(xi) <= n_max:
            return xi
        s += 100003  # fixed stride keeps the scan deterministic


@pytest.fixture(scope="session")
def small_instances():
    """A deterministic pool of small Poisson instances with generators for
    all three models, shared across tests."""
    pool = []
    for k in range(12):
        xi = poisson_instance(seed=1000 + k)
        gens = {m: walk.build_generator(xi, 1.0, m) for m in walk.MODELS}
        pool.append((xi, gens))
    return pool


def two_point_set(distance=1.0, dim=1):
    pts = np.zeros((2, dim))
    pts[1, 0] = distance
    side = 2 * distance + 2
    return pointprocess.PointSet(dim=dim, side=side, points=pts, seed=0)


def collinear_0_1_10():
    pts = [[0.0], [1.0], [10.0]]
    return pointprocess.PointSet(dim=1, side=22, points=pts, seed=0)
