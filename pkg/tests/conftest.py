import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from hyperstate.hypercore import Hypergraph, PhaseFunction, WeightedHypergraph  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hypergraph(rng, n, p=0.3):
    edges = frozenset(int(e) for e in range(1, 1 << n) if rng.random() < p)
    return Hypergraph(n, edges)


def random_weighted(rng, n, p=0.5):
    return WeightedHypergraph(
        n, {int(e): float(rng.uniform(-3, 3)) for e in range(1 << n) if rng.random() < p}
    )


def random_phase_function(rng, n):
    return PhaseFunction(n, rng.uniform(0, 2, size=1 << n))
