import itertools

import numpy as np
import pytest

from qmcred.graphs import Graph, make_named_graph


def brute_cut(n, edges):
    """Reference Max-Cut by plain enumeration over all 2^n labelings."""
    best = 0.0
    for bits in itertools.product((0, 1), repeat=n):
        best = max(best, sum(w for u, v, w in edges if bits[u] != bits[v]))
    return best


def random_graph(rng, n, p=0.5):
    edges = [(i, j, 1.0) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, tuple(edges))


@pytest.fixture
def k2():
    return make_named_graph("complete", 2)


@pytest.fixture
def k3():
    return make_named_graph("complete", 3)


@pytest.fixture
def p3():
    return make_named_graph("path", 3)


@pytest.fixture
def c5():
    return make_named_graph("cycle", 5)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
