"""
    Shared hypergraph fixtures.
"""


import os

import numpy as np
import pytest

from hyperppr.core import build_hypergraph
from hyperppr.synthetic import planted_partition, random_hypergraph


DATA = os.path.join(os.path.dirname(__file__), 'data')


def shrunk_planted():
    """ two 6 vertex clusters of 8 triples each and one crossing triple {5, 6, 7} """
    edges = []
    for offset in (0, 6):
        for i in range(6):
            edges.append((1, [offset + (i + k) % 6 for k in range(3)]))
        edges.append((1, [offset, offset + 2, offset + 4]))
        edges.append((1, [offset + 1, offset + 3, offset + 5]))
    edges.append((1, [5, 6, 7]))
    return build_hypergraph(12, edges)


@pytest.fixture
def f1():
    """ n=4, edges {0,1,2} and {2,3}, unit weights """
    return build_hypergraph(4, [(1, [0, 1, 2]), (1, [2, 3])])


@pytest.fixture
def p3():
    """ the path 0 - 1 - 2 """
    return build_hypergraph(3, [(1, [0, 1]), (1, [1, 2])])


@pytest.fixture
def f1_path():
    return os.path.join(DATA, 'fixture_f1.hg')


@pytest.fixture
def bipartite_path():
    return os.path.join(DATA, 'bipartite.txt')


@pytest.fixture(scope='session')
def planted():
    """ two 16 vertex clusters, 40 triples each, one crossing triple """
    return planted_partition((16, 16), 40, 3, 1, rng_seed=0)


@pytest.fixture(scope='session')
def planted_graph():
    """ the planted partition with 2-edges """
    return planted_partition((16, 16), 40, 2, 1, rng_seed=0)


@pytest.fixture(scope='session')
def shrunk():
    return shrunk_planted()


@pytest.fixture
def random_graphs():
    """ connected random graphs with integer weights """
    rng = np.random.default_rng(7)
    return [random_hypergraph(int(rng.integers(4, 17)), 24, 2, rng) for _ in range(10)]


@pytest.fixture
def random_hypergraphs():
    """ connected random hypergraphs with edges of up to 6 members """
    rng = np.random.default_rng(11)
    return [random_hypergraph(int(rng.integers(4, 25)), 30, 6, rng) for _ in range(10)]
