#!env python
"""
    I generate synthetic hypergraphs: planted partitions for recovery
    experiments and connected random hypergraphs for property checks.
"""


# python libraries
import logging
from typing import Optional, Sequence


import numpy as np


from hyperppr.core import Hypergraph, build_hypergraph
from hyperppr.errors import InvalidParameter


LOG = logging.getLogger(__name__)


def planted_partition(cluster_sizes: Sequence[int] = (16, 16), edges_per_cluster: int = 40,
                      edge_size: int = 3, crossing: int = 1, rng_seed: int = 0) -> tuple:
    """
        I return a hypergraph with planted clusters and the clusters.

        Cluster c holds consecutive ids.  Its first edges are the windows
        {i, i+1, .., i+edge_size-1} around the cluster ring, so no vertex is
        isolated, then random distinct edges until edges_per_cluster.  Each
        crossing edge takes members from two consecutive clusters.  All
        weights are 1.

        Args:
            cluster_sizes: vertex count per cluster
            edges_per_cluster: internal edge count per cluster
            edge_size: members per edge
            crossing: number of crossing edges
            rng_seed: seed of the generator

        Returns:
            (Hypergraph, list of frozenset clusters)
    """
    if len(cluster_sizes) < 2 and crossing:
        raise InvalidParameter('crossing edges need at least two clusters')
    if edge_size < 2 or any(size < edge_size for size in cluster_sizes):
        raise InvalidParameter('every cluster needs at least edge_size >= 2 vertices')
    if any(edges_per_cluster < size for size in cluster_sizes):
        raise InvalidParameter('edges_per_cluster must cover the ring of every cluster')
    rng = np.random.default_rng(rng_seed)
    starts = np.concatenate([[0], np.cumsum(cluster_sizes)])
    edges = []
    clusters = []
    for index, size in enumerate(cluster_sizes):
        offset = int(starts[index])
        chosen = set()
        for i in range(size):
            chosen.add(tuple(sorted(offset + (i + k) % size for k in range(edge_size))))
        attempts = 0
        while len(chosen) < edges_per_cluster:
            attempts += 1
            if attempts > 100 * edges_per_cluster:
                raise InvalidParameter(f'cluster {index} cannot hold {edges_per_cluster} distinct edges')
            chosen.add(tuple(sorted(offset + int(v) for v in rng.choice(size, edge_size, replace=False))))
        edges.extend((1.0, members) for members in sorted(chosen))
        clusters.append(frozenset(range(offset, offset + size)))
    for index in range(crossing):
        left = index % (len(cluster_sizes) - 1)
        from_left = (edge_size + 1) // 2
        members = (
            [int(starts[left]) + int(v) for v in rng.choice(cluster_sizes[left], from_left, replace=False)]
            + [int(starts[left + 1]) + int(v)
               for v in rng.choice(cluster_sizes[left + 1], edge_size - from_left, replace=False)]
        )
        edges.append((1.0, sorted(members)))
    LOG.debug('planted partition with %d edges', len(edges))
    return build_hypergraph(int(starts[-1]), edges), clusters


def random_hypergraph(n: int, m: int, max_size: int, rng: np.random.Generator,
                      integer_weights: bool = True, min_size: int = 2, connected: bool = True) -> Hypergraph:
    """
        I return a random hypergraph with edges of min_size..max_size members.

        When connected, vertex i > 0 first joins an edge with an earlier
        vertex, topped up with later vertices while the edge is below
        min_size, which keeps H connected.  Random edges are then added until
        there are m.  Otherwise vertices no random edge touches are dropped.
        With max_size 2 the result is a graph.  Integer weights in {1, 2, 3}
        keep every partial sum exact.
    """
    if n < 2 or min_size < 2 or min_size > min(max_size, n):
        raise InvalidParameter('need n >= 2 and 2 <= min_size <= min(max_size, n)')
    groups = []
    for vertex in range(1, n if connected else 1):
        size = int(rng.integers(min_size, max_size + 1))
        others = [int(v) for v in rng.choice(vertex, size=min(size - 1, vertex), replace=False)]
        if len(others) + 1 < min_size:
            later = rng.choice(np.arange(vertex + 1, n), size=min_size - 1 - len(others), replace=False)
            others.extend(int(v) for v in later)
        groups.append([vertex] + others)
    while len(groups) < m:
        size = int(rng.integers(min_size, min(max_size, n) + 1))
        groups.append([int(v) for v in rng.choice(n, size=size, replace=False)])
    if integer_weights:
        weights = rng.integers(1, 4, size=len(groups)).astype(float)
    else:
        weights = rng.uniform(0.5, 2.0, size=len(groups))
    return build_hypergraph(n, zip(weights.tolist(), groups), drop_isolated=not connected)


def random_seed_distribution(n: int, rng: np.random.Generator, support: Optional[int] = None) -> np.ndarray:
    """
        I return a random distribution over n vertices on at most support of them.
    """
    support = n if support is None else min(support, n)
    result = np.zeros(n)
    chosen = rng.choice(n, size=support, replace=False)
    result[chosen] = rng.uniform(0.1, 1.0, size=support)
    return result / result.sum()
