#!env python
"""
    I manage the hypergraph itself: building and validating it, measuring
    vertex subsets, expanding it into graphs, converting bipartite data and
    reading or writing the plain text format.
"""


# python libraries
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union


import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


import hyperppr.common
from hyperppr.errors import (
    DegenerateSubset,
    DuplicateMember,
    EmptyEdge,
    EmptySubset,
    ExpansionBudgetExceeded,
    InvalidParameter,
    IsolatedVertex,
    MalformedLine,
    NonPositiveWeight,
    VertexOutOfRange,
)


LOG = logging.getLogger(__name__)

Subset = Union[np.ndarray, Iterable[int]]


class Hyperedge(NamedTuple):
    """ one weighted hyperedge, members strictly increasing """
    weight: float
    members: tuple


class Measure(NamedTuple):
    """ volume, cut and conductance of a vertex subset """
    volume: float
    cut: float
    conductance: float


class Connectivity(NamedTuple):
    """ connected components, largest first """
    components: tuple
    largest: frozenset


class StarExpansion(NamedTuple):
    """ star expanded graph plus the mask of the original vertices """
    graph: 'Hypergraph'
    original_mask: np.ndarray


class Stats(NamedTuple):
    """ the size summary of a hypergraph, averages kept as exact rationals """
    n: int
    m: int
    avg_degree: Fraction
    avg_edge_size: Fraction

    def __str__(self) -> str:
        return (
            f'n={self.n} m={self.m} '
            f'avg_deg={float(self.avg_degree):.6g} '
            f'avg_size={float(self.avg_edge_size):.6g}'
        )

    def to_dict(self) -> dict:
        """
            I return the stats as json friendly values.
        """
        return {
            'n': self.n,
            'm': self.m,
            'avg_degree': float(self.avg_degree),
            'avg_edge_size': float(self.avg_edge_size),
        }


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """
        I am an immutable weighted hypergraph stored as flat incidence arrays.

        Members of edge ``e`` are ``edge_members[edge_ptr[e]:edge_ptr[e + 1]]``
        in increasing order.  Everything else is derived on first use.
    """
    n: int
    edge_ptr: np.ndarray
    edge_members: np.ndarray
    weights: np.ndarray
    original_ids: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        """ number of hyperedges """
        return len(self.weights)

    @cached_property
    def sizes(self) -> np.ndarray:
        """ |e| per edge """
        return _frozen(np.diff(self.edge_ptr))

    @cached_property
    def edge_of_entry(self) -> np.ndarray:
        """ owning edge of every incidence entry """
        return _frozen(np.repeat(np.arange(self.m), self.sizes))

    @cached_property
    def incidence(self) -> sparse.csr_matrix:
        """ the n x m 0/1 incidence matrix """
        return sparse.csr_matrix(
            (np.ones(len(self.edge_members)), (self.edge_members, self.edge_of_entry)),
            shape=(self.n, self.m),
        )

    @cached_property
    def degrees(self) -> np.ndarray:
        """ d_v, the total weight of edges containing v """
        return _frozen(np.bincount(
            self.edge_members,
            weights=self.weights[self.edge_of_entry],
            minlength=self.n,
        ))

    @cached_property
    def volume(self) -> float:
        """ vol(V) """
        return float(self.degrees.sum())

    @cached_property
    def w_min(self) -> float:
        return float(self.weights.min())

    @cached_property
    def w_max(self) -> float:
        return float(self.weights.max())

    @cached_property
    def total_size(self) -> int:
        """ the sum of |e| over all edges """
        return int(len(self.edge_members))

    @cached_property
    def max_degree(self) -> float:
        return float(self.degrees.max())

    @cached_property
    def is_graph(self) -> bool:
        """ every edge has at most two members, singletons act as self-loops """
        return bool(np.all(self.sizes <= 2))

    def members(self, edge: int) -> np.ndarray:
        """
            I return the members of one edge.
        """
        return self.edge_members[self.edge_ptr[edge]:self.edge_ptr[edge + 1]]

    def incident_edges(self, vertex: int) -> np.ndarray:
        """
            I return the ids of the edges containing the vertex.
        """
        matrix = self.incidence
        return matrix.indices[matrix.indptr[vertex]:matrix.indptr[vertex + 1]]

    @property
    def edges(self) -> Iterator[Hyperedge]:
        """ the edges as Hyperedge tuples """
        for edge in range(self.m):
            yield Hyperedge(float(self.weights[edge]), tuple(int(v) for v in self.members(edge)))


def build_hypergraph(n: int, edges: Iterable, drop_isolated: bool = False) -> Hypergraph:
    """
        I validate the edges and return the hypergraph they describe.

        Args:
            n: vertex count, ids are 0 based
            edges: iterable of Hyperedge or (weight, members) pairs
            drop_isolated: remove degree 0 vertices and reindex densely instead
                of raising; the kept original ids land in ``original_ids``

        Returns:
            Hypergraph
    """
    if n < 1:
        raise InvalidParameter(f'n must be at least 1, got {n}')
    weights = []
    members = []
    pointers = [0]
    for index, (weight, edge_members) in enumerate(edges):
        weight = float(weight)
        if not np.isfinite(weight) or weight <= 0:
            raise NonPositiveWeight(index, weight)
        group = sorted(int(v) for v in edge_members)
        if not group:
            raise EmptyEdge(index)
        for left, right in zip(group, group[1:]):
            if left == right:
                raise DuplicateMember(index, left)
        if group[0] < 0 or group[-1] >= n:
            raise VertexOutOfRange(group[0] if group[0] < 0 else group[-1], n)
        weights.append(weight)
        members.extend(group)
        pointers.append(len(members))

    edge_members = np.asarray(members, dtype=np.int64)
    original_ids = np.arange(n, dtype=np.int64)
    touched = np.zeros(n, dtype=bool)
    touched[edge_members] = True
    if not touched.all():
        if not drop_isolated:
            raise IsolatedVertex(int(np.flatnonzero(~touched)[0]))
        if not touched.any():
            raise InvalidParameter('every vertex is isolated')
        original_ids = np.flatnonzero(touched)
        remap = np.full(n, -1, dtype=np.int64)
        remap[original_ids] = np.arange(len(original_ids))
        LOG.info('dropped %d isolated vertices', n - len(original_ids))
        edge_members = remap[edge_members]
        n = len(original_ids)

    return Hypergraph(
        n=n,
        edge_ptr=_frozen(np.asarray(pointers, dtype=np.int64)),
        edge_members=_frozen(edge_members),
        weights=_frozen(np.asarray(weights, dtype=float)),
        original_ids=_frozen(np.asarray(original_ids, dtype=np.int64)),
    )


def as_mask(H: Hypergraph, S: Subset) -> np.ndarray:
    """
        I return a boolean membership mask for a subset given as ids or a mask.
    """
    if isinstance(S, np.ndarray) and S.dtype == bool:
        if S.shape != (H.n,):
            raise InvalidParameter(f'mask has shape {S.shape}, expected ({H.n},)')
        return S
    ids = np.fromiter((int(v) for v in S), dtype=np.int64)
    bad = (ids < 0) | (ids >= H.n)
    if bad.any():
        raise VertexOutOfRange(int(ids[bad][0]), H.n)
    mask = np.zeros(H.n, dtype=bool)
    mask[ids] = True
    return mask


def as_vector(H: Hypergraph, x) -> np.ndarray:
    """
        I return x as a finite float vector of length n.
    """
    vector = np.asarray(x, dtype=float)
    if vector.shape != (H.n,):
        raise InvalidParameter(f'vector has shape {vector.shape}, expected ({H.n},)')
    if not np.all(np.isfinite(vector)):
        raise InvalidParameter('vector has non-finite entries')
    return vector


def crossing_edges(H: Hypergraph, mask: np.ndarray) -> np.ndarray:
    """
        I return a boolean per edge, true when the edge meets both sides.
    """
    inside = np.bincount(H.edge_of_entry, weights=mask[H.edge_members], minlength=H.m)
    return (inside > 0) & (inside < H.sizes)


def measure(H: Hypergraph, S: Subset) -> Measure:
    """
        I return vol(S), cut(S) and the conductance of S.

        Args:
            H: Hypergraph
            S: proper non-empty subset, ids or a boolean mask

        Returns:
            Measure
    """
    mask = as_mask(H, S)
    if not mask.any() or mask.all():
        raise DegenerateSubset('conductance needs a proper non-empty subset')
    vol_in = float(H.degrees[mask].sum())
    vol_out = float(H.degrees[~mask].sum())
    cut = float(H.weights[crossing_edges(H, mask)].sum())
    return Measure(vol_in, cut, cut / min(vol_in, vol_out))


def interior(H: Hypergraph, S: Subset) -> frozenset:
    """
        I return the vertices of S that touch no boundary edge.
    """
    mask = as_mask(H, S)
    crossing = crossing_edges(H, mask)
    touched = np.zeros(H.n, dtype=bool)
    touched[H.edge_members[crossing[H.edge_of_entry]]] = True
    return frozenset(int(v) for v in np.flatnonzero(mask & ~touched))


def connectivity(H: Hypergraph) -> Connectivity:
    """
        I return the connected components of H, computed on the vertex/edge
        bipartite incidence graph.  Components are ordered by size descending,
        then by smallest vertex id.
    """
    size = H.n + H.m
    bipartite = sparse.coo_matrix(
        (np.ones(H.total_size), (H.edge_members, H.n + H.edge_of_entry)),
        shape=(size, size),
    )
    _, labels = csgraph.connected_components(bipartite, directed=False)
    groups = {}
    for vertex, label in enumerate(labels[:H.n]):
        groups.setdefault(int(label), []).append(vertex)
    components = sorted(groups.values(), key=lambda group: (-len(group), group[0]))
    components = tuple(frozenset(group) for group in components)
    LOG.debug('%d connected components', len(components))
    return Connectivity(components, components[0])


def subhypergraph(H: Hypergraph, vertices: Subset, drop_isolated: bool = False) -> Hypergraph:
    """
        I return the sub-hypergraph induced by the vertices, keeping only edges
        that lie entirely inside them.  Vertices are reindexed densely and the
        result's ``original_ids`` point back through H to the original ids.
    """
    mask = as_mask(H, vertices)
    keep = np.flatnonzero(mask)
    if not len(keep):
        raise EmptySubset('subhypergraph needs at least one vertex')
    remap = np.full(H.n, -1, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    inside = np.bincount(H.edge_of_entry, weights=mask[H.edge_members], minlength=H.m)
    edges = [
        (H.weights[edge], remap[H.members(edge)])
        for edge in np.flatnonzero(inside == H.sizes)
    ]
    result = build_hypergraph(len(keep), edges, drop_isolated=drop_isolated)
    return Hypergraph(
        n=result.n,
        edge_ptr=result.edge_ptr,
        edge_members=result.edge_members,
        weights=result.weights,
        original_ids=_frozen(H.original_ids[keep][result.original_ids]),
    )


def pi(H: Hypergraph, S: Subset) -> np.ndarray:
    """
        I return the distribution pi_S, d_v / vol(S) on S and 0 elsewhere.
    """
    mask = as_mask(H, S)
    if not mask.any():
        raise EmptySubset('pi needs a non-empty subset')
    result = np.where(mask, H.degrees, 0.0)
    return result / result.sum()


def chi(H: Hypergraph, vertex: int) -> np.ndarray:
    """
        I return the indicator distribution of one vertex.
    """
    if not 0 <= vertex < H.n:
        raise VertexOutOfRange(vertex, H.n)
    result = np.zeros(H.n)
    result[vertex] = 1.0
    return result


def clique_pair_count(H: Hypergraph) -> int:
    """
        I return how many vertex pairs the clique expansion would create.
    """
    sizes = H.sizes.astype(np.int64)
    return int((sizes * (sizes - 1) // 2).sum())


def clique_expansion(H: Hypergraph, normalized: bool = False, budget: Optional[int] = None) -> Hypergraph:
    """
        I return the clique expansion of H.

        Every pair inside an edge becomes a 2-edge of weight w(e), or
        w(e)/C(|e|, 2) when normalized.  Parallel pairs are merged by summing
        their weights.  Singleton edges stay as singletons so no vertex
        loses its degree.

        Args:
            H: Hypergraph
            normalized: divide by the pair count of the edge
            budget: largest number of pairs allowed before refusing

        Returns:
            Hypergraph with every |e| <= 2
    """
    needed = clique_pair_count(H)
    if budget is not None and needed > budget:
        raise ExpansionBudgetExceeded(needed, budget)
    left, right, weight = [], [], []
    for size in np.unique(H.sizes):
        chosen = np.flatnonzero(H.sizes == size)
        block = H.edge_members[(H.edge_ptr[chosen][:, None] + np.arange(size)[None, :])]
        if size == 1:
            left.append(block[:, 0])
            right.append(block[:, 0])
            weight.append(H.weights[chosen])
            continue
        upper, lower = np.triu_indices(size, 1)
        pair_weight = H.weights[chosen] / (size * (size - 1) / 2) if normalized else H.weights[chosen]
        left.append(block[:, upper].ravel())
        right.append(block[:, lower].ravel())
        weight.append(np.repeat(pair_weight, len(upper)))
    left = np.concatenate(left)
    right = np.concatenate(right)
    keys, inverse = np.unique(left * H.n + right, return_inverse=True)
    merged = np.bincount(inverse, weights=np.concatenate(weight))
    edges = [
        (w, (u,) if u == v else (u, v))
        for u, v, w in zip((keys // H.n).tolist(), (keys % H.n).tolist(), merged.tolist())
    ]
    LOG.debug('clique expansion: %d pairs merged into %d edges', needed, len(edges))
    result = build_hypergraph(H.n, edges)
    return Hypergraph(result.n, result.edge_ptr, result.edge_members, result.weights, H.original_ids)


def star_expansion(H: Hypergraph, normalized: bool = False) -> StarExpansion:
    """
        I return the star expansion of H.

        Edge e becomes the new vertex n + e joined to each member by an edge
        of weight w(e), or w(e)/|e| when normalized.
    """
    hubs = H.n + H.edge_of_entry
    weight = H.weights[H.edge_of_entry]
    if normalized:
        weight = weight / H.sizes[H.edge_of_entry]
    edges = zip(weight.tolist(), zip(H.edge_members.tolist(), hubs.tolist()))
    graph = build_hypergraph(H.n + H.m, edges)
    mask = np.zeros(graph.n, dtype=bool)
    mask[:H.n] = True
    return StarExpansion(graph, _frozen(mask))


def stats(H: Hypergraph) -> Stats:
    """
        I return n, m, the average degree and the average edge size, the
        averages as exact fractions of the float weights.
    """
    volume = sum(
        (Fraction(float(w)) * int(size) for w, size in zip(H.weights, H.sizes)),
        Fraction(0),
    )
    return Stats(H.n, H.m, volume / H.n, Fraction(H.total_size, H.m))


def convert_bipartite(edge_list: Sequence, line_numbers: Optional[Sequence[int]] = None) -> Hypergraph:
    """
        I turn a bipartite (left, right) edge list into a hypergraph.

        Left ids become vertices, renumbered densely from 0 in ascending order.
        Each right id becomes one unit weight edge holding its left neighbours.
        Duplicate pairs count once and singleton groups are kept.

        Args:
            edge_list: sequence of (left, right) with positive integer ids,
                given as ints or strings
            line_numbers: source line of each pair, for error messages

        Returns:
            Hypergraph
    """
    groups = {}
    lefts = set()
    for index, pair in enumerate(edge_list):
        line_no = line_numbers[index] if line_numbers is not None else index + 1
        try:
            left, right = (int(token) for token in pair)
        except (TypeError, ValueError) as err_msg:
            raise MalformedLine(line_no, 'expected two integer ids') from err_msg
        if left < 1 or right < 1:
            raise MalformedLine(line_no, 'ids must be positive')
        groups.setdefault(right, set()).add(left)
        lefts.add(left)
    if not lefts:
        raise EmptySubset('bipartite edge list is empty')
    dense = {left: index for index, left in enumerate(sorted(lefts))}
    edges = [
        (1.0, sorted(dense[left] for left in groups[right]))
        for right in sorted(groups)
    ]
    LOG.info('converted %d left and %d right vertices', len(dense), len(edges))
    return build_hypergraph(len(dense), edges)


def _data_lines(lines: Iterable[str], comments: str) -> Iterator:
    for line_no, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text[0] in comments:
            continue
        yield line_no, text.split()


def parse_bipartite(lines: Iterable[str]) -> Hypergraph:
    """
        I parse a KONECT style ``out.*`` body, '%' and '#' start comments and
        columns after the first two are ignored.
    """
    pairs, numbers = [], []
    for line_no, tokens in _data_lines(lines, '%#'):
        if len(tokens) < 2:
            raise MalformedLine(line_no, 'expected two integer ids')
        pairs.append(tokens[:2])
        numbers.append(line_no)
    return convert_bipartite(pairs, numbers)


def read_bipartite(path: str) -> Hypergraph:
    """
        I read and convert a bipartite edge list file.
    """
    return parse_bipartite(hyperppr.common.load_file(path).splitlines())


def parse_hypergraph(lines: Iterable[str], drop_isolated: bool = False) -> Hypergraph:
    """
        I parse the hypergraph text format.

        The first data line is "n m", then m lines "w v1 v2 ... vk".  Lines
        starting with '#' are comments.

        Returns:
            Hypergraph
    """
    header = None
    edges = []
    last = 0
    for line_no, tokens in _data_lines(lines, '#'):
        last = line_no
        if header is None:
            try:
                header = tuple(int(token) for token in tokens)
            except ValueError as err_msg:
                raise MalformedLine(line_no, 'header must be "n m"') from err_msg
            if len(header) != 2 or header[0] < 1 or header[1] < 0:
                raise MalformedLine(line_no, 'header must be "n m"')
            continue
        if len(edges) == header[1]:
            raise MalformedLine(line_no, f'more than the {header[1]} declared edges')
        if len(tokens) < 2:
            raise MalformedLine(line_no, 'edge needs a weight and at least one vertex')
        try:
            edges.append((float(tokens[0]), [int(token) for token in tokens[1:]]))
        except ValueError as err_msg:
            raise MalformedLine(line_no, 'edge line is not numeric') from err_msg
    if header is None:
        raise MalformedLine(last + 1, 'missing "n m" header')
    if len(edges) != header[1]:
        raise MalformedLine(last + 1, f'expected {header[1]} edges, found {len(edges)}')
    return build_hypergraph(header[0], edges, drop_isolated=drop_isolated)


def read_hypergraph(path: str, drop_isolated: bool = False) -> Hypergraph:
    """
        I read a hypergraph file.
    """
    return parse_hypergraph(hyperppr.common.load_file(path).splitlines(), drop_isolated)


def serialize_hypergraph(H: Hypergraph) -> str:
    """
        I return H in the text format, weights with 17 significant digits.
    """
    lines = [f'{H.n} {H.m}']
    for edge in H.edges:
        lines.append(' '.join([f'{edge.weight:.17g}'] + [str(v) for v in edge.members]))
    return '\n'.join(lines) + '\n'


def write_hypergraph(H: Hypergraph, path: str) -> None:
    """
        I write H to a file in the text format.
    """
    with open(path, 'w', encoding='utf8') as file_handler:
        file_handler.write(serialize_hypergraph(H))
