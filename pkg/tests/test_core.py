"""
    Tests of the hypergraph model, measures, expansions and file formats.
"""


from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from hyperppr.core import (
    Hyperedge,
    build_hypergraph,
    chi,
    clique_expansion,
    connectivity,
    convert_bipartite,
    interior,
    measure,
    parse_bipartite,
    parse_hypergraph,
    pi,
    read_bipartite,
    read_hypergraph,
    serialize_hypergraph,
    star_expansion,
    stats,
    subhypergraph,
    write_hypergraph,
)
from hyperppr.errors import (
    DegenerateSubset,
    DuplicateMember,
    EmptyEdge,
    EmptySubset,
    ExpansionBudgetExceeded,
    InputError,
    IsolatedVertex,
    MalformedLine,
    NonPositiveWeight,
    VertexOutOfRange,
)
from hyperppr.synthetic import random_hypergraph


def _edge_map(H):
    return {edge.members: edge.weight for edge in H.edges}


def test_build_degrees_and_volume(f1):
    assert f1.n == 4
    assert f1.m == 2
    assert f1.degrees.tolist() == [1.0, 1.0, 2.0, 1.0]
    assert f1.volume == 5.0
    assert f1.total_size == 5
    assert not f1.is_graph
    assert list(f1.edges) == [Hyperedge(1.0, (0, 1, 2)), Hyperedge(1.0, (2, 3))]
    assert f1.incident_edges(2).tolist() == [0, 1]


def test_build_sorts_members():
    H = build_hypergraph(3, [(2, [2, 0, 1])])
    assert H.members(0).tolist() == [0, 1, 2]


@pytest.mark.parametrize('n, edges, error', [
    (2, [(1, [0, 0])], DuplicateMember),
    (3, [(1, [0, 1])], IsolatedVertex),
    (2, [(1, [])], EmptyEdge),
    (2, [(0, [0, 1])], NonPositiveWeight),
    (2, [(-1.5, [0, 1])], NonPositiveWeight),
    (2, [(1, [0, 2])], VertexOutOfRange),
])
def test_build_rejects(n, edges, error):
    with pytest.raises(error):
        build_hypergraph(n, edges)


def test_isolated_vertex_is_named():
    with pytest.raises(IsolatedVertex) as err:
        build_hypergraph(3, [(1, [0, 1])])
    assert err.value.vertex == 2
    assert isinstance(err.value, InputError)


def test_drop_isolated_reindexes():
    H = build_hypergraph(5, [(1, [0, 3]), (2, [3, 4])], drop_isolated=True)
    assert H.n == 3
    assert H.original_ids.tolist() == [0, 3, 4]
    assert [edge.members for edge in H.edges] == [(0, 1), (1, 2)]


def test_arrays_are_read_only(f1):
    with pytest.raises(ValueError):
        f1.weights[0] = 5.0


def test_measure_examples(f1):
    assert measure(f1, {0, 1}) == (2.0, 1.0, 0.5)
    assert measure(f1, [3]) == (1.0, 1.0, 1.0)
    with pytest.raises(DegenerateSubset):
        measure(f1, range(4))
    with pytest.raises(DegenerateSubset):
        measure(f1, [])


def test_measure_is_symmetric_and_bounded():
    rng = np.random.default_rng(3)
    for _ in range(20):
        H = random_hypergraph(int(rng.integers(3, 10)), 12, 4, rng)
        for size in range(1, H.n):
            for S in combinations(range(H.n), size):
                inside = measure(H, S)
                outside = measure(H, sorted(set(range(H.n)) - set(S)))
                assert inside.cut == outside.cut
                assert inside.conductance == outside.conductance
                assert 0.0 <= inside.conductance <= 1.0
            if H.n > 7:
                break


def test_interior(f1):
    assert interior(f1, {0, 1, 2}) == {0, 1}
    assert interior(f1, range(4)) == {0, 1, 2, 3}
    assert interior(f1, {2}) == frozenset()


def test_connectivity(f1):
    result = connectivity(f1)
    assert result.components == (frozenset({0, 1, 2, 3}),)
    H = build_hypergraph(4, [(1, [0, 1]), (1, [2, 3])])
    result = connectivity(H)
    assert len(result.components) == 2
    assert result.largest == {0, 1}


def test_connectivity_matches_star_reachability():
    H = build_hypergraph(7, [(1, [0, 1, 2]), (1, [3, 4]), (2, [4, 5]), (1, [6])])
    expanded = star_expansion(H).graph
    groups = {frozenset(group & set(range(H.n))) for group in connectivity(expanded).components}
    assert groups == set(connectivity(H).components)


def test_pi_and_chi(f1):
    assert pi(f1, range(4)).tolist() == pytest.approx([0.2, 0.2, 0.4, 0.2])
    assert pi(f1, [2]).tolist() == chi(f1, 2).tolist() == [0.0, 0.0, 1.0, 0.0]
    assert pi(f1, [0, 3]).tolist() == pytest.approx([0.5, 0.0, 0.0, 0.5])
    with pytest.raises(EmptySubset):
        pi(f1, [])
    with pytest.raises(VertexOutOfRange):
        chi(f1, 4)


def test_clique_expansion(f1):
    assert _edge_map(clique_expansion(f1)) == {(0, 1): 1.0, (0, 2): 1.0, (1, 2): 1.0, (2, 3): 1.0}
    normalized = _edge_map(clique_expansion(f1, normalized=True))
    assert normalized == pytest.approx({(0, 1): 1 / 3, (0, 2): 1 / 3, (1, 2): 1 / 3, (2, 3): 1.0})


def test_clique_expansion_merges_parallel_pairs():
    H = build_hypergraph(3, [(1, [0, 1, 2]), (2, [0, 1])])
    assert _edge_map(clique_expansion(H)) == {(0, 1): 3.0, (0, 2): 1.0, (1, 2): 1.0}


def test_clique_expansion_is_identity_on_graphs():
    H = build_hypergraph(3, [(1.5, [0, 1]), (2, [1, 2])])
    assert _edge_map(clique_expansion(H)) == _edge_map(H)


def test_clique_expansion_budget():
    H = build_hypergraph(1000, [(1, range(1000))])
    with pytest.raises(ExpansionBudgetExceeded) as err:
        clique_expansion(H, budget=10000)
    assert err.value.needed == 1000 * 999 // 2


def test_star_expansion(f1):
    expanded = star_expansion(f1, normalized=True)
    assert expanded.graph.n == 6
    assert expanded.original_mask.tolist() == [True, True, True, True, False, False]
    assert _edge_map(expanded.graph) == pytest.approx({
        (0, 4): 1 / 3, (1, 4): 1 / 3, (2, 4): 1 / 3, (2, 5): 0.5, (3, 5): 0.5,
    })
    raw = star_expansion(build_hypergraph(2, [(2, [0, 1])]))
    assert _edge_map(raw.graph) == {(0, 2): 2.0, (1, 2): 2.0}


def test_stats(f1):
    result = stats(f1)
    assert result == (4, 2, Fraction(5, 4), Fraction(5, 2))
    assert str(result) == 'n=4 m=2 avg_deg=1.25 avg_size=2.5'
    assert stats(build_hypergraph(2, [(1, [0, 1])])) == (2, 1, 1, 2)
    assert result.to_dict() == {'n': 4, 'm': 2, 'avg_degree': 1.25, 'avg_edge_size': 2.5}


def test_subhypergraph_keeps_inner_edges(f1):
    sub = subhypergraph(f1, [0, 1, 2])
    assert sub.n == 3
    assert [edge.members for edge in sub.edges] == [(0, 1, 2)]
    with pytest.raises(IsolatedVertex):
        subhypergraph(f1, [0, 3])


def test_subhypergraph_composes_original_ids():
    H = build_hypergraph(5, [(1, [0, 1]), (1, [1, 2]), (1, [3, 4])])
    sub = subhypergraph(H, [1, 2])
    assert sub.original_ids.tolist() == [1, 2]
    dropped = subhypergraph(H, [0, 1, 3], drop_isolated=True)
    assert dropped.original_ids.tolist() == [0, 1]


def test_convert_bipartite():
    H = convert_bipartite([(1, 1), (2, 1), (2, 2), (3, 2)])
    assert list(H.edges) == [Hyperedge(1.0, (0, 1)), Hyperedge(1.0, (1, 2))]
    single = convert_bipartite([(1, 1), (1, 1)])
    assert list(single.edges) == [Hyperedge(1.0, (0,))]


def test_convert_bipartite_rejects():
    with pytest.raises(MalformedLine) as err:
        convert_bipartite([('1', 'x')])
    assert err.value.line_no == 1
    with pytest.raises(MalformedLine):
        convert_bipartite([(0, 1)])


def test_parse_bipartite_skips_comments():
    H = parse_bipartite(['% header', '# note', '', '1 1 5 1234', '2 1', '2 2', '3 2'])
    assert [edge.members for edge in H.edges] == [(0, 1), (1, 2)]
    with pytest.raises(MalformedLine) as err:
        parse_bipartite(['% header', '1'])
    assert err.value.line_no == 2


def test_read_bipartite(bipartite_path):
    H = read_bipartite(bipartite_path)
    assert H.n == 5
    assert connectivity(H).largest == {0, 1, 2}


def test_parse_hypergraph(f1_path):
    H = read_hypergraph(f1_path)
    assert H.n == 4
    assert [edge.members for edge in H.edges] == [(0, 1, 2), (2, 3)]
    assert H.degrees.tolist() == [1.0, 1.0, 2.0, 1.0]


@pytest.mark.parametrize('lines', [
    ['4 2', '1 0 1 2'],
    ['4 1', '1 0 1 2', '1 2 3'],
    ['4', '1 0 1 2'],
    ['x y'],
    ['2 1', 'one 0 1'],
    ['2 1', '1'],
    [],
])
def test_parse_hypergraph_rejects(lines):
    with pytest.raises(MalformedLine):
        parse_hypergraph(lines)


def test_serialize_round_trip(tmp_path):
    rng = np.random.default_rng(9)
    H = random_hypergraph(12, 20, 5, rng, integer_weights=False)
    path = str(tmp_path / 'random.hg')
    write_hypergraph(H, path)
    again = read_hypergraph(path)
    assert list(again.edges) == list(H.edges)
    assert serialize_hypergraph(again) == serialize_hypergraph(H)


def test_serialize_format(f1):
    assert serialize_hypergraph(f1) == '4 2\n1 0 1 2\n1 2 3\n'
