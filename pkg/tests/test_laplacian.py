"""
    Tests of the subgradient selection, the Laplacian, the induced graph and
    the energy.
"""


import numpy as np
import pytest

from hyperppr.core import build_hypergraph
from hyperppr.diffusion import graph_adjacency
from hyperppr.errors import InvalidParameter
from hyperppr.laplacian import (
    apply_laplacian,
    energy_Q,
    induced_graph,
    quadratic_form,
    select_subgradient,
    selection_from_shares,
)
from hyperppr.synthetic import random_hypergraph


@pytest.fixture
def triple():
    return build_hypergraph(3, [(1, [0, 1, 2])])


def test_selection_distinct_extrema(triple):
    selection = select_subgradient(triple, [3.0, 1.0, 2.0])
    assert selection.argmax_set(triple, 0) == {0}
    assert selection.argmin_set(triple, 0) == {1}
    assert selection.gap.tolist() == [2.0]
    assert not selection.flat[0]


def test_selection_tied_maximum(triple):
    selection = select_subgradient(triple, [1.0, 1.0, 0.0])
    assert selection.argmax_set(triple, 0) == {0, 1}
    assert selection.argmin_set(triple, 0) == {2}
    assert selection.gap.tolist() == [1.0]
    assert selection.top_share.tolist() == [0.5, 0.5, 0.0]


def test_selection_constant_edge_is_flat(triple):
    selection = select_subgradient(triple, [2.0, 2.0, 2.0])
    assert selection.flat[0]
    assert selection.gap.tolist() == [0.0]
    assert selection.argmax_set(triple, 0) == selection.argmin_set(triple, 0) == {0, 1, 2}
    assert not selection.direction().any()


def test_selection_tie_tolerance(triple):
    selection = select_subgradient(triple, [1.0, 0.999, 0.0], tie_tol=0.01)
    assert selection.argmax_set(triple, 0) == {0, 1}
    with pytest.raises(InvalidParameter):
        select_subgradient(triple, [1.0, 0.0, 0.0], tie_tol=-1.0)


def test_tie_tolerance_keeps_the_true_spread(triple):
    z = np.array([1.0, 0.99, 0.985])
    selection = select_subgradient(triple, z, tie_tol=0.01)
    assert not selection.flat[0]
    assert selection.gap[0] == pytest.approx(0.015)
    assert selection.argmax_set(triple, 0) == {0, 1}
    assert selection.argmin_set(triple, 0) == {1, 2}
    assert apply_laplacian(triple, z, tie_tol=0.01) == pytest.approx([0.00375, 0.0, -0.00375])


def test_tie_tolerance_below_the_spread_of_a_single_peak(triple):
    z = np.array([0.0, 0.015, 0.0])
    selection = select_subgradient(triple, z, tie_tol=0.01)
    assert not selection.flat[0]
    assert selection.gap[0] == pytest.approx(0.015)
    assert selection.argmax_set(triple, 0) == {1}
    assert selection.argmin_set(triple, 0) == {0, 2}
    assert apply_laplacian(triple, z, tie_tol=0.01) == pytest.approx([-0.0075, 0.015, -0.0075])


def test_induced_graph_with_a_member_in_both_sets(triple):
    graph = induced_graph(triple, [1.0, 0.99, 0.985], tie_tol=0.01)
    assert list(zip(graph.pair_u.tolist(), graph.pair_v.tolist())) == [(0, 1), (0, 2), (1, 2)]
    assert graph.pair_w.tolist() == [0.25, 0.25, 0.25]
    assert graph.loops.tolist() == [0.5, 0.5, 0.5]
    assert graph.degrees() == pytest.approx(triple.degrees)


def test_induced_graph_preserves_degrees_under_tie_tolerance():
    rng = np.random.default_rng(9)
    for _ in range(20):
        H = random_hypergraph(int(rng.integers(3, 20)), 30, 6, rng, integer_weights=False)
        z = rng.integers(0, 40, size=H.n) / 40.0
        graph = induced_graph(H, z, tie_tol=0.03)
        assert graph.degrees() == pytest.approx(H.degrees)
        assert abs(graph.apply(z).sum()) <= 1e-12 * H.volume


def test_laplacian_is_positively_homogeneous():
    rng = np.random.default_rng(10)
    for _ in range(20):
        H = random_hypergraph(int(rng.integers(3, 20)), 30, 6, rng, integer_weights=False)
        z = rng.normal(size=H.n)
        base = apply_laplacian(H, z)
        for scale in (2.0, 0.5, 8.0):
            assert apply_laplacian(H, scale * z).tolist() == (scale * base).tolist()
        assert apply_laplacian(H, 3.7 * z) == pytest.approx(3.7 * base, abs=1e-12 * np.abs(base).max())


def test_apply_laplacian_single_edge(triple):
    assert apply_laplacian(triple, [3.0, 1.0, 2.0]).tolist() == [2.0, -2.0, 0.0]


def test_apply_laplacian_normalized_divides_by_degree():
    H = build_hypergraph(3, [(2, [0, 1, 2]), (1, [1, 2])])
    x = np.array([4.0, 3.0, 6.0])
    assert apply_laplacian(H, x, normalized=True).tolist() == apply_laplacian(H, x / H.degrees).tolist()


def test_apply_laplacian_conserves_mass():
    rng = np.random.default_rng(1)
    for _ in range(30):
        H = random_hypergraph(int(rng.integers(3, 30)), 40, 6, rng, integer_weights=False)
        x = rng.normal(size=H.n)
        y = apply_laplacian(H, x, normalized=bool(rng.integers(2)))
        assert abs(y.sum()) <= 1e-10 * max(1.0, np.abs(x).sum())


def test_apply_laplacian_matches_graph_laplacian():
    rng = np.random.default_rng(2)
    for _ in range(20):
        G = random_hypergraph(int(rng.integers(2, 17)), 30, 2, rng, integer_weights=False)
        adjacency = graph_adjacency(G).toarray()
        laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
        x = rng.normal(size=G.n)
        assert np.abs(apply_laplacian(G, x) - laplacian @ x).max() <= 1e-12 * max(1.0, np.abs(x).max()) * G.m


def test_quadratic_form_matches_inner_product():
    rng = np.random.default_rng(4)
    H = random_hypergraph(15, 25, 5, rng, integer_weights=False)
    z = rng.normal(size=H.n)
    assert quadratic_form(H, z) == pytest.approx(float(z @ apply_laplacian(H, z)))


def test_induced_graph_example(triple):
    graph = induced_graph(triple, [3.0, 1.0, 2.0])
    assert list(zip(graph.pair_u.tolist(), graph.pair_v.tolist(), graph.pair_w.tolist())) == [(0, 1, 1.0)]
    assert graph.loops.tolist() == [0.0, 0.0, 1.0]


def test_induced_graph_preserves_degrees_and_action():
    rng = np.random.default_rng(6)
    for _ in range(20):
        H = random_hypergraph(int(rng.integers(3, 20)), 30, 6, rng)
        z = rng.integers(0, 4, size=H.n).astype(float)
        graph = induced_graph(H, z)
        assert graph.degrees() == pytest.approx(H.degrees)
        assert graph.apply(z) == pytest.approx(apply_laplacian(H, z), abs=1e-12)
        assert graph.laplacian_matrix() @ z == pytest.approx(graph.apply(z), abs=1e-12)


def test_selection_from_shares_follows_explicit_split(triple):
    selection = selection_from_shares(
        triple, np.array([1.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.25, 0.75])
    )
    assert selection.argmin_set(triple, 0) == {1, 2}
    z = np.array([2.0, 1.0, 1.0])
    assert apply_laplacian(triple, z, selection=selection).tolist() == [1.0, -0.25, -0.75]
    graph = induced_graph(triple, z, selection=selection)
    assert graph.pair_w.tolist() == [0.25, 0.75]
    assert graph.degrees() == pytest.approx([1.0, 1.0, 1.0])


def test_energy_examples():
    H = build_hypergraph(3, [(1, [0, 1, 2]), (2, [1, 2])])
    root = np.sqrt(H.degrees)
    constant = 0.7 * root
    assert energy_Q(H, constant, constant, 0.4) == pytest.approx(0.0, abs=1e-15)
    x = np.array([1.0, -2.0, 0.5])
    s = np.array([0.0, 1.0, 1.0])
    assert energy_Q(H, x, s, 1.0) == 0.5 * float(((x - s) ** 2).sum())
    full = energy_Q(H, x, s, 0.5, flow_scaled=False)
    half = energy_Q(H, x, s, 0.5)
    assert full - half == pytest.approx(0.25 * quadratic_form(H, x / root))
    with pytest.raises(InvalidParameter):
        energy_Q(H, x, s, 0.0)
