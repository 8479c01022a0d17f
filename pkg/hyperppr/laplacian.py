#!env python
"""
    I manage the hypergraph Laplacian.

    For a vector z every edge picks its largest and smallest members (S_max
    and S_min).  The edge then pushes flow w(e) * gap(e) from S_max to S_min,
    spread over the members by the selection shares.  The default shares are
    uniform, which is the averaged choice of b_e on the argmax face.
"""


# python libraries
import logging
from dataclasses import dataclass
from typing import Optional


import numpy as np
from scipy import sparse


from hyperppr.core import Hypergraph, as_vector
from hyperppr.errors import InvalidParameter


LOG = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class EdgeSelection:
    """
        I am one subgradient choice, stored per incidence entry.

        at_max / at_min mark S_max and S_min.  top_share and bottom_share say
        how the edge's flow is spread over them, each summing to 1 on a
        non-flat edge.  Flat edges (gap 0) have S_max = S_min = e and carry
        no flow, so both shares are 0 there.
    """
    gap: np.ndarray
    flat: np.ndarray
    at_max: np.ndarray
    at_min: np.ndarray
    top_share: np.ndarray
    bottom_share: np.ndarray

    def direction(self) -> np.ndarray:
        """ the entries of b_e, flattened over the incidence """
        return self.top_share - self.bottom_share

    def projection(self, H: Hypergraph, z: np.ndarray) -> np.ndarray:
        """
            I return b_e^T z for every edge.
        """
        return np.bincount(
            H.edge_of_entry,
            weights=self.direction() * z[H.edge_members],
            minlength=H.m,
        )

    def argmax_set(self, H: Hypergraph, edge: int) -> frozenset:
        """ S_max of one edge """
        window = slice(H.edge_ptr[edge], H.edge_ptr[edge + 1])
        return frozenset(int(v) for v in H.edge_members[window][self.at_max[window]])

    def argmin_set(self, H: Hypergraph, edge: int) -> frozenset:
        """ S_min of one edge """
        window = slice(H.edge_ptr[edge], H.edge_ptr[edge + 1])
        return frozenset(int(v) for v in H.edge_members[window][self.at_min[window]])


def edge_extrema(H: Hypergraph, z: np.ndarray) -> tuple:
    """
        I return the per edge maximum and minimum of z.
    """
    values = z[H.edge_members]
    starts = H.edge_ptr[:-1]
    return np.maximum.reduceat(values, starts), np.minimum.reduceat(values, starts)


def selection_from_shares(H: Hypergraph, gap: np.ndarray, top_share: np.ndarray,
                          bottom_share: np.ndarray) -> EdgeSelection:
    """
        I wrap explicit flow shares in an EdgeSelection.  Edges whose shares
        are all zero are flat.
    """
    top_mass = np.bincount(H.edge_of_entry, weights=top_share, minlength=H.m)
    flat = top_mass == 0
    flat_entry = flat[H.edge_of_entry]
    return EdgeSelection(
        gap=np.where(flat, 0.0, gap),
        flat=flat,
        at_max=(top_share > 0) | flat_entry,
        at_min=(bottom_share > 0) | flat_entry,
        top_share=top_share,
        bottom_share=bottom_share,
    )


def select_subgradient(H: Hypergraph, z, tie_tol: float = 0.0) -> EdgeSelection:
    """
        I pick the averaged subgradient for z.

        S_max(e) holds the members within tie_tol of the edge maximum and
        S_min(e) those within tie_tol of the minimum, so under a positive
        tie_tol a member can sit in both.  The gap is always the true spread
        and only an edge with no spread at all is flat.

        Args:
            H: Hypergraph
            z: the compared vector
            tie_tol: non-negative tie tolerance

        Returns:
            EdgeSelection
    """
    if tie_tol < 0:
        raise InvalidParameter(f'tie_tol must be non-negative, got {tie_tol}')
    z = as_vector(H, z)
    high, low = edge_extrema(H, z)
    flat = high == low
    values = z[H.edge_members]
    owner = H.edge_of_entry
    flat_entry = flat[owner]
    at_max = values >= high[owner] - tie_tol
    at_min = values <= low[owner] + tie_tol
    top_count = np.bincount(owner, weights=at_max, minlength=H.m)
    bottom_count = np.bincount(owner, weights=at_min, minlength=H.m)
    top_share = np.where(at_max & ~flat_entry, 1.0 / top_count[owner], 0.0)
    bottom_share = np.where(at_min & ~flat_entry, 1.0 / bottom_count[owner], 0.0)
    return EdgeSelection(
        gap=high - low,
        flat=flat,
        at_max=at_max,
        at_min=at_min,
        top_share=top_share,
        bottom_share=bottom_share,
    )


def apply_laplacian(H: Hypergraph, x, normalized: bool = False, tie_tol: float = 0.0,
                    selection: Optional[EdgeSelection] = None) -> np.ndarray:
    """
        I return L_H(x), or L_H(D^-1 x) when normalized.

        Args:
            H: Hypergraph
            x: vertex vector
            normalized: compare z = D^-1 x instead of x
            tie_tol: tie tolerance for the averaged selection
            selection: use these shares instead of selecting from z

        Returns:
            vertex vector y with 1^T y = 0
    """
    x = as_vector(H, x)
    z = x / H.degrees if normalized else x
    if selection is None:
        selection = select_subgradient(H, z, tie_tol)
    flow = H.weights * selection.projection(H, z)
    return np.bincount(
        H.edge_members,
        weights=flow[H.edge_of_entry] * selection.direction(),
        minlength=H.n,
    )


@dataclass(frozen=True, eq=False)
class InducedGraph:
    """
        I am the graph H_z a selection induces.

        Pair (u, v) carries w(e) * top_share(u) * bottom_share(v) summed over
        edges; whatever an incidence entry does not send through a pair stays
        on the vertex as a self-loop, so every degree matches H.
    """
    n: int
    pair_u: np.ndarray
    pair_v: np.ndarray
    pair_w: np.ndarray
    loops: np.ndarray

    def degrees(self) -> np.ndarray:
        """ vertex degrees, a loop counted once """
        return (
            np.bincount(self.pair_u, weights=self.pair_w, minlength=self.n)
            + np.bincount(self.pair_v, weights=self.pair_w, minlength=self.n)
            + self.loops
        )

    def laplacian_matrix(self) -> sparse.csr_matrix:
        """ the graph Laplacian D - A, loops cancel """
        adjacency = sparse.coo_matrix(
            (self.pair_w, (self.pair_u, self.pair_v)), shape=(self.n, self.n)
        ).tocsr()
        adjacency = adjacency + adjacency.T
        return (sparse.diags(np.asarray(adjacency.sum(axis=1)).ravel()) - adjacency).tocsr()

    def apply(self, z) -> np.ndarray:
        """ I return (D - A) z """
        diff = self.pair_w * (z[self.pair_u] - z[self.pair_v])
        return (
            np.bincount(self.pair_u, weights=diff, minlength=self.n)
            - np.bincount(self.pair_v, weights=diff, minlength=self.n)
        )

    def flow_out_of(self, mask: np.ndarray, scale: np.ndarray) -> float:
        """
            I return the sum over pairs leaving the mask of w(uv) * scale(u),
            taken in both directions.
        """
        leaving = mask[self.pair_u] & ~mask[self.pair_v]
        entering = ~mask[self.pair_u] & mask[self.pair_v]
        return float(
            (self.pair_w[leaving] * scale[self.pair_u[leaving]]).sum()
            + (self.pair_w[entering] * scale[self.pair_v[entering]]).sum()
        )


def entry_pairs(H: Hypergraph, tops: np.ndarray, bottoms: np.ndarray) -> tuple:
    """
        I pair every top entry with every bottom entry of the same edge and
        return the two aligned arrays of incidence entries.
    """
    owner = H.edge_of_entry
    bottom_order = bottoms[np.argsort(owner[bottoms], kind='stable')]
    first = np.searchsorted(owner[bottom_order], owner[tops], side='left')
    count = np.searchsorted(owner[bottom_order], owner[tops], side='right') - first
    top_entry = np.repeat(tops, count)
    offsets = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count)
    return top_entry, bottom_order[np.repeat(first, count) + offsets]


def induced_graph(H: Hypergraph, z, tie_tol: float = 0.0,
                  selection: Optional[EdgeSelection] = None) -> InducedGraph:
    """
        I return the induced graph of z, or of an explicit selection.
    """
    z = as_vector(H, z)
    if selection is None:
        selection = select_subgradient(H, z, tie_tol)
    owner = H.edge_of_entry
    top_entry, bottom_entry = entry_pairs(
        H, np.flatnonzero(selection.top_share > 0), np.flatnonzero(selection.bottom_share > 0)
    )
    weight = (
        H.weights[owner[top_entry]]
        * selection.top_share[top_entry]
        * selection.bottom_share[bottom_entry]
    )
    left = H.edge_members[top_entry]
    right = H.edge_members[bottom_entry]
    # a member in both S_max and S_min keeps its own pair as a loop
    own = left == right
    keys, inverse = np.unique(np.minimum(left, right)[~own] * H.n + np.maximum(left, right)[~own],
                              return_inverse=True)
    merged = np.bincount(inverse, weights=weight[~own], minlength=len(keys))
    loops = np.bincount(
        H.edge_members,
        weights=H.weights[owner] * (1.0 - selection.top_share - selection.bottom_share),
        minlength=H.n,
    ) + np.bincount(left[own], weights=2.0 * weight[own], minlength=H.n)
    return InducedGraph(
        n=H.n,
        pair_u=keys // H.n,
        pair_v=keys % H.n,
        pair_w=merged,
        loops=loops,
    )


def quadratic_form(H: Hypergraph, z, tie_tol: float = 0.0) -> float:
    """
        I return z^T L_H(z) in closed form, the sum of w(e) * gap(e)^2.
    """
    selection = select_subgradient(H, z, tie_tol)
    return float((H.weights * selection.gap ** 2).sum())


def energy_Q(H: Hypergraph, x_tilde, s_tilde, beta: float, flow_scaled: bool = True) -> float:
    """
        I return the energy whose gradient flow the diffusion follows.

        Q = (beta/2) |x~ - s~|^2 + c * sum_e w(e) gap(e)^2 with z = D^-1/2 x~.
        With flow_scaled c = (1 - beta)/2 and the Euler drift is exactly the
        negative gradient; otherwise c = 1 - beta as in the displayed form.

        Args:
            H: Hypergraph
            x_tilde: D^-1/2 scaled state
            s_tilde: D^-1/2 scaled seed
            beta: in (0, 1]
            flow_scaled: pick the constant c

        Returns:
            float, never negative
    """
    if not 0 < beta <= 1:
        raise InvalidParameter(f'beta must lie in (0, 1], got {beta}')
    x_tilde = as_vector(H, x_tilde)
    s_tilde = as_vector(H, s_tilde)
    quadratic = quadratic_form(H, x_tilde / np.sqrt(H.degrees))
    scale = (1.0 - beta) / 2 if flow_scaled else 1.0 - beta
    return float(beta / 2 * np.sum((x_tilde - s_tilde) ** 2) + scale * quadratic)
