#!env python
"""
    I manage sweep cuts.

    Vertices are ordered by x(v)/d_v descending, ties by ascending id, and
    every prefix S_j for j = 1 .. n-1 is scored by its conductance.  I also
    hold the Lovasz-Simonovits curve and the diagnostics built on it.
"""


# python libraries
import csv
import logging
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, TextIO


import numpy as np


from hyperppr.core import Hypergraph, Subset, as_mask, as_vector, measure
from hyperppr.diffusion import exact_ppr, graph_adjacency, graph_ppr_exact
from hyperppr.errors import InvalidParameter, NotADistribution
from hyperppr.report import LemmaReport


LOG = logging.getLogger(__name__)


class SweepResult(NamedTuple):
    """ the best prefix of a sweep """
    members: frozenset
    conductance: float
    j: int
    volume: float


def sweep_order(x: np.ndarray, degrees: np.ndarray) -> np.ndarray:
    """
        I return the vertices by x/d descending, ties by ascending id.
    """
    ratio = x / degrees
    return np.lexsort((np.arange(len(x)), -ratio))


@dataclass(frozen=True, eq=False)
class SweepProfile:
    """
        I am a sweep: the order and per prefix volume, cut and conductance.

        Arrays are indexed by j - 1 for j = 1 .. n-1.
    """
    order: np.ndarray
    volumes: np.ndarray
    cuts: np.ndarray
    conductances: np.ndarray
    total_volume: float

    def ell(self, mu: float) -> int:
        """
            I return l_mu, the first j with vol(S_j) >= mu vol(V), capped at n-1.
        """
        if not 0 < mu <= 1:
            raise InvalidParameter(f'mu must lie in (0, 1], got {mu}')
        if not len(self.volumes):
            return 0
        index = int(np.searchsorted(self.volumes, mu * self.total_volume, side='left'))
        return min(index + 1, len(self.volumes))

    def prefix(self, j: int) -> frozenset:
        """ S_j """
        return frozenset(int(v) for v in self.order[:j])

    def position(self, vertex: int) -> int:
        """ the j at which the vertex joins the prefix """
        return int(np.flatnonzero(self.order == vertex)[0]) + 1

    def rows(self) -> list:
        """ one dict per prefix """
        return [
            {
                'j': j + 1,
                'vertex': int(self.order[j]),
                'vol': float(self.volumes[j]),
                'cut': float(self.cuts[j]),
                'phi': float(self.conductances[j]),
            }
            for j in range(len(self.volumes))
        ]

    def write_csv(self, stream: TextIO) -> None:
        """
            I write the profile as csv with header j,vertex,vol,cut,phi.
        """
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(['j', 'vertex', 'vol', 'cut', 'phi'])
        for row in self.rows():
            writer.writerow([row['j'], row['vertex'], repr(row['vol']), repr(row['cut']), repr(row['phi'])])


def write_profile_csv(profile: SweepProfile, stream: TextIO) -> None:
    """ I write the profile to the stream as csv. """
    profile.write_csv(stream)


def sweep_profile(H: Hypergraph, x, degrees: Optional[np.ndarray] = None) -> SweepProfile:
    """
        I return the sweep profile of x.

        An edge is cut by S_j exactly when its first member enters at or
        before j and its last member after j, so the cuts come from one
        difference array over the entry positions of every edge.

        Args:
            H: Hypergraph
            x: vertex vector
            degrees: denominators for the ordering, H.degrees by default;
                volumes and cuts always use H

        Returns:
            SweepProfile
    """
    x = as_vector(H, x)
    order = sweep_order(x, H.degrees if degrees is None else degrees)
    position = np.empty(H.n, dtype=np.int64)
    position[order] = np.arange(1, H.n + 1)
    entry = position[H.edge_members]
    first = np.minimum.reduceat(entry, H.edge_ptr[:-1])
    last = np.maximum.reduceat(entry, H.edge_ptr[:-1])
    change = np.bincount(first, weights=H.weights, minlength=H.n + 1)
    change -= np.bincount(last, weights=H.weights, minlength=H.n + 1)
    cuts = np.cumsum(change)[1:H.n]
    # fractional weights leave rounding dust where no edge is open
    open_edges = np.cumsum(np.bincount(first, minlength=H.n + 1) - np.bincount(last, minlength=H.n + 1))[1:H.n]
    cuts[open_edges == 0] = 0.0
    ordered = H.degrees[order]
    volumes = np.cumsum(ordered)[:-1]
    remaining = np.cumsum(ordered[::-1])[::-1][1:]
    with np.errstate(divide='ignore', invalid='ignore'):
        conductances = cuts / np.minimum(volumes, remaining)
    return SweepProfile(order, volumes, cuts, conductances, H.volume)


def best_sweep(H: Hypergraph, x, mu: float, degrees: Optional[np.ndarray] = None,
               require: Optional[int] = None, profile: Optional[SweepProfile] = None) -> Optional[SweepResult]:
    """
        I return the lowest conductance prefix S_j with j <= l_mu.

        Args:
            H: Hypergraph
            x: vertex vector
            mu: volume fraction in (0, 1/2]
            degrees: ordering denominators, see sweep_profile
            require: only consider prefixes containing this vertex
            profile: a profile of x computed earlier

        Returns:
            SweepResult, smallest j on ties, or None when no prefix qualifies
    """
    if not 0 < mu <= 0.5:
        raise InvalidParameter(f'mu must lie in (0, 1/2], got {mu}')
    if profile is None:
        profile = sweep_profile(H, x, degrees)
    ell = profile.ell(mu)
    start = 1 if require is None else profile.position(require)
    if ell < start:
        return None
    window = profile.conductances[start - 1:ell]
    j = start + int(np.argmin(window))
    members = profile.prefix(j)
    result = measure(H, members)
    return SweepResult(members, result.conductance, j, result.volume)


def sweep_conductance(H: Hypergraph, x, mu: float) -> float:
    """
        I return phi^mu(x), the best prefix conductance up to l_mu.
    """
    return best_sweep(H, x, mu).conductance


@dataclass(frozen=True, eq=False)
class LsCurve:
    """
        I am the Lovasz-Simonovits curve p[x] of a distribution: the
        piecewise linear function through (vol(S_j), p(S_j)) for j = 0 .. n.
    """
    volumes: np.ndarray
    masses: np.ndarray

    def __call__(self, x):
        return np.interp(x, self.volumes, self.masses)

    def slopes(self) -> np.ndarray:
        """ p(v_j)/d_{v_j} of each segment, non-increasing """
        return np.diff(self.masses) / np.diff(self.volumes)


def ls_curve(H: Hypergraph, p, degrees: Optional[np.ndarray] = None, tol: float = 1e-6) -> LsCurve:
    """
        I return the Lovasz-Simonovits curve of the distribution p.
    """
    p = as_vector(H, p)
    if np.any(p < -1e-9) or abs(p.sum() - 1.0) > tol:
        raise NotADistribution(f'mass {p.sum():.6g}, minimum {p.min():.3g}')
    order = sweep_order(p, H.degrees if degrees is None else degrees)
    volumes = np.concatenate([[0.0], np.cumsum(H.degrees[order])])
    masses = np.concatenate([[0.0], np.cumsum(p[order])])
    return LsCurve(volumes, masses)


def key_lemma_bound(alpha: float, delta: float) -> float:
    """
        I return sqrt(24 alpha log(4/delta) / delta).
    """
    return math.sqrt(24.0 * alpha * math.log(4.0 / delta) / delta)


def check_key_lemma(H: Hypergraph, s, alpha: float, mu: float, S: Subset, delta: float) -> LemmaReport:
    """
        I check that a set holding delta more PPR mass than its stationary
        share forces a low conductance sweep cut.

        Applicable when vol(S)/vol(V) <= mu, delta >= 4/sqrt(vol(V)) and
        pr(S) - pi_V(S) > delta.  Then phi^mu(pr) must be strictly below
        sqrt(24 alpha log(4/delta)/delta).  The variant with constant 12 and
        log vol(V) is reported in details.
    """
    name = 'key-lemma'
    if not 0 < mu <= 0.5:
        raise InvalidParameter(f'mu must lie in (0, 1/2], got {mu}')
    mask = as_mask(H, S)
    fraction = float(H.degrees[mask].sum()) / H.volume
    if fraction > mu:
        return LemmaReport.inapplicable(name, f'vol(S)/vol(V)={fraction:.4g} exceeds mu')
    if delta < 4.0 / math.sqrt(H.volume):
        return LemmaReport.inapplicable(name, f'delta below 4/sqrt(vol(V))={4.0 / math.sqrt(H.volume):.4g}')
    p = exact_ppr(H, s, alpha).vector
    excess = float(p[mask].sum()) - fraction
    if excess <= delta:
        return LemmaReport.inapplicable(name, f'pr(S) - pi(S) = {excess:.4g} is not above delta', excess=excess)
    best = best_sweep(H, p, mu)
    bound = key_lemma_bound(alpha, delta)
    return LemmaReport.compare(
        name, best.conductance, bound, strict=True,
        witness=best.members,
        excess=excess,
        bound_log_volume=math.sqrt(12.0 * alpha * math.log(H.volume) / delta) if H.volume > 1 else math.nan,
    )


def check_mixing(H: Hypergraph, s, alpha: float, mu: float, phi: Optional[float] = None,
                 S: Optional[Subset] = None, t_max: int = 50, slack: float = 1e-8) -> LemmaReport:
    """
        I check p(S) - pi_V(S) <= alpha t + sqrt(vol(S)) (1 - phi^2/8)^t for
        t = 0 .. t_max on a graph, with p the exact PPR of s.

        phi defaults to the smallest prefix conductance up to l_mu, which is
        the largest value the hypothesis allows.  Without S every sweep
        prefix with vol(S_j) <= mu vol(V) is checked.
    """
    name = 'mixing'
    graph_adjacency(H)
    p = graph_ppr_exact(H, s, alpha)
    profile = sweep_profile(H, p)
    ell = profile.ell(mu)
    floor = float(profile.conductances[:ell].min())
    if phi is None:
        phi = floor
    if floor < phi:
        return LemmaReport.inapplicable(name, f'a prefix up to l_mu has conductance {floor:.4g} < phi')
    if S is not None:
        candidates = [frozenset(np.flatnonzero(as_mask(H, S)).tolist())]
    else:
        candidates = [profile.prefix(j) for j in range(1, len(profile.volumes) + 1)
                      if profile.volumes[j - 1] <= mu * H.volume]
    steps = np.arange(t_max + 1)
    worst = None
    for members in candidates:
        mask = as_mask(H, members)
        volume = float(H.degrees[mask].sum())
        if volume > mu * H.volume:
            return LemmaReport.inapplicable(name, 'vol(S)/vol(V) exceeds mu', witness=members)
        lhs = float(p[mask].sum() - volume / H.volume)
        rhs = float(np.min(alpha * steps + math.sqrt(volume) * (1.0 - phi ** 2 / 8.0) ** steps))
        if worst is None or lhs - rhs > worst[0] - worst[1]:
            worst = (lhs, rhs, members)
    if worst is None:
        return LemmaReport.inapplicable(name, 'no prefix within the volume cap')
    return LemmaReport.compare(name, worst[0], worst[1], slack, witness=worst[2], phi=phi)


def check_ls_step(H: Hypergraph, s, alpha: float, slack: float = 1e-8) -> LemmaReport:
    """
        I check the one step Lovasz-Simonovits inequality on every prefix of
        the exact PPR of s on a graph:

            p[vol_j] <= alpha s[vol_j] + (1 - alpha)/2 (p[vol_j - cut_j] + p[vol_j + cut_j])
    """
    graph_adjacency(H)
    p = graph_ppr_exact(H, s, alpha)
    profile = sweep_profile(H, p)
    curve = ls_curve(H, p)
    seed_curve = ls_curve(H, as_vector(H, s))
    volumes = profile.volumes
    lhs = curve(volumes)
    rhs = alpha * seed_curve(volumes) + (1.0 - alpha) / 2.0 * (
        curve(volumes - profile.cuts) + curve(volumes + profile.cuts))
    index = int(np.argmax(lhs - rhs))
    return LemmaReport.compare('ls-step', lhs[index], rhs[index], slack,
                               witness=profile.prefix(index + 1), j=index + 1)
