#!env python
"""
    I hold the exhaustive conductance oracle and executable checks of the
    PPR and clustering inequalities.

    Every check runs on exact PPR vectors and becomes not applicable when a
    vector's stationarity residual is above EXACT_GATE, so truncation or solver
    noise never reads as a violated inequality.
"""


# python libraries
import logging
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence


import numpy as np


from hyperppr.clustering import alpha_candidates, conductance_bound_global, conductance_bound_local
from hyperppr.core import Hypergraph, Subset, as_mask, as_vector, chi, connectivity, interior, measure, pi
from hyperppr.diffusion import PprResult, exact_ppr
from hyperppr.errors import InvalidParameter, TooLarge
from hyperppr.laplacian import induced_graph
from hyperppr.report import LemmaReport
from hyperppr.sweep import best_sweep


LOG = logging.getLogger(__name__)
BRUTE_FORCE_LIMIT = 20
EXACT_GATE = 1e-8
SLACK = 1e-8


class BruteForceResult(NamedTuple):
    """ the exhaustive minimum """
    members: frozenset
    conductance: float


def brute_force_conductance(H: Hypergraph, mu: Optional[float] = None, seed: Optional[int] = None,
                            limit: int = BRUTE_FORCE_LIMIT) -> BruteForceResult:
    """
        I return the minimum conductance set by enumerating every proper
        subset as a bitmask.

        Args:
            H: Hypergraph with n <= limit
            mu: keep only sets with vol(S) <= mu vol(V)
            seed: keep only sets containing seed
            limit: size guard

        Returns:
            BruteForceResult, ties by smallest set then lexicographic order
    """
    if H.n > limit:
        raise TooLarge(H.n, limit)
    if H.n < 2:
        raise InvalidParameter('a proper non-empty subset needs n >= 2')
    masks = np.arange(1, (1 << H.n) - 1, dtype=np.int64)
    volume = np.zeros(len(masks))
    outside = np.zeros(len(masks))
    for vertex in range(H.n):
        member = (masks >> vertex) & 1 == 1
        volume += np.where(member, H.degrees[vertex], 0.0)
        outside += np.where(member, 0.0, H.degrees[vertex])
    cut = np.zeros(len(masks))
    for edge in range(H.m):
        edge_bits = int(np.bitwise_or.reduce(np.left_shift(1, H.members(edge).astype(np.int64))))
        inside = masks & edge_bits
        cut += H.weights[edge] * ((inside != 0) & (inside != edge_bits))
    keep = np.ones(len(masks), dtype=bool)
    if mu is not None:
        keep &= volume <= mu * H.volume
    if seed is not None:
        keep &= (masks >> int(seed)) & 1 == 1
    if not keep.any():
        raise InvalidParameter('no subset satisfies the restrictions')
    phi = np.where(keep, cut / np.minimum(volume, outside), np.inf)
    best = np.flatnonzero(phi == phi.min())
    candidates = [tuple(v for v in range(H.n) if int(masks[index]) >> v & 1) for index in best]
    members = min(candidates, key=lambda group: (len(group), group))
    return BruteForceResult(frozenset(members), measure(H, members).conductance)


def _gated(H: Hypergraph, vertex: int, alpha: float) -> PprResult:
    return exact_ppr(H, chi(H, vertex), alpha)


def check_ppr_axioms(H: Hypergraph, alpha: float, u: int) -> LemmaReport:
    """
        I check that pr_alpha(chi_u) is a distribution that puts at least the
        stationary share on u and at most the stationary share elsewhere.
    """
    name = 'ppr-axioms'
    if len(connectivity(H).components) > 1:
        return LemmaReport.inapplicable(name, 'hypergraph is not connected')
    result = _gated(H, u, alpha)
    if result.final_residual >= EXACT_GATE:
        return LemmaReport.inapplicable(name, f'residual {result.final_residual:.3g} above the exact gate')
    p = result.vector
    stationary = pi(H, np.ones(H.n, dtype=bool))
    excess = p - stationary
    excess[u] = stationary[u] - p[u]
    worst = int(np.argmax(excess))
    mass_ok = abs(result.mass - 1.0) <= 1e-6
    sign_ok = p.min() >= -1e-9
    holds = bool(excess[worst] <= SLACK and mass_ok and sign_ok)
    return LemmaReport(name, True, float(excess[worst]), 0.0, holds,
                       None if holds else worst, SLACK,
                       {'mass': result.mass, 'min_entry': float(p.min()), 'residual': result.final_residual,
                        'seed_margin': float(p[u] - stationary[u])})


def ppr_cuts_rhs(H: Hypergraph, result: PprResult, mask: np.ndarray, alpha: float) -> float:
    """
        I return (1 - alpha)/(2 alpha) times the sum over induced pairs uv
        leaving C of w_p(uv) p(u) / d_u.
    """
    graph = induced_graph(H, result.vector / H.degrees, selection=result.selection)
    return (1.0 - alpha) / (2.0 * alpha) * graph.flow_out_of(mask, result.vector / H.degrees)


def check_leak_local(H: Hypergraph, C: Subset, v: int, alpha: float) -> LemmaReport:
    """
        I check pr_alpha(chi_v)(C-bar) <= phi(C)/(4 alpha) for a seed in the
        interior of a set with at most half the volume, together with the
        cut inequality that bounds the leak by flows on the induced graph.
    """
    name = 'leak-local'
    mask = as_mask(H, C)
    shape = measure(H, mask)
    if shape.volume > H.volume / 2:
        return LemmaReport.inapplicable(name, 'vol(C) exceeds vol(V)/2')
    if v not in interior(H, mask):
        return LemmaReport.inapplicable(name, f'vertex {v} is not in the interior of C', witness=v)
    result = _gated(H, v, alpha)
    if result.final_residual >= EXACT_GATE:
        return LemmaReport.inapplicable(name, f'residual {result.final_residual:.3g} above the exact gate')
    leak = float(result.vector[~mask].sum())
    cuts_rhs = ppr_cuts_rhs(H, result, mask, alpha)
    bound = shape.conductance / (4.0 * alpha)
    report = LemmaReport.compare(name, leak, bound, SLACK, ppr_cuts_rhs=cuts_rhs,
                                 ppr_cuts_holds=leak <= cuts_rhs + SLACK)
    if report.holds and leak > cuts_rhs + SLACK:
        return LemmaReport(name, True, leak, cuts_rhs, False, v, SLACK, report.details)
    return report


def check_leak_global(H: Hypergraph, C: Subset, alpha: float) -> LemmaReport:
    """
        I check the averaged leak bound and the half volume property of C_alpha.

        With p_w = pr_alpha(chi_w), the condition is that sum_w pi_C(w) p_w(v)
        <= pi_C(v) at every boundary vertex v of C.  When it holds,
        sum_w pi_C(w) p_w(C-bar) <= phi(C)/(2 alpha) and the set C_alpha of
        w with p_w(C-bar) <= phi(C)/alpha carries at least vol(C)/2.
    """
    name = 'leak-global'
    mask = as_mask(H, C)
    shape = measure(H, mask)
    members = np.flatnonzero(mask)
    weights = pi(H, mask)
    results = {}
    for w in members:
        result = _gated(H, int(w), alpha)
        if result.final_residual >= EXACT_GATE:
            return LemmaReport.inapplicable(name, f'residual {result.final_residual:.3g} above the exact gate',
                                            witness=int(w))
        results[int(w)] = result
    average = sum(weights[w] * result.vector for w, result in results.items())
    boundary = sorted(set(members.tolist()) - interior(H, mask))
    for v in boundary:
        if average[v] > weights[v] + SLACK:
            return LemmaReport.inapplicable(name, f'averaged PPR at boundary vertex {v} exceeds pi_C', witness=v)

    leaks = {w: float(result.vector[~mask].sum()) for w, result in results.items()}
    leak = float(sum(weights[w] * leaks[w] for w in leaks))
    bound = shape.conductance / (2.0 * alpha)
    c_alpha = frozenset(w for w in leaks if leaks[w] <= shape.conductance / alpha)
    c_alpha_volume = float(H.degrees[sorted(c_alpha)].sum()) if c_alpha else 0.0
    margins = {w: ppr_cuts_rhs(H, results[w], mask, alpha) - leaks[w] for w in leaks}
    worst_cut = min(margins, key=margins.get)
    details = {
        'c_alpha': c_alpha,
        'c_alpha_volume': c_alpha_volume,
        'volume': shape.volume,
        'ppr_cuts_margin': margins[worst_cut],
    }
    if c_alpha_volume < shape.volume / 2:
        return LemmaReport(name, True, leak, bound, False, c_alpha, SLACK, details)
    if margins[worst_cut] < -SLACK:
        return LemmaReport(name, True, leak, bound, False, worst_cut, SLACK, details)
    return LemmaReport.compare(name, leak, bound, SLACK, **details)


def criterion_threshold(H: Hypergraph) -> Fraction:
    """
        I return (1/2 - dmax/vol) / (1 - dmax/vol) as an exact fraction.
    """
    ratio = Fraction(H.max_degree) / Fraction(H.volume)
    return (Fraction(1, 2) - ratio) / (1 - ratio)


def check_sufficient_conditions(H: Hypergraph, alpha: float, C: Optional[Subset] = None) -> LemmaReport:
    """
        I report the two conditions that imply the boundary condition of the
        global leak bound.

        The degree condition is alpha <= (1/2 - dmax/vol)/(1 - dmax/vol).  The
        self mass condition is pr_alpha(chi_v)(v) <= 1/2 for every v, needing
        vol(C) <= vol(V)/2 when C is given.  Either one suffices.
    """
    name = 'sufficient-conditions'
    threshold = criterion_threshold(H)
    by_degree = Fraction(alpha) <= threshold
    details = {'threshold': float(threshold), 'criterion_degree': by_degree}
    if C is not None and measure(H, C).volume > H.volume / 2:
        details['criterion_self_mass'] = None
        details['reason'] = 'vol(C) exceeds vol(V)/2'
        return LemmaReport(name, True, alpha, float(threshold), by_degree, None, 0.0, details)
    self_mass = np.array([_gated(H, v, alpha).vector[v] for v in range(H.n)])
    worst = int(np.argmax(self_mass))
    by_self_mass = bool(self_mass[worst] <= 0.5)
    details['criterion_self_mass'] = by_self_mass
    details['max_self_mass'] = float(self_mass[worst])
    return LemmaReport(name, True, alpha, float(threshold), bool(by_degree or by_self_mass),
                       None if by_self_mass else worst, 0.0, details)


def check_continuity(H: Hypergraph, s, alphas: Sequence[float], spacing: float = 1e-3,
                     bound: float = 0.1) -> LemmaReport:
    """
        I report the largest l1 gap between PPR vectors at adjacent alphas.
        The gap must stay within bound when every spacing is at most spacing.
    """
    name = 'continuity'
    alphas = [float(alpha) for alpha in alphas]
    if len(alphas) < 2 or any(b < a for a, b in zip(alphas, alphas[1:])):
        raise InvalidParameter('alphas must be an ascending sequence of at least two values')
    s = as_vector(H, s)
    vectors = []
    for alpha in alphas:
        result = exact_ppr(H, s, alpha)
        if result.final_residual >= EXACT_GATE:
            return LemmaReport.inapplicable(name, f'residual {result.final_residual:.3g} above the exact gate')
        vectors.append(result.vector)
    gaps = [float(np.abs(b - a).sum()) for a, b in zip(vectors, vectors[1:])]
    index = int(np.argmax(gaps))
    stationary = pi(H, np.ones(H.n, dtype=bool)) * s.sum()
    details = {
        'gaps': gaps,
        'distance_to_stationary': [float(np.abs(vector - stationary).sum()) for vector in vectors],
    }
    if max(b - a for a, b in zip(alphas, alphas[1:])) > spacing * (1 + 1e-9):
        return LemmaReport.inapplicable(name, f'alpha spacing above {spacing}', max_gap=gaps[index], **details)
    return LemmaReport.compare(name, gaps[index], bound, witness=(alphas[index], alphas[index + 1]), **details)


def _bracketing_alpha(H: Hypergraph, target: float, epsilon: float) -> Optional[float]:
    fitting = [alpha for alpha in alpha_candidates(H, epsilon) if alpha <= target <= (1 + epsilon) * alpha]
    return max(fitting) if fitting else None


def check_main_local_bound(H: Hypergraph, v: int, C: Subset, epsilon: float = 0.9, mu: float = 0.5,
                           alpha: Optional[float] = None) -> LemmaReport:
    """
        I check the explicit local guarantee: for v in the interior of C with
        vol(C) <= mu vol(V) and alpha <= phi(C) <= (1 + epsilon) alpha,
        phi^mu(pr_alpha(chi_v)) < 8/sqrt(3-eps-4mu) sqrt(6 phi(C) log(2/(3-eps-4mu))).

        alpha defaults to the largest bracketing value of the candidate grid.
    """
    name = 'main-local'
    mask = as_mask(H, C)
    shape = measure(H, mask)
    if shape.volume > mu * H.volume:
        return LemmaReport.inapplicable(name, 'vol(C) exceeds mu vol(V)')
    if v not in interior(H, mask):
        return LemmaReport.inapplicable(name, f'vertex {v} is not in the interior of C', witness=v)
    if 3.0 - epsilon - 4.0 * mu <= 0:
        return LemmaReport.inapplicable(name, '3 - epsilon - 4 mu is not positive')
    if alpha is None:
        alpha = _bracketing_alpha(H, shape.conductance, epsilon)
    if alpha is None or not alpha <= shape.conductance <= (1 + epsilon) * alpha:
        return LemmaReport.inapplicable(name, f'no alpha brackets phi(C)={shape.conductance:.4g}')
    result = _gated(H, v, alpha)
    if result.final_residual >= EXACT_GATE:
        return LemmaReport.inapplicable(name, f'residual {result.final_residual:.3g} above the exact gate')
    sweep = best_sweep(H, result.vector, mu)
    bound = conductance_bound_local(shape.conductance, epsilon, mu)
    return LemmaReport.compare(name, sweep.conductance, bound, strict=True, witness=sweep.members, alpha=alpha)


def check_main_global_bound(H: Hypergraph, C: Subset, epsilon: float = 0.9,
                            alpha: Optional[float] = None) -> LemmaReport:
    """
        I check the global guarantee for a set C with vol(C) <= vol(V)/2: with
        alpha <= 10 phi(C) <= (1 + epsilon) alpha and the boundary condition
        holding, every v in C_alpha has phi^{1/2}(pr_alpha(chi_v)) below
        20/sqrt(4-eps) sqrt(3 phi(C) log(40/(4-eps))).
    """
    name = 'main-global'
    mask = as_mask(H, C)
    shape = measure(H, mask)
    if shape.volume > H.volume / 2:
        return LemmaReport.inapplicable(name, 'vol(C) exceeds vol(V)/2')
    if alpha is None:
        alpha = _bracketing_alpha(H, 10.0 * shape.conductance, epsilon)
    if alpha is None or not alpha <= 10.0 * shape.conductance <= (1 + epsilon) * alpha:
        return LemmaReport.inapplicable(name, f'no alpha brackets 10 phi(C)={10.0 * shape.conductance:.4g}')
    leak = check_leak_global(H, mask, alpha)
    if not leak.applicable:
        return LemmaReport.inapplicable(name, leak.details['reason'], witness=leak.witness)
    bound = conductance_bound_global(shape.conductance, epsilon)
    worst = None
    for v in sorted(leak.details['c_alpha']):
        sweep = best_sweep(H, _gated(H, v, alpha).vector, 0.5)
        if worst is None or sweep.conductance > worst[0]:
            worst = (sweep.conductance, v)
    if worst is None:
        return LemmaReport.inapplicable(name, 'C_alpha is empty')
    return LemmaReport.compare(name, worst[0], bound, strict=True, witness=worst[1], alpha=alpha)
