#!env python
"""
    I manage the clustering algorithms.

    local_clustering sweeps the PPR vector of one seed for every alpha on a
    geometric grid and keeps the best cut under the volume cap.
    global_clustering runs it from many seeds with mu = 1/2.  The clique and
    star baselines compute graph PPR on an expansion and score their sweep
    cuts in the original hypergraph.
"""


# python libraries
import dataclasses
import functools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence


import numpy as np


from hyperppr.core import Hypergraph, chi, clique_expansion, connectivity, measure, star_expansion
from hyperppr.diffusion import PprParams, euler_ppr, exact_ppr, graph_ppr_power
from hyperppr.errors import InvalidParameter, VertexOutOfRange
from hyperppr.sweep import best_sweep


LOG = logging.getLogger(__name__)
BASELINE_ALPHAS = tuple(round(0.05 * step, 2) for step in range(1, 20))
CLIQUE_BUDGET = 10 ** 7
GLOBAL_MU = 0.5


@dataclass(frozen=True)
class LocalParams:
    """
        I hold the settings of local clustering.

        mu: volume cap as a fraction of vol(V), in (0, 1/2]
        epsilon: grid ratio of the alpha candidates, in (0, 1)
        dt, total_time, theta, tie_tol: the Euler diffusion settings
        alphas: explicit alpha list replacing the candidate grid
        exact: use exact_ppr instead of the Euler diffusion
    """
    mu: float = 0.1
    epsilon: float = 0.9
    dt: float = 1.0
    total_time: float = 30.0
    theta: float = 1e-5
    tie_tol: float = 0.0
    alphas: Optional[tuple] = None
    exact: bool = False

    def __post_init__(self):
        if not 0 < self.mu <= 0.5:
            raise InvalidParameter(f'mu must lie in (0, 1/2], got {self.mu}')
        if not 0 < self.epsilon < 1:
            raise InvalidParameter(f'epsilon must lie in (0, 1), got {self.epsilon}')
        if self.alphas is not None:
            if not self.alphas or any(not 0 < alpha <= 1 for alpha in self.alphas):
                raise InvalidParameter('alphas must be a non-empty list within (0, 1]')
        self.ppr_params(1.0)

    def ppr_params(self, alpha: float) -> PprParams:
        """
            I return the diffusion settings for one alpha.
        """
        return PprParams(alpha, self.dt, self.total_time, self.theta, self.tie_tol)


@dataclass(frozen=True)
class ClusterResult:
    """ one cluster and how it was found """
    members: frozenset
    conductance: float
    seed: int
    alpha: float
    j: int
    method: str
    volume: float

    def to_dict(self) -> dict:
        """
            I return the result in its json shape.
        """
        return {
            'method': self.method,
            'seed': self.seed,
            'alpha': self.alpha,
            'phi': self.conductance,
            'volume': self.volume,
            'size': len(self.members),
            'members_sorted': sorted(self.members),
        }

    def rank(self) -> tuple:
        """ sort key of the global reduction """
        return (self.conductance, len(self.members), self.seed)


def alpha_candidates(H: Hypergraph, epsilon: float) -> list:
    """
        I return the alpha grid base (1 + epsilon)^i within (0, 1], with 1.0
        appended.  base = w_min / (w_max * sum |e|).

        Every phi in [base, 1] then has an alpha with alpha <= phi <= (1 + epsilon) alpha.
    """
    if not 0 < epsilon < 1:
        raise InvalidParameter(f'epsilon must lie in (0, 1), got {epsilon}')
    base = H.w_min / (H.w_max * H.total_size)
    result = []
    step = 0
    while True:
        alpha = base * (1.0 + epsilon) ** step
        if alpha > 1.0:
            break
        result.append(alpha)
        step += 1
    if result[-1] != 1.0:
        result.append(1.0)
    return result


@functools.lru_cache(maxsize=32)
def _component_count(H: Hypergraph) -> int:
    return len(connectivity(H).components)


def _check_seed(H: Hypergraph, vertex: int) -> int:
    vertex = int(vertex)
    if not 0 <= vertex < H.n:
        raise VertexOutOfRange(vertex, H.n)
    return vertex


def _singleton(H: Hypergraph, vertex: int, alpha: float, method: str) -> ClusterResult:
    LOG.warning('no sweep prefix with seed %d fits under the volume cap, returning the seed alone', vertex)
    result = measure(H, [vertex])
    return ClusterResult(frozenset([vertex]), result.conductance, vertex, alpha, 0, method, result.volume)


def local_clustering(H: Hypergraph, v: int, params: LocalParams) -> ClusterResult:
    """
        I return the lowest conductance sweep cut containing v over the
        alpha grid.

        Args:
            H: Hypergraph, connected is recommended
            v: seed vertex
            params: LocalParams

        Returns:
            ClusterResult with v in members and vol <= mu vol(V) + max d
    """
    v = _check_seed(H, v)
    if _component_count(H) > 1:
        LOG.warning('hypergraph is not connected, local clustering from %d stays in its component', v)
    alphas = params.alphas or alpha_candidates(H, params.epsilon)
    seed = chi(H, v)
    best = None
    for alpha in alphas:
        if params.exact:
            vector = exact_ppr(H, seed, alpha).vector
        else:
            vector = euler_ppr(H, seed, params.ppr_params(alpha)).vector
        sweep = best_sweep(H, vector, params.mu, require=v)
        if sweep is None:
            continue
        LOG.debug('seed %d alpha %.4g phi %.6g j %d', v, alpha, sweep.conductance, sweep.j)
        if best is None or sweep.conductance < best[0].conductance:
            best = (sweep, alpha)
    if best is None:
        return _singleton(H, v, alphas[0], 'local')
    sweep, alpha = best
    return ClusterResult(sweep.members, sweep.conductance, v, alpha, sweep.j, 'local', sweep.volume)


def sample_seeds(H: Hypergraph, sample: Optional[int] = None, rng_seed: int = 0) -> list:
    """
        I return sample distinct vertices drawn uniformly with rng_seed, in
        ascending order, or every vertex when sample is None or covers V.
    """
    if sample is None or sample >= H.n:
        return list(range(H.n))
    if sample < 1:
        raise InvalidParameter(f'sample must be positive, got {sample}')
    rng = np.random.default_rng(rng_seed)
    return sorted(int(v) for v in rng.choice(H.n, size=sample, replace=False))


def _run_seeds(task: Callable, seeds: Sequence[int], workers: int,
               progress: Optional[Callable] = None) -> list:
    results = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            for result in executor.map(task, seeds):
                results.append(result)
                if progress:
                    progress(len(results), len(seeds))
        return results
    for seed in seeds:
        results.append(task(seed))
        if progress:
            progress(len(results), len(seeds))
    return results


def _reduce(results: Iterable[ClusterResult], method: str) -> ClusterResult:
    best = min(results, key=ClusterResult.rank)
    return dataclasses.replace(best, method=method)


def _resolve_seeds(H: Hypergraph, seeds: Optional[Sequence[int]], sample: Optional[int], rng_seed: int) -> list:
    if seeds is not None:
        seeds = [_check_seed(H, v) for v in seeds]
        if not seeds:
            raise InvalidParameter('seed list is empty')
        return seeds
    return sample_seeds(H, sample, rng_seed)


def global_clustering(H: Hypergraph, params: LocalParams, seeds: Optional[Sequence[int]] = None,
                      rng_seed: int = 0, sample: Optional[int] = None, workers: int = 1,
                      progress: Optional[Callable] = None) -> ClusterResult:
    """
        I return the best local clustering result over the seeds with mu = 1/2.

        Args:
            H: Hypergraph
            params: LocalParams, mu is replaced by 1/2
            seeds: seed vertices, all of V by default
            rng_seed: seed of the sampler
            sample: draw this many seeds instead of using all of V
            workers: threads running seeds in parallel
            progress: called with (done, total) after every seed

        Returns:
            ClusterResult, ties by (phi, size, seed)
    """
    if params.mu != GLOBAL_MU:
        LOG.info('global clustering uses mu=1/2 instead of %.4g', params.mu)
        params = dataclasses.replace(params, mu=GLOBAL_MU)
    seeds = _resolve_seeds(H, seeds, sample, rng_seed)
    results = _run_seeds(lambda v: local_clustering(H, v, params), seeds, workers, progress)
    best = _reduce(results, 'global')
    LOG.info('global clustering over %d seeds: phi=%.6g from seed %d', len(seeds), best.conductance, best.seed)
    return best


class _Expansion:
    """ one expansion of H shared by all seeds of a baseline run """

    def __init__(self, H: Hypergraph, mode: str, budget: Optional[int]):
        if mode == 'clique':
            self.graph = clique_expansion(H, normalized=False, budget=budget)
        elif mode == 'star':
            self.graph = star_expansion(H, normalized=True).graph
        else:
            raise InvalidParameter(f'mode must be clique or star, got {mode!r}')
        self.mode = mode
        self.n = H.n
        LOG.debug('%s expansion: %d vertices, %d edges', mode, self.graph.n, self.graph.m)


def _baseline(H: Hypergraph, expansion: _Expansion, v: int, mu: float, alphas: Sequence[float],
              tol: float) -> ClusterResult:
    v = _check_seed(H, v)
    seed = chi(expansion.graph, v)
    degrees = expansion.graph.degrees[:H.n]
    best = None
    for alpha in alphas:
        vector = graph_ppr_power(expansion.graph, seed, alpha, tol=tol)[:H.n]
        sweep = best_sweep(H, vector, mu, degrees=degrees, require=v)
        if sweep is not None and (best is None or sweep.conductance < best[0].conductance):
            best = (sweep, alpha)
    if best is None:
        return _singleton(H, v, alphas[0], expansion.mode)
    sweep, alpha = best
    return ClusterResult(sweep.members, sweep.conductance, v, alpha, sweep.j, expansion.mode, sweep.volume)


def baseline_expansion_clustering(H: Hypergraph, v: int, mode: str, mu: float = 0.1,
                                  budget: Optional[int] = CLIQUE_BUDGET,
                                  alphas: Sequence[float] = BASELINE_ALPHAS,
                                  tol: float = 1e-8) -> ClusterResult:
    """
        I run the CLIQUE or STAR baseline from one seed.

        CLIQUE expands with weight w(e) per pair, STAR with w(e)/|e| per spoke.
        Graph PPR comes from the power method for every alpha, the sweep keeps
        the original vertices ordered by x(v) over their expanded degree, and
        every prefix is scored in H.

        Args:
            H: Hypergraph
            v: seed vertex
            mode: 'clique' or 'star'
            mu: volume cap in (0, 1/2]
            budget: largest clique pair count, None for no limit
            alphas: teleport values to try
            tol: power method stopping threshold

        Returns:
            ClusterResult
    """
    if not 0 < mu <= 0.5:
        raise InvalidParameter(f'mu must lie in (0, 1/2], got {mu}')
    return _baseline(H, _Expansion(H, mode, budget), v, mu, alphas, tol)


def baseline_global_clustering(H: Hypergraph, mode: str, seeds: Optional[Sequence[int]] = None,
                               rng_seed: int = 0, sample: Optional[int] = None,
                               budget: Optional[int] = CLIQUE_BUDGET,
                               alphas: Sequence[float] = BASELINE_ALPHAS, tol: float = 1e-8,
                               workers: int = 1, progress: Optional[Callable] = None) -> ClusterResult:
    """
        I run a baseline from every seed with mu = 1/2 and keep the best,
        sampling seeds the same way global_clustering does.
    """
    expansion = _Expansion(H, mode, budget)
    seeds = _resolve_seeds(H, seeds, sample, rng_seed)
    task = lambda v: _baseline(H, expansion, v, GLOBAL_MU, alphas, tol)  # noqa: E731
    results = _run_seeds(task, seeds, workers, progress)
    return _reduce(results, f'{mode}-global')


def conductance_bound_local(phi: float, epsilon: float, mu: float) -> float:
    """
        I return 8/sqrt(3 - eps - 4 mu) * sqrt(6 phi log(2/(3 - eps - 4 mu))),
        the guaranteed sweep conductance for a cluster of conductance phi.
    """
    gap = 3.0 - epsilon - 4.0 * mu
    if gap <= 0:
        raise InvalidParameter('3 - epsilon - 4 mu must be positive')
    return 8.0 / math.sqrt(gap) * math.sqrt(6.0 * phi * math.log(2.0 / gap))


def conductance_bound_global(phi: float, epsilon: float) -> float:
    """
        I return 20/sqrt(4 - eps) * sqrt(3 phi log(40/(4 - eps))).
    """
    return 20.0 / math.sqrt(4.0 - epsilon) * math.sqrt(3.0 * phi * math.log(40.0 / (4.0 - epsilon)))
