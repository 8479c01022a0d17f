#!env python
"""
    I compute personalized PageRank on hypergraphs.

    euler_ppr follows the diffusion d rho/dt = beta (s - rho) - (1 - beta)
    L(D^-1 rho) with forward Euler steps.  exact_ppr warms up with the convex
    program of the stationary point and then solves its dual over edge flows
    exactly.  graph_ppr_power and graph_ppr_exact are the graph references.
"""


# python libraries
import functools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Optional


import cvxpy as cp
import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.optimize import nnls


from hyperppr.core import Hypergraph, as_vector
from hyperppr.errors import (
    InvalidParameter,
    NoConvergence,
    NonFiniteState,
    NotAGraph,
    SingularSystem,
    TooLarge,
)
from hyperppr.laplacian import (
    EdgeSelection,
    apply_laplacian,
    edge_extrema,
    entry_pairs,
    select_subgradient,
    selection_from_shares,
)


LOG = logging.getLogger(__name__)
DENSE_LIMIT = 4096
DENSE_ENTRIES = 25_000_000
WARM_TOLERANCE = 1e-4
PRICING_TOLERANCE = 1e-12
MAX_PRICING_ROUNDS = 200


@dataclass(frozen=True)
class PprParams:
    """
        I hold the settings of one Euler diffusion.

        alpha: teleport parameter in (0, 1]
        dt: Euler step
        total_time: simulated time T, the step count is ceil(T / dt)
        theta: entries below theta in absolute value are zeroed after each
            step, 0 disables truncation
        tie_tol: tie tolerance of the subgradient selection
        tol: stop early once the residual drops below tol
    """
    alpha: float
    dt: float = 1.0
    total_time: float = 30.0
    theta: float = 1e-5
    tie_tol: float = 0.0
    tol: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise InvalidParameter(f'alpha must lie in (0, 1], got {self.alpha}')
        if not self.dt > 0 or not self.total_time > 0:
            raise InvalidParameter('dt and total_time must be positive')
        if self.dt > self.total_time:
            raise InvalidParameter(f'dt={self.dt} exceeds total_time={self.total_time}')
        if self.theta < 0 or self.tie_tol < 0:
            raise InvalidParameter('theta and tie_tol must be non-negative')
        if self.tol is not None and not self.tol > 0:
            raise InvalidParameter(f'tol must be positive, got {self.tol}')

    @property
    def beta(self) -> float:
        """ 2 alpha / (1 + alpha) """
        return beta_of(self.alpha)

    @property
    def steps(self) -> int:
        """ ceil(T / dt) """
        return max(1, math.ceil(self.total_time / self.dt - 1e-9))


@dataclass(frozen=True, eq=False)
class PprResult:
    """ a PPR vector with how it was obtained """
    vector: np.ndarray
    iterations: int
    final_residual: float
    mass: float
    selection: Optional[EdgeSelection] = None


def beta_of(alpha: float) -> float:
    """
        I return beta = 2 alpha / (1 + alpha).
    """
    return 2.0 * alpha / (1.0 + alpha)


def drift(H: Hypergraph, rho: np.ndarray, s: np.ndarray, alpha: float, tie_tol: float = 0.0,
          selection: Optional[EdgeSelection] = None) -> np.ndarray:
    """
        I return beta (s - rho) - (1 - beta) L(D^-1 rho).
    """
    beta = beta_of(alpha)
    flow = apply_laplacian(H, rho, normalized=True, tie_tol=tie_tol, selection=selection)
    return beta * (s - rho) - (1.0 - beta) * flow


def residual(H: Hypergraph, rho, s, alpha: float, tie_tol: float = 0.0,
             selection: Optional[EdgeSelection] = None) -> float:
    """
        I return the l1 norm of the stationarity defect of rho.

        Args:
            H: Hypergraph
            rho: candidate PPR vector
            s: seed vector
            alpha: teleport parameter
            tie_tol: tie tolerance of the averaged selection
            selection: evaluate under these shares instead

        Returns:
            float, 0 at the PPR vector
    """
    rho = as_vector(H, rho)
    s = as_vector(H, s)
    return float(np.abs(drift(H, rho, s, alpha, tie_tol, selection)).sum())


def _euler_step(H: Hypergraph, rho: np.ndarray, step: np.ndarray, p: PprParams, iteration: int) -> np.ndarray:
    with np.errstate(over='ignore', invalid='ignore'):
        rho = rho + p.dt * step
    if not np.all(np.isfinite(rho)):
        raise NonFiniteState(iteration)
    if p.theta > 0:
        rho[np.abs(rho) < p.theta] = 0.0
    return rho


def euler_trajectory(H: Hypergraph, s, p: PprParams) -> Iterator[np.ndarray]:
    """
        I yield rho_0 = s and then every Euler iterate, ignoring p.tol.
    """
    s = as_vector(H, s)
    rho = s.copy()
    yield rho.copy()
    for iteration in range(1, p.steps + 1):
        rho = _euler_step(H, rho, drift(H, rho, s, p.alpha, p.tie_tol), p, iteration)
        yield rho.copy()


def euler_ppr(H: Hypergraph, s, p: PprParams) -> PprResult:
    """
        I simulate the PPR diffusion with forward Euler steps from rho_0 = s.

        Args:
            H: Hypergraph, connectivity is not required
            s: seed vector
            p: PprParams

        Returns:
            PprResult of the last iterate
    """
    s = as_vector(H, s)
    rho = s.copy()
    iterations = 0
    for iteration in range(1, p.steps + 1):
        step = drift(H, rho, s, p.alpha, p.tie_tol)
        if p.tol is not None and np.abs(step).sum() < p.tol:
            break
        rho = _euler_step(H, rho, step, p, iteration)
        iterations = iteration
    final = residual(H, rho, s, p.alpha, p.tie_tol)
    LOG.debug('euler alpha=%.4g steps=%d residual=%.3g', p.alpha, iterations, final)
    return PprResult(rho, iterations, final, float(rho.sum()))


def graph_adjacency(G: Hypergraph) -> sparse.csr_matrix:
    """
        I return the symmetric adjacency of a graph, singletons as loops.
    """
    oversized = np.flatnonzero(G.sizes > 2)
    if len(oversized):
        raise NotAGraph(int(oversized[0]), int(G.sizes[oversized[0]]))
    pairs = np.flatnonzero(G.sizes == 2)
    singles = np.flatnonzero(G.sizes == 1)
    first = G.edge_members[G.edge_ptr[pairs]]
    second = G.edge_members[G.edge_ptr[pairs] + 1]
    loops = G.edge_members[G.edge_ptr[singles]]
    rows = np.concatenate([first, second, loops])
    cols = np.concatenate([second, first, loops])
    data = np.concatenate([G.weights[pairs], G.weights[pairs], G.weights[singles]])
    return sparse.coo_matrix((data, (rows, cols)), shape=(G.n, G.n)).tocsr()


def graph_ppr_power(G: Hypergraph, s, alpha: float, tol: float = 1e-8, max_iter: int = 100000) -> np.ndarray:
    """
        I return graph PPR by the fixed point x <- alpha s + (1 - alpha) W x
        with the lazy walk W = (I + A D^-1) / 2, started from the uniform
        vector and stopped once |x - x_prev|_1 <= tol.

        Args:
            G: Hypergraph with every |e| <= 2
            s: seed vector
            alpha: teleport parameter in (0, 1]
            tol: l1 stopping threshold
            max_iter: iteration cap

        Returns:
            numpy array
    """
    if not 0 < alpha <= 1:
        raise InvalidParameter(f'alpha must lie in (0, 1], got {alpha}')
    adjacency = graph_adjacency(G)
    s = as_vector(G, s)
    x = np.full(G.n, 1.0 / G.n)
    gap = float('inf')
    for iteration in range(1, max_iter + 1):
        previous = x
        x = alpha * s + (1.0 - alpha) * 0.5 * (x + adjacency @ (x / G.degrees))
        gap = float(np.abs(x - previous).sum())
        if gap <= tol:
            LOG.debug('power method converged in %d iterations', iteration)
            return x
    raise NoConvergence(max_iter, gap)


def graph_ppr_exact(G: Hypergraph, s, alpha: float) -> np.ndarray:
    """
        I solve (I + ((1 - alpha) / (2 alpha)) L D^-1) p = s densely.
    """
    if not 0 < alpha <= 1:
        raise InvalidParameter(f'alpha must lie in (0, 1], got {alpha}')
    if G.n > DENSE_LIMIT:
        raise TooLarge(G.n, DENSE_LIMIT)
    adjacency = graph_adjacency(G).toarray()
    s = as_vector(G, s)
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    system = np.eye(G.n) + (1.0 - alpha) / (2.0 * alpha) * laplacian / G.degrees[None, :]
    try:
        return scipy.linalg.solve(system, s)
    except (scipy.linalg.LinAlgError, ValueError) as err_msg:
        raise SingularSystem(str(err_msg)) from err_msg


@functools.lru_cache(maxsize=8)
def _ppr_program(H: Hypergraph) -> tuple:
    """
        I compile the convex program of the stationary point once per H.

        min 1/2 sum_v d_v (z_v - sigma_v)^2 + kappa/2 sum_e w_e (u_e - l_e)^2
        s.t. l_e <= z_i <= u_e for i in e
    """
    z = cp.Variable(H.n)
    upper = cp.Variable(H.m)
    lower = cp.Variable(H.m)
    sigma = cp.Parameter(H.n)
    kappa = cp.Parameter(nonneg=True)
    objective = 0.5 * cp.sum(cp.multiply(H.degrees, cp.square(z - sigma)))
    objective += 0.5 * kappa * cp.sum(cp.multiply(H.weights, cp.square(upper - lower)))
    constraints = [
        z[H.edge_members] <= upper[H.edge_of_entry],
        z[H.edge_members] >= lower[H.edge_of_entry],
    ]
    return cp.Problem(cp.Minimize(objective), constraints), z, sigma, kappa


def _solve_program(H: Hypergraph, s: np.ndarray, alpha: float) -> np.ndarray:
    problem, z, sigma, kappa = _ppr_program(H)
    beta = beta_of(alpha)
    sigma.value = s / H.degrees
    kappa.value = (1.0 - beta) / beta
    solver = cp.CLARABEL if 'CLARABEL' in cp.installed_solvers() else None
    problem.solve(solver=solver)
    if z.value is None:
        raise SingularSystem(f'convex solver finished with status {problem.status}')
    LOG.debug('convex program status %s objective %.6g', problem.status, problem.value)
    return np.asarray(z.value, dtype=float)


def _candidate_pairs(H: Hypergraph, z: np.ndarray, tol: float, edges: Optional[np.ndarray] = None) -> tuple:
    """
        I return the (top entry, bottom entry) pairs of every edge, tops
        within tol of the edge maximum of z and bottoms within tol of its
        minimum.  edges restricts the result to a mask of edges.
    """
    high, low = edge_extrema(H, z)
    values = z[H.edge_members]
    owner = H.edge_of_entry
    keep = np.ones(H.total_size, dtype=bool) if edges is None else edges[owner]
    tops, bottoms = entry_pairs(
        H,
        np.flatnonzero(keep & (values >= high[owner] - tol)),
        np.flatnonzero(keep & (values <= low[owner] + tol)),
    )
    distinct = tops != bottoms
    return tops[distinct], bottoms[distinct]


def _solve_flows(H: Hypergraph, s: np.ndarray, kappa: float, tops: np.ndarray,
                 bottoms: np.ndarray) -> Optional[np.ndarray]:
    """
        I solve the dual of the stationary point over the given pairs.

        Every pair carries a flow f >= 0 from its top member to its bottom
        member and the flows minimize
            1/2 sum_v (s_v - r_v)^2 / d_v + sum_e F_e^2 / (2 kappa w_e)
        with r the net outflow of a vertex and F_e the total flow of e.
        I return the flows, or None when the solver gives up.
    """
    if not len(tops):
        return np.zeros(0)
    owner = H.edge_of_entry[tops]
    columns = np.arange(len(tops))
    root = np.sqrt(H.degrees)
    matrix = np.zeros((H.n + H.m, len(tops)))
    sender = H.edge_members[tops]
    receiver = H.edge_members[bottoms]
    matrix[sender, columns] = 1.0 / root[sender]
    matrix[receiver, columns] = -1.0 / root[receiver]
    matrix[H.n + owner, columns] = 1.0 / np.sqrt(kappa * H.weights[owner])
    target = np.concatenate([s / root, np.zeros(H.m)])
    try:
        flows, _ = nnls(matrix, target, maxiter=max(100, 30 * len(tops)))
    except RuntimeError as err_msg:
        LOG.debug('nnls stopped: %s', err_msg)
        return None
    support = flows > 0
    if support.any():
        # the least squares fit on the support pins the vertex values exactly
        refined = scipy.linalg.lstsq(matrix[:, support], target)[0]
        if refined.min() >= 0:
            flows[support] = refined
    return flows


def _exact_flows(H: Hypergraph, s: np.ndarray, alpha: float, z: np.ndarray) -> Optional[tuple]:
    """
        I find the stationary point from the warm start z by pricing.

        Starting from the pairs z suggests, I solve the flow problem, add the
        extreme pair of every edge whose spread still exceeds its flow and
        solve again until no edge does.  I return the vector and its
        selection, or None.
    """
    beta = beta_of(alpha)
    kappa = (1.0 - beta) / beta
    scale = max(float(np.abs(z).max()), np.finfo(float).tiny)
    tops, bottoms = _candidate_pairs(H, z, WARM_TOLERANCE * scale)
    owner = H.edge_of_entry
    for round_no in range(1, MAX_PRICING_ROUNDS + 1):
        if (H.n + H.m) * max(1, len(tops)) > DENSE_ENTRIES:
            LOG.warning('flow problem with %d pairs is too large for a dense solve', len(tops))
            return None
        flows = _solve_flows(H, s, kappa, tops, bottoms)
        if flows is None:
            return None
        sent = np.bincount(tops, weights=flows, minlength=H.total_size)
        received = np.bincount(bottoms, weights=flows, minlength=H.total_size)
        vector = s - np.bincount(H.edge_members, weights=sent - received, minlength=H.n)
        values = vector / H.degrees
        high, low = edge_extrema(H, values)
        total = np.bincount(owner, weights=sent, minlength=H.m)
        excess = high - low - total / (kappa * H.weights)
        tol = PRICING_TOLERANCE * max(float(np.abs(values).max()), np.finfo(float).tiny)
        violated = excess > tol
        fresh = np.zeros(0, dtype=bool)
        if violated.any():
            new_tops, new_bottoms = _candidate_pairs(H, values, tol, edges=violated)
            fresh = ~np.isin(new_tops * H.total_size + new_bottoms, tops * H.total_size + bottoms)
        if not fresh.any():
            # known pairs left over are within the tolerance of nnls itself
            LOG.debug('flow problem settled after %d rounds with %d pairs, largest excess %.3g',
                      round_no, len(tops), float(excess.max(initial=0.0)))
            with np.errstate(divide='ignore', invalid='ignore'):
                top_share = np.where(sent > 0, sent / total[owner], 0.0)
                bottom_share = np.where(received > 0, received / total[owner], 0.0)
            return vector, selection_from_shares(H, high - low, top_share, bottom_share)
        tops = np.concatenate([tops, new_tops[fresh]])
        bottoms = np.concatenate([bottoms, new_bottoms[fresh]])
    LOG.debug('pricing stopped after %d rounds', MAX_PRICING_ROUNDS)
    return None


def exact_ppr(H: Hypergraph, s, alpha: float) -> PprResult:
    """
        I return the PPR vector to machine precision.

        Graphs go through graph_ppr_exact.  Hypergraphs solve the convex
        program of the stationary point for a warm start and then its dual
        exactly as a non-negative least squares problem over the flows
        between edge members, which also recovers the subgradient the
        solution realizes.

        Args:
            H: Hypergraph
            s: seed vector
            alpha: teleport parameter in (0, 1]

        Returns:
            PprResult carrying the realized selection
    """
    if not 0 < alpha <= 1:
        raise InvalidParameter(f'alpha must lie in (0, 1], got {alpha}')
    s = as_vector(H, s)
    if alpha == 1.0:
        selection = select_subgradient(H, s / H.degrees)
        return PprResult(s.copy(), 0, residual(H, s, s, alpha, selection=selection), float(s.sum()), selection)
    if H.is_graph and H.n <= DENSE_LIMIT:
        vector = graph_ppr_exact(H, s, alpha)
        selection = select_subgradient(H, vector / H.degrees)
        return PprResult(vector, 0, residual(H, vector, s, alpha, selection=selection),
                         float(vector.sum()), selection)

    z = _solve_program(H, s, alpha)
    solved = _exact_flows(H, s, alpha, z)
    if solved is not None:
        vector, selection = solved
        defect = residual(H, vector, s, alpha, selection=selection)
        if defect <= 1e-10 * max(1.0, float(np.abs(s).sum())):
            LOG.debug('exact PPR residual %.3g', defect)
            return PprResult(vector, 0, defect, float(vector.sum()), selection)
        LOG.debug('flow solution residual %.3g is too large', defect)
    LOG.warning('exact PPR flow solve failed for alpha=%.4g, using the convex solver point', alpha)
    vector = z * H.degrees
    selection = select_subgradient(H, z)
    return PprResult(vector, 0, residual(H, vector, s, alpha, selection=selection),
                     float(vector.sum()), selection)
