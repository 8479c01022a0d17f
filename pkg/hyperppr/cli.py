#!env python
"""
    I provide the hyperppr command line.

    Exit codes: 0 success, 1 usage error, 2 input error, 3 computation error.
"""


# python libraries
import argparse
import dataclasses
import io
import logging
import sys
from dataclasses import dataclass
from typing import Optional


import cvxpy as cp
from halo import Halo


import hyperppr.common
from hyperppr.bench import DEFAULT_DELTAS, DEFAULT_TOTALS, METHODS, bench, sensitivity
from hyperppr.clustering import (
    LocalParams,
    baseline_expansion_clustering,
    baseline_global_clustering,
    global_clustering,
    local_clustering,
)
from hyperppr.core import (
    connectivity,
    read_bipartite,
    read_hypergraph,
    serialize_hypergraph,
    stats,
    subhypergraph,
)
from hyperppr.diffusion import PprParams, euler_ppr, exact_ppr
from hyperppr.errors import ComputationError, InputError, InvalidParameter, VertexOutOfRange
from hyperppr.sweep import check_key_lemma, check_ls_step, check_mixing, sweep_profile, write_profile_csv
from hyperppr.synthetic import planted_partition
from hyperppr import verify


LOG = logging.getLogger(__name__)
CHECKS = ('axioms', 'leak-local', 'leak-global', 'sufficient', 'continuity', 'key-lemma',
          'main-local', 'main-global', 'mixing', 'ls-step')
LOCAL_MU = 0.1
GLOBAL_MU = 0.5
DEFAULT_ALPHA = 0.1


class UsageError(Exception):
    """ the command line itself is wrong """


class _Parser(argparse.ArgumentParser):
    """ argparse that raises instead of exiting with status 2 """

    def error(self, message):
        raise UsageError(message)



def _float_list(flag: str, value) -> tuple:
    """ comma separated string or config list to a tuple of floats """
    items = value.split(',') if isinstance(value, str) else list(value)
    try:
        parsed = tuple(float(item) for item in items)
    except (TypeError, ValueError) as err_msg:
        raise UsageError(f'{flag} expects comma separated numbers, got {value!r}') from err_msg
    if not parsed or any(item <= 0 for item in parsed):
        raise UsageError(f'{flag} expects positive numbers, got {value!r}')
    return parsed

@dataclass(frozen=True)
class RunConfig:
    """
        I hold one parsed command line.
    """
    command: str
    input: Optional[str] = None
    out: Optional[str] = None
    alpha: Optional[float] = None
    mu: Optional[float] = None
    epsilon: float = 0.9
    dt: float = 1.0
    total_time: float = 30.0
    theta: float = 1e-5
    tie_tol: float = 0.0
    seeds: tuple = ()
    sample: Optional[int] = None
    rng_seed: int = 0
    exact: bool = False
    mode: str = 'star'
    drop_isolated: bool = False
    workers: int = 1
    table: bool = False
    checks: tuple = ()
    cluster: tuple = ()
    delta: Optional[float] = None
    global_run: bool = False
    keep_all: bool = False
    method: str = 'local'
    generate: Optional[int] = None
    vertices: int = 32
    clusters: int = 2
    edges_per_cluster: Optional[int] = None
    edge_size: int = 3
    crossing: int = 1
    sweep_delta: tuple = ()
    sweep_total: tuple = ()

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        """
            I build the config from parsed arguments, filling command defaults.
        """
        known = {item.name for item in dataclasses.fields(cls)}
        values = {key: value for key, value in vars(args).items() if key in known and value is not None}
        values['seeds'] = tuple(getattr(args, 'seed_vertex', None) or ())
        values['checks'] = tuple(getattr(args, 'check', None) or ())
        cluster = getattr(args, 'cluster', None)
        if cluster:
            try:
                values['cluster'] = tuple(int(v) for v in cluster.split(','))
            except ValueError as err_msg:
                raise UsageError(f'--cluster expects comma separated ids, got {cluster!r}') from err_msg
        for flag, key in (('--sweep-delta', 'sweep_delta'), ('--sweep-T', 'sweep_total')):
            if key in values:
                values[key] = _float_list(flag, values[key])
        if 'mu' not in values and args.command in ('local', 'baseline', 'bench'):
            values['mu'] = GLOBAL_MU if getattr(args, 'global_run', False) else LOCAL_MU
        if args.command == 'global':
            values['mu'] = GLOBAL_MU
        return cls(**values)

    def local_params(self) -> LocalParams:
        """ the clustering settings """
        return LocalParams(
            mu=self.mu if self.mu is not None else LOCAL_MU,
            epsilon=self.epsilon,
            dt=self.dt,
            total_time=self.total_time,
            theta=self.theta,
            tie_tol=self.tie_tol,
            alphas=(self.alpha,) if self.alpha is not None else None,
            exact=self.exact,
        )

    def ppr_params(self) -> PprParams:
        """ the diffusion settings """
        return PprParams(self.alpha if self.alpha is not None else DEFAULT_ALPHA,
                         self.dt, self.total_time, self.theta, self.tie_tol)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--verbose',
                        dest='verbosity',
                        action='count',
                        default=0,
                        help='Use multiple times to increase logging level')
    parser.add_argument('--config',
                        dest='config',
                        required=False,
                        help='A json or yaml file of flag defaults, ie {"alpha": 0.1}')
    parser.add_argument('--out',
                        dest='out',
                        required=False,
                        help='Write the result to this file instead of stdout.')


def _add_input(parser: argparse.ArgumentParser, required: bool = True) -> None:
    parser.add_argument('input',
                        nargs=None if required else '?',
                        help='Hypergraph file, "n m" header then "w v1 .. vk" lines.')
    parser.add_argument('--drop-isolated',
                        dest='drop_isolated',
                        action='store_true',
                        default=False,
                        help='Remove degree 0 vertices instead of failing.')


def _add_ppr(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--alpha', dest='alpha', type=float, help='Teleport parameter in (0, 1].')
    parser.add_argument('--dt', dest='dt', type=float, help='Euler step, default 1.0.')
    parser.add_argument('--total-time', dest='total_time', type=float, help='Simulated time, default 30.')
    parser.add_argument('--theta', dest='theta', type=float, help='Truncation threshold, default 1e-5.')
    parser.add_argument('--tie-tol', dest='tie_tol', type=float, help='Tie tolerance, default 0.')
    parser.add_argument('--exact',
                        dest='exact',
                        action='store_true',
                        default=None,
                        help='Solve PPR exactly instead of by Euler steps.')


def _add_seeds(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--seed-vertex', dest='seed_vertex', type=int, action='append',
                        help='Seed vertex, repeat for several.')
    parser.add_argument('--sample', dest='sample', type=int, help='Sample this many seed vertices.')
    parser.add_argument('--rng-seed', dest='rng_seed', type=int, help='Seed of the sampler, default 0.')
    parser.add_argument('--workers', dest='workers', type=int, help='Threads for seed loops, default 1.')


def _add_cluster(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--mu', dest='mu', type=float, help='Volume cap fraction in (0, 1/2].')
    parser.add_argument('--epsilon', dest='epsilon', type=float, help='Alpha grid ratio, default 0.9.')


def _options() -> _Parser:
    """
        I provide the argparse option set.

        Returns
            argparse parser object.
    """
    parser = _Parser(prog='hyperppr', description='Hypergraph personalized PageRank clustering.')
    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    command = commands.add_parser('stats', help='Print n, m, average degree and edge size.')
    _add_common(command)
    _add_input(command)
    command.add_argument('--table', dest='table', action='store_true', default=None, help='Print a table.')

    command = commands.add_parser('convert', help='Convert a bipartite edge list to a hypergraph.')
    _add_common(command)
    command.add_argument('input', help='Bipartite "left right" lines, 1 based.')
    command.add_argument('--keep-all', dest='keep_all', action='store_true', default=None,
                         help='Keep every component instead of the largest.')

    for name, text in (('ppr', 'Dump the PPR vector as csv.'), ('sweep', 'Dump the sweep profile as csv.')):
        command = commands.add_parser(name, help=text)
        _add_common(command)
        _add_input(command)
        _add_ppr(command)
        _add_seeds(command)

    command = commands.add_parser('local', help='Local clustering from seed vertices.')
    _add_common(command)
    _add_input(command)
    _add_ppr(command)
    _add_seeds(command)
    _add_cluster(command)

    command = commands.add_parser('global', help='Global clustering over seed vertices.')
    _add_common(command)
    _add_input(command)
    _add_ppr(command)
    _add_seeds(command)
    _add_cluster(command)

    command = commands.add_parser('baseline', help='CLIQUE or STAR baseline clustering.')
    _add_common(command)
    _add_input(command)
    _add_seeds(command)
    _add_cluster(command)
    command.add_argument('--mode', dest='mode', choices=['clique', 'star'], help='Expansion, default star.')
    command.add_argument('--global', dest='global_run', action='store_true', default=None,
                         help='Best result over the seeds with mu = 1/2.')

    command = commands.add_parser('verify', help='Check the PPR and clustering inequalities.')
    _add_common(command)
    _add_input(command)
    _add_ppr(command)
    _add_seeds(command)
    _add_cluster(command)
    command.add_argument('--check', dest='check', choices=CHECKS, action='append',
                         help='Check to run, repeat for several, default all that apply.')
    command.add_argument('--cluster', dest='cluster', help='Comma separated ids of the set C.')
    command.add_argument('--delta', dest='delta', type=float, help='Mass excess of the key lemma.')
    command.add_argument('--table', dest='table', action='store_true', default=None, help='Print a table.')

    command = commands.add_parser('bench', help='Time clustering per sampled seed.')
    _add_common(command)
    _add_input(command, required=False)
    _add_ppr(command)
    _add_seeds(command)
    _add_cluster(command)
    command.add_argument('--method', dest='method', choices=list(METHODS), help='Default local.')
    command.add_argument('--generate', dest='generate', type=int,
                         help='Benchmark a generated planted partition with this many vertices.')
    command.add_argument('--clusters', dest='clusters', type=int, help='Planted clusters, default 2.')
    command.add_argument('--sweep-delta', dest='sweep_delta',
                         help='Comma separated Euler steps; runs the parameter sensitivity table.')
    command.add_argument('--sweep-T', dest='sweep_total',
                         help='Comma separated total times; runs the parameter sensitivity table.')

    command = commands.add_parser('gen', help='Generate a planted partition hypergraph.')
    _add_common(command)
    command.add_argument('--vertices', dest='vertices', type=int, help='Vertex count, default 32.')
    command.add_argument('--clusters', dest='clusters', type=int, help='Planted clusters, default 2.')
    command.add_argument('--edges-per-cluster', dest='edges_per_cluster', type=int,
                         help='Internal edges per cluster, default 2.5 per vertex.')
    command.add_argument('--edge-size', dest='edge_size', type=int, help='Members per edge, default 3.')
    command.add_argument('--crossing', dest='crossing', type=int, help='Crossing edges, default 1.')
    command.add_argument('--rng-seed', dest='rng_seed', type=int, help='Generator seed, default 0.')
    return parser


def _parse(argv: list) -> argparse.Namespace:
    """
        I parse argv, using a --config file as defaults for the chosen command.
    """
    parser = _options()
    args = parser.parse_args(argv)
    if not getattr(args, 'config', None):
        return args
    defaults = hyperppr.common.load_config(args.config)
    subparser = parser._subparsers._group_actions[0].choices[args.command]  # pylint: disable=protected-access
    allowed = {action.dest for action in subparser._actions}  # pylint: disable=protected-access
    unknown = sorted(set(defaults) - allowed)
    if unknown:
        raise UsageError(f'unknown keys in {args.config}: {", ".join(unknown)}')
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _emit(config: RunConfig, text: str) -> None:
    if config.out:
        with open(config.out, 'w', encoding='utf8') as file_handler:
            file_handler.write(text)
    else:
        sys.stdout.write(text)


def _load(config: RunConfig):
    if not config.input:
        raise UsageError('an input file is required')
    return read_hypergraph(config.input, config.drop_isolated)


def _seed_vector(H, config: RunConfig):
    if not config.seeds:
        raise UsageError('--seed-vertex is required')
    vector = [0.0] * H.n
    for vertex in config.seeds:
        if not 0 <= vertex < H.n:
            raise VertexOutOfRange(vertex, H.n)
        vector[vertex] += 1.0 / len(config.seeds)
    return vector


def _ppr(H, config: RunConfig):
    seed = _seed_vector(H, config)
    if config.exact:
        return exact_ppr(H, seed, config.ppr_params().alpha)
    return euler_ppr(H, seed, config.ppr_params())


def _spinner(text: str):
    spinner = Halo(text=text, spinner='dots', stream=sys.stderr, enabled=sys.stderr.isatty())

    def progress(done, total):
        spinner.text = f'{text} {done}/{total}'

    return spinner, progress


def _results(results: list) -> str:
    if len(results) == 1:
        return hyperppr.common.dump_json(results[0].to_dict())
    return hyperppr.common.dump_json([result.to_dict() for result in results])


def _cmd_stats(config: RunConfig) -> int:
    summary = stats(_load(config))
    if config.table:
        _emit(config, hyperppr.common.display_table([summary.to_dict()], 'Stats'))
    else:
        _emit(config, f'{summary}\n')
    return 0


def _cmd_convert(config: RunConfig) -> int:
    H = read_bipartite(config.input)
    if not config.keep_all:
        components = connectivity(H)
        if len(components.components) > 1:
            LOG.info('keeping the largest of %d components, %d of %d vertices',
                     len(components.components), len(components.largest), H.n)
            H = subhypergraph(H, components.largest)
    LOG.info('%s', stats(H))
    _emit(config, serialize_hypergraph(H))
    return 0


def _cmd_ppr(config: RunConfig) -> int:
    H = _load(config)
    result = _ppr(H, config)
    LOG.info('ppr: %d iterations, residual %.3g, mass %.9g', result.iterations,
             result.final_residual, result.mass)
    lines = ['vertex,value'] + [f'{vertex},{float(value)!r}' for vertex, value in enumerate(result.vector)]
    _emit(config, '\n'.join(lines) + '\n')
    return 0


def _cmd_sweep(config: RunConfig) -> int:
    H = _load(config)
    buffer = io.StringIO()
    write_profile_csv(sweep_profile(H, _ppr(H, config).vector), buffer)
    _emit(config, buffer.getvalue())
    return 0


def _cmd_local(config: RunConfig) -> int:
    H = _load(config)
    if not config.seeds:
        raise UsageError('--seed-vertex is required')
    params = config.local_params()
    _emit(config, _results([local_clustering(H, vertex, params) for vertex in config.seeds]))
    return 0


def _cmd_global(config: RunConfig) -> int:
    H = _load(config)
    spinner, progress = _spinner('global')
    spinner.start()
    try:
        result = global_clustering(H, config.local_params(), seeds=config.seeds or None,
                                   rng_seed=config.rng_seed, sample=config.sample,
                                   workers=config.workers, progress=progress)
    finally:
        spinner.stop()
    _emit(config, _results([result]))
    return 0


def _cmd_baseline(config: RunConfig) -> int:
    H = _load(config)
    if config.global_run:
        spinner, progress = _spinner(f'{config.mode}-global')
        spinner.start()
        try:
            result = baseline_global_clustering(H, config.mode, seeds=config.seeds or None,
                                                rng_seed=config.rng_seed, sample=config.sample,
                                                workers=config.workers, progress=progress)
        finally:
            spinner.stop()
        _emit(config, _results([result]))
        return 0
    if not config.seeds:
        raise UsageError('--seed-vertex is required unless --global is given')
    _emit(config, _results([
        baseline_expansion_clustering(H, vertex, config.mode, config.mu) for vertex in config.seeds
    ]))
    return 0


def _run_checks(H, config: RunConfig) -> list:
    alpha = config.ppr_params().alpha
    mu = config.mu if config.mu is not None else GLOBAL_MU
    seeds = list(config.seeds)
    vertex = seeds[0] if seeds else None
    cluster = config.cluster or None
    checks = config.checks or CHECKS
    reports = []
    for check in checks:
        needs_vertex = check in ('axioms', 'leak-local', 'continuity', 'key-lemma', 'main-local', 'mixing', 'ls-step')
        needs_cluster = check in ('leak-local', 'leak-global', 'key-lemma', 'main-local', 'main-global')
        if (needs_vertex and vertex is None) or (needs_cluster and cluster is None) or \
                (check == 'key-lemma' and config.delta is None) or \
                (check in ('mixing', 'ls-step') and not H.is_graph):
            if config.checks:
                raise UsageError(f'check {check} needs --seed-vertex, --cluster, --delta or a graph input')
            LOG.info('skipping %s, its inputs are missing', check)
            continue
        seed = _seed_vector(H, config) if needs_vertex else None
        if check == 'axioms':
            reports.append(verify.check_ppr_axioms(H, alpha, vertex))
        elif check == 'leak-local':
            reports.append(verify.check_leak_local(H, cluster, vertex, alpha))
        elif check == 'leak-global':
            reports.append(verify.check_leak_global(H, cluster, alpha))
        elif check == 'sufficient':
            reports.append(verify.check_sufficient_conditions(H, alpha, cluster))
        elif check == 'continuity':
            reports.append(verify.check_continuity(H, seed, [alpha, min(1.0, alpha + 1e-3)]))
        elif check == 'key-lemma':
            reports.append(check_key_lemma(H, seed, alpha, mu, cluster, config.delta))
        elif check == 'main-local':
            reports.append(verify.check_main_local_bound(H, vertex, cluster, config.epsilon, mu))
        elif check == 'main-global':
            reports.append(verify.check_main_global_bound(H, cluster, config.epsilon))
        elif check == 'mixing':
            reports.append(check_mixing(H, seed, alpha, mu))
        else:
            reports.append(check_ls_step(H, seed, alpha))
    return reports


def _cmd_verify(config: RunConfig) -> int:
    H = _load(config)
    reports = _run_checks(H, config)
    for report in reports:
        if report.failed:
            LOG.warning('%s does not hold: lhs=%.6g rhs=%.6g', report.name, report.lhs, report.rhs)
    if config.table:
        rows = [{key: value for key, value in report.to_dict().items() if key != 'details'} for report in reports]
        _emit(config, hyperppr.common.display_table(rows, 'Checks'))
    else:
        _emit(config, hyperppr.common.dump_json([report.to_dict() for report in reports]))
    return 0


def _planted(config: RunConfig, vertices: int):
    if config.clusters < 1 or vertices < config.clusters * config.edge_size:
        raise InvalidParameter('need at least edge_size vertices per cluster')
    sizes = [vertices // config.clusters] * config.clusters
    sizes[-1] += vertices - sum(sizes)
    edges = config.edges_per_cluster or max(sizes) * 5 // 2
    return planted_partition(sizes, edges, config.edge_size, config.crossing, config.rng_seed)


def _cmd_bench(config: RunConfig) -> int:
    if config.generate:
        clusters = max(config.clusters, config.generate // 100)
        H, _ = _planted(dataclasses.replace(config, clusters=clusters, crossing=max(config.crossing, clusters - 1)),
                        config.generate)
    else:
        H = _load(config)
    if config.sweep_delta or config.sweep_total:
        table = sensitivity(H, config.local_params(), deltas=config.sweep_delta or DEFAULT_DELTAS,
                            totals=config.sweep_total or DEFAULT_TOTALS, sample=config.sample or 50,
                            rng_seed=config.rng_seed, spinner=True)
        _emit(config, table.to_csv())
        return 0
    report = bench(H, config.local_params(), sample=config.sample or 50, rng_seed=config.rng_seed,
                   method=config.method, spinner=True)
    _emit(config, report.to_csv())
    return 0


def _cmd_gen(config: RunConfig) -> int:
    H, clusters = _planted(config, config.vertices)
    for index, cluster in enumerate(clusters):
        LOG.info('cluster %d: %d..%d', index, min(cluster), max(cluster))
    _emit(config, serialize_hypergraph(H))
    return 0


COMMANDS = {
    'stats': _cmd_stats,
    'convert': _cmd_convert,
    'ppr': _cmd_ppr,
    'sweep': _cmd_sweep,
    'local': _cmd_local,
    'global': _cmd_global,
    'baseline': _cmd_baseline,
    'verify': _cmd_verify,
    'bench': _cmd_bench,
    'gen': _cmd_gen,
}


def run(argv: list) -> int:
    """
        I run one command and return its exit code.

        Args:
            argv: the arguments after the program name

        Returns:
            0 success, 1 usage error, 2 input error, 3 computation error
    """
    if not logging.getLogger().handlers:
        logging.basicConfig(stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')
    try:
        args = _parse(argv)
        hyperppr.common.set_level(args.verbosity)
        config = RunConfig.from_args(args)
        config.local_params()
        config.ppr_params()
    except (UsageError, InvalidParameter) as err_msg:
        LOG.error('usage: %s', err_msg)
        return 1
    except (OSError, ValueError) as err_msg:
        LOG.error('config: %s', err_msg)
        return 2
    try:
        return COMMANDS[config.command](config)
    except UsageError as err_msg:
        LOG.error('usage: %s', err_msg)
        return 1
    except (InputError, OSError) as err_msg:
        LOG.error('input: %s', err_msg)
        return 2
    except (ComputationError, ArithmeticError, cp.error.SolverError) as err_msg:
        LOG.error('computation: %s', err_msg)
        return 3


def _main() -> None:
    """ main
    """
    sys.exit(run(sys.argv[1:]))


if __name__ == '__main__':
    _main()
