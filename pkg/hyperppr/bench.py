#!env python
"""
    I time clustering runs seed by seed.
"""


# python libraries
import csv
import dataclasses
import io
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Optional


from halo import Halo
import numpy as np


from hyperppr.clustering import (
    GLOBAL_MU,
    LocalParams,
    baseline_expansion_clustering,
    local_clustering,
    sample_seeds,
)
from hyperppr.core import Hypergraph
from hyperppr.errors import InvalidParameter


LOG = logging.getLogger(__name__)
METHODS = ('local', 'clique', 'star')
COLUMNS = ['seed', 'method', 'phi', 'volume', 'size', 'alpha', 'seconds']
SENSITIVITY_COLUMNS = ['dt', 'total_time', 'mean_phi', 'best_phi', 'seeds', 'seconds']
DEFAULT_DELTAS = (0.5, 1.0, 2.0)
DEFAULT_TOTALS = tuple(float(total) for total in range(2, 31, 2))


@dataclass
class BenchReport:
    """ per seed rows and the totals of one benchmark """
    rows: list = field(default_factory=list)

    @property
    def total_seconds(self) -> float:
        return sum(row['seconds'] for row in self.rows)

    @property
    def best_phi(self) -> float:
        return min(row['phi'] for row in self.rows)

    def to_csv(self) -> str:
        """
            I return the rows as csv followed by a total row.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(COLUMNS)
        for row in self.rows:
            writer.writerow([row['seed'], row['method'], repr(row['phi']), repr(row['volume']),
                             row['size'], repr(row['alpha']), f"{row['seconds']:.6f}"])
        method = self.rows[0]['method'] if self.rows else ''
        writer.writerow(['total', method, repr(self.best_phi) if self.rows else '', '', len(self.rows), '',
                         f'{self.total_seconds:.6f}'])
        return buffer.getvalue()


def bench(H: Hypergraph, params: LocalParams, sample: Optional[int] = 50, rng_seed: int = 0,
          method: str = 'local', spinner: bool = False) -> BenchReport:
    """
        I run one clustering per sampled seed and record phi and wall clock.

        Args:
            H: Hypergraph
            params: LocalParams, mu is shared by the baselines
            sample: seed count, all vertices when None
            rng_seed: seed of the sampler
            method: local, clique or star
            spinner: show a progress spinner on stderr

        Returns:
            BenchReport
    """
    if method not in METHODS:
        raise InvalidParameter(f'method must be one of {", ".join(METHODS)}, got {method!r}')
    seeds = sample_seeds(H, sample, rng_seed)
    report = BenchReport()
    progress = Halo(text=f'{method} 0/{len(seeds)}', spinner='dots', stream=sys.stderr,
                    enabled=spinner and sys.stderr.isatty())
    progress.start()
    try:
        for index, seed in enumerate(seeds, start=1):
            started = time.perf_counter()
            if method == 'local':
                result = local_clustering(H, seed, params)
            else:
                result = baseline_expansion_clustering(H, seed, method, params.mu)
            elapsed = time.perf_counter() - started
            report.rows.append({
                'seed': seed,
                'method': method,
                'phi': result.conductance,
                'volume': result.volume,
                'size': len(result.members),
                'alpha': result.alpha,
                'seconds': elapsed,
            })
            progress.text = f'{method} {index}/{len(seeds)}'
    finally:
        progress.stop()
    LOG.info('bench %s: %d seeds in %.3fs, best phi %.6g', method, len(seeds),
             report.total_seconds, report.best_phi)
    return report


@dataclass
class SensitivityReport:
    """ one row per (dt, total_time) setting """
    rows: list = field(default_factory=list)

    def to_csv(self) -> str:
        """
            I return the rows as csv.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(SENSITIVITY_COLUMNS)
        for row in self.rows:
            writer.writerow([repr(row['dt']), repr(row['total_time']), repr(row['mean_phi']),
                             repr(row['best_phi']), row['seeds'], f"{row['seconds']:.6f}"])
        return buffer.getvalue()


def sensitivity(H: Hypergraph, params: LocalParams, deltas=DEFAULT_DELTAS, totals=DEFAULT_TOTALS,
                sample: Optional[int] = 50, rng_seed: int = 0, spinner: bool = False) -> SensitivityReport:
    """
        I run local clustering with mu = 1/2 from the same sampled seeds for
        every Euler step dt and total time T, recording the mean and best
        conductance and the wall clock of each setting.  Settings with
        dt > T are skipped.

        Args:
            H: Hypergraph
            params: LocalParams, dt, total_time and mu are replaced
            deltas: Euler steps to try
            totals: total times to try
            sample: seed count, all vertices when None
            rng_seed: seed of the sampler
            spinner: show a progress spinner on stderr

        Returns:
            SensitivityReport, rows ordered by dt then T
    """
    settings = [(float(dt), float(total)) for dt in deltas for total in totals if dt <= total]
    if not settings:
        raise InvalidParameter('no (dt, T) setting has dt <= T')
    seeds = sample_seeds(H, sample, rng_seed)
    report = SensitivityReport()
    progress = Halo(text=f'settings 0/{len(settings)}', spinner='dots', stream=sys.stderr,
                    enabled=spinner and sys.stderr.isatty())
    progress.start()
    try:
        for index, (dt, total) in enumerate(settings, start=1):
            local = dataclasses.replace(params, mu=GLOBAL_MU, dt=dt, total_time=total)
            started = time.perf_counter()
            phis = [local_clustering(H, seed, local).conductance for seed in seeds]
            elapsed = time.perf_counter() - started
            report.rows.append({
                'dt': dt,
                'total_time': total,
                'mean_phi': float(np.mean(phis)),
                'best_phi': min(phis),
                'seeds': len(seeds),
                'seconds': elapsed,
            })
            LOG.debug('dt=%g T=%g mean phi %.6g', dt, total, report.rows[-1]['mean_phi'])
            progress.text = f'settings {index}/{len(settings)}'
    finally:
        progress.stop()
    return report
