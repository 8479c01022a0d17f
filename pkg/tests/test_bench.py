"""
    Tests of the seed by seed benchmark.
"""


import pytest

from hyperppr.bench import (
    COLUMNS,
    DEFAULT_DELTAS,
    DEFAULT_TOTALS,
    SENSITIVITY_COLUMNS,
    BenchReport,
    bench,
    sensitivity,
)
from hyperppr.clustering import LocalParams
from hyperppr.errors import InvalidParameter


def test_bench_local(f1):
    report = bench(f1, LocalParams(mu=0.5), sample=None)
    assert [row['seed'] for row in report.rows] == [0, 1, 2, 3]
    assert report.best_phi == 0.5
    assert report.total_seconds >= 0.0
    assert all(set(row) == set(COLUMNS) for row in report.rows)


@pytest.mark.parametrize('method', ['clique', 'star'])
def test_bench_baselines(planted, method):
    H, _ = planted
    report = bench(H, LocalParams(mu=0.5), sample=4, rng_seed=2, method=method)
    assert len(report.rows) == 4
    assert {row['method'] for row in report.rows} == {method}
    assert all(0.0 <= row['phi'] <= 1.0 for row in report.rows)


def test_bench_rejects_unknown_method(f1):
    with pytest.raises(InvalidParameter):
        bench(f1, LocalParams(), method='spectral')


def test_report_csv():
    report = BenchReport([
        {'seed': 0, 'method': 'local', 'phi': 0.5, 'volume': 2.0, 'size': 2, 'alpha': 1.0, 'seconds': 0.25},
        {'seed': 3, 'method': 'local', 'phi': 0.75, 'volume': 1.0, 'size': 1, 'alpha': 0.2, 'seconds': 0.5},
    ])
    assert report.to_csv() == (
        'seed,method,phi,volume,size,alpha,seconds\n'
        '0,local,0.5,2.0,2,1.0,0.250000\n'
        '3,local,0.75,1.0,1,0.2,0.500000\n'
        'total,local,0.5,,2,,0.750000\n'
    )


def test_sensitivity_rows(f1):
    report = sensitivity(f1, LocalParams(), deltas=(0.5, 2.0), totals=(1.0, 4.0), sample=None)
    assert [(row['dt'], row['total_time']) for row in report.rows] == [(0.5, 1.0), (0.5, 4.0), (2.0, 4.0)]
    for row in report.rows:
        assert set(row) == set(SENSITIVITY_COLUMNS)
        assert row['seeds'] == 4
        assert row['best_phi'] <= row['mean_phi'] <= 1.0
        assert row['best_phi'] == 0.5
    assert report.to_csv().splitlines()[0] == ','.join(SENSITIVITY_COLUMNS)


def test_sensitivity_defaults_cover_the_grid(planted):
    H, _ = planted
    report = sensitivity(H, LocalParams(), totals=(2.0, 4.0), sample=2, rng_seed=1)
    assert len(report.rows) == 6
    assert {row['dt'] for row in report.rows} == set(DEFAULT_DELTAS)
    assert len(DEFAULT_TOTALS) == 15


def test_sensitivity_needs_a_setting(f1):
    with pytest.raises(InvalidParameter):
        sensitivity(f1, LocalParams(), deltas=(4.0,), totals=(1.0, 2.0))
