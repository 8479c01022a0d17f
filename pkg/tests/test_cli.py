"""
    Tests of the hyperppr command line.
"""


import csv
import io
import json

import pytest

from hyperppr.cli import RunConfig, _parse, run
from hyperppr.core import write_hypergraph


def test_stats(f1_path, capsys):
    assert run(['stats', f1_path]) == 0
    assert capsys.readouterr().out == 'n=4 m=2 avg_deg=1.25 avg_size=2.5\n'


def test_stats_table(f1_path, capsys):
    assert run(['stats', f1_path, '--table']) == 0
    out = capsys.readouterr().out
    assert out.startswith('Stats\n')
    assert 'avg_degree' in out


def test_convert_keeps_largest_component(bipartite_path, capsys):
    assert run(['convert', bipartite_path]) == 0
    assert capsys.readouterr().out == '3 2\n1 0 1\n1 1 2\n'


def test_convert_keep_all(bipartite_path, capsys):
    assert run(['convert', bipartite_path, '--keep-all']) == 0
    assert capsys.readouterr().out.splitlines()[0] == '5 3'


def test_ppr_at_alpha_one_is_the_seed(f1_path, capsys):
    assert run(['ppr', f1_path, '--seed-vertex', '0', '--alpha', '1.0']) == 0
    assert capsys.readouterr().out == 'vertex,value\n0,1.0\n1,0.0\n2,0.0\n3,0.0\n'


def test_ppr_exact_writes_out_file(f1_path, tmp_path):
    out = tmp_path / 'ppr.csv'
    assert run(['ppr', f1_path, '--seed-vertex', '0', '--exact', '--out', str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == 'vertex,value'
    assert sum(float(line.split(',')[1]) for line in lines[1:]) == pytest.approx(1.0, abs=1e-6)


def test_sweep(f1_path, capsys):
    assert run(['sweep', f1_path, '--seed-vertex', '0', '--alpha', '1.0']) == 0
    assert capsys.readouterr().out == (
        'j,vertex,vol,cut,phi\n'
        '1,0,1.0,1.0,1.0\n'
        '2,1,2.0,1.0,0.5\n'
        '3,2,4.0,1.0,1.0\n'
    )


def test_local(f1_path, capsys):
    assert run(['local', f1_path, '--seed-vertex', '0', '--mu', '0.5']) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['phi'] == 0.5
    assert result['members_sorted'] == [0, 1]
    assert result['method'] == 'local'


def test_local_several_seeds(f1_path, capsys):
    assert run(['local', f1_path, '--seed-vertex', '0', '--seed-vertex', '3', '--mu', '0.5']) == 0
    results = json.loads(capsys.readouterr().out)
    assert [result['seed'] for result in results] == [0, 3]


def test_global(f1_path, capsys):
    assert run(['global', f1_path]) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['method'] == 'global'
    assert result['seed'] == 0
    assert result['phi'] == 0.5


def test_baseline(f1_path, capsys):
    assert run(['baseline', f1_path, '--mode', 'clique', '--global']) == 0
    result = json.loads(capsys.readouterr().out)
    assert result['method'] == 'clique-global'
    assert result['phi'] == 0.5
    assert run(['baseline', f1_path]) == 1


def test_verify_json(f1_path, capsys):
    assert run(['verify', f1_path, '--check', 'sufficient', '--alpha', '0.1']) == 0
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) == 1
    assert reports[0]['name'] == 'sufficient-conditions'
    assert reports[0]['holds'] is True
    assert reports[0]['details']['criterion_degree'] is True


def test_verify_skips_checks_without_inputs(f1_path, capsys):
    assert run(['verify', f1_path, '--alpha', '0.5', '--seed-vertex', '0', '--table']) == 0
    out = capsys.readouterr().out
    assert out.startswith('Checks\n')
    assert 'ppr-axioms' in out
    assert 'leak-global' not in out


def test_verify_requires_inputs_of_named_checks(f1_path):
    assert run(['verify', f1_path, '--check', 'axioms']) == 1
    assert run(['verify', f1_path, '--check', 'mixing', '--seed-vertex', '0']) == 1


def test_gen(capsys):
    assert run(['gen', '--vertices', '12', '--edges-per-cluster', '6', '--rng-seed', '1']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == '12 13'
    assert len(lines) == 14


def test_bench_generated(capsys):
    assert run(['bench', '--generate', '60', '--sample', '5']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7
    assert lines[0] == 'seed,method,phi,volume,size,alpha,seconds'
    assert lines[-1].startswith('total,local,')


def test_config_file(f1_path, tmp_path, capsys):
    config = tmp_path / 'run.yaml'
    config.write_text('mu: 0.5\nseed-vertex: [0]\n')
    assert run(['local', f1_path, '--config', str(config)]) == 0
    assert json.loads(capsys.readouterr().out)['phi'] == 0.5


def test_config_file_errors(f1_path, tmp_path):
    unknown = tmp_path / 'run.json'
    unknown.write_text('{"colour": "red"}')
    assert run(['local', f1_path, '--config', str(unknown)]) == 1
    wrong = tmp_path / 'run.txt'
    wrong.write_text('mu: 0.5')
    assert run(['local', f1_path, '--config', str(wrong)]) == 2
    assert run(['local', f1_path, '--config', str(tmp_path / 'missing.yaml')]) == 2


def test_exit_codes(f1_path, tmp_path):
    assert run(['stats', str(tmp_path / 'missing.hg')]) == 2
    assert run(['frobnicate']) == 1
    assert run([]) == 1
    assert run(['ppr', f1_path, '--seed-vertex', '0', '--alpha', '2']) == 1
    assert run(['local', f1_path, '--seed-vertex', '9']) == 2
    bad = tmp_path / 'bad.hg'
    bad.write_text('3 1\n1 0 1\n')
    assert run(['stats', str(bad)]) == 2


def test_diverging_diffusion_exits_with_computation_error(tmp_path):
    stiff = tmp_path / 'stiff.hg'
    stiff.write_text('2 2\n1000 0 1\n0.001 0\n')
    argv = ['ppr', str(stiff), '--seed-vertex', '0', '--alpha', '0.01', '--dt', '500',
            '--total-time', '200000', '--theta', '0']
    assert run(argv) == 3


def test_run_config_defaults(f1_path):
    assert RunConfig.from_args(_parse(['local', f1_path, '--seed-vertex', '1'])).mu == 0.1
    assert RunConfig.from_args(_parse(['global', f1_path, '--mu', '0.2'])).mu == 0.5
    assert RunConfig.from_args(_parse(['baseline', f1_path, '--global'])).mu == 0.5
    config = RunConfig.from_args(_parse(['verify', f1_path, '--cluster', '0,1', '--check', 'leak-local']))
    assert config.cluster == (0, 1)
    assert config.checks == ('leak-local',)
    assert config.ppr_params().alpha == 0.1


@pytest.mark.parametrize('argv', [
    ['stats', '{f1}'],
    ['convert', '{bipartite}'],
    ['sweep', '{f1}', '--seed-vertex', '0', '--alpha', '0.3'],
    ['local', '{f1}', '--seed-vertex', '0', '--seed-vertex', '3', '--mu', '0.5'],
    ['global', '{f1}'],
])
def test_repeated_runs_print_the_same_bytes(f1_path, bipartite_path, capsys, argv):
    argv = [item.format(f1=f1_path, bipartite=bipartite_path) for item in argv]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first


def test_bench_phi_matches_local(planted, tmp_path, capsys):
    H, _ = planted
    path = tmp_path / 'planted.hg'
    write_hypergraph(H, str(path))
    assert run(['bench', str(path), '--sample', '3', '--mu', '0.5']) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    seeded = [row for row in rows if row['seed'] != 'total']
    assert len(seeded) == 3
    for row in seeded:
        assert run(['local', str(path), '--seed-vertex', row['seed'], '--mu', '0.5']) == 0
        assert json.loads(capsys.readouterr().out)['phi'] == float(row['phi'])


def test_bench_parameter_sensitivity(f1_path, capsys):
    assert run(['bench', f1_path, '--sweep-delta', '0.5,1', '--sweep-T', '1,2', '--sample', '2']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'dt,total_time,mean_phi,best_phi,seeds,seconds'
    assert [line.split(',')[:2] for line in lines[1:]] == [
        ['0.5', '1.0'], ['0.5', '2.0'], ['1.0', '1.0'], ['1.0', '2.0'],
    ]
    assert run(['bench', f1_path, '--sweep-delta', 'fast']) == 1
    assert run(['bench', f1_path, '--sweep-delta', '4', '--sweep-T', '1,2']) == 2
