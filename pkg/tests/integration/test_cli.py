import csv
import json

import pytest
from click.testing import CliRunner

from src.cli.main import cli
from src.entity.repositories.hypergraph_repository import load_hypergraph


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner, tmp_path, monkeypatch):
    """Run the CLI with outputs under tmp_path/out and the development profile."""
    monkeypatch.delenv('ENVIRONMENT', raising=False)
    out_dir = tmp_path / 'out'

    def _invoke(*args):
        return runner.invoke(cli, ['--out', str(out_dir), '--environment', 'development', *args])

    _invoke.out_dir = out_dir
    return _invoke


def read_report(path):
    with open(path, encoding='utf-8') as f:
        return json.load(f)


def read_rows(path):
    with open(path, newline='', encoding='utf-8') as f:
        return list(csv.DictReader(f))


def edge_lines(path):
    return [line for line in path.read_text().splitlines() if not line.startswith('#')]


class TestStats:
    def test_writes_all_outputs(self, invoke, toy_dataset):
        result = invoke('stats', '--input', str(toy_dataset))
        assert result.exit_code == 0, result.output
        assert 'Measured 6 nodes, 6 hyperedges' in result.output

        for name in ('egonets.csv', 'pair_degrees.csv', 'triple_degrees.csv',
                     'homogeneity.csv', 'summary.json'):
            assert (invoke.out_dir / name).exists(), name

        egonets = read_rows(invoke.out_dir / 'egonets.csv')
        assert len(egonets) == 6
        assert all(float(row['overlapness']) >= 1.0 for row in egonets)

        report = read_report(invoke.out_dir / 'summary.json')
        assert set(report) == {'schema_version', 'tool_version', 'command', 'seed', 'config',
                               'generated_at', 'data'}
        assert report['command'] == 'stats'
        assert report['data']['num_edges'] == 6
        assert report['data']['triples']['mode'] == 'exact'

    def test_sampled_triples(self, invoke, toy_dataset):
        result = invoke('stats', '--input', str(toy_dataset), '--triples', 'sampled',
                        '--budget', '1000')
        assert result.exit_code == 0, result.output
        triples = read_report(invoke.out_dir / 'summary.json')['data']['triples']
        assert triples['mode'] == 'sampled'
        assert triples['reason'] == 'sampled mode requested'

    def test_null_model(self, invoke, block_dataset):
        result = invoke('--seed', '3', 'stats', '--input', str(block_dataset), '--null-seed', '7')
        assert result.exit_code == 0, result.output
        report = read_report(invoke.out_dir / 'summary.json')
        assert report['seed'] == 3
        assert report['data']['null_model']['seed'] == 7

    def test_missing_file(self, invoke, tmp_path):
        result = invoke('stats', '--input', str(tmp_path / 'absent.txt'))
        assert result.exit_code == 1
        assert 'Error' in result.output

    def test_invalid_budget(self, invoke, toy_dataset):
        result = invoke('stats', '--input', str(toy_dataset), '--budget', '0')
        assert result.exit_code == 1
        assert '--budget' in result.output

    def test_manager_failure_exits_nonzero(self, invoke, toy_dataset, mocker):
        manager_cls = mocker.patch('src.cli.main.HypergraphManager')
        manager_cls.return_value.compute_stats.return_value = {
            'success': False, 'error': 'boom', 'error_type': 'ParseError'}
        result = invoke('stats', '--input', str(toy_dataset))
        assert result.exit_code == 1
        assert 'Error (ParseError): boom' in result.output


class TestCompare:
    def test_self_comparison(self, invoke, toy_dataset):
        result = invoke('compare', '--input', str(toy_dataset), '--against', str(toy_dataset))
        assert result.exit_code == 0, result.output
        data = read_report(invoke.out_dir / 'compare.json')['data']
        for name, value in data['d_statistics'].items():
            assert value is None or value == 0.0, name
        for value in data['significance'].values():
            assert value is None or value == 0.0


class TestTailfit:
    def test_size_distribution(self, invoke, block_dataset):
        result = invoke('tailfit', '--input', str(block_dataset), '--distribution', 'size')
        assert result.exit_code == 0, result.output
        data = read_report(invoke.out_dir / 'tailfit_size.json')['data']
        assert data['distribution'] == 'size'
        assert data['fit']['xmin'] == 2.0
        assert data['fit']['discrete'] is True
        assert set(data['fit']['ratios']) == {'power_law', 'truncated_power_law', 'log_normal'}

    def test_too_small_tail(self, invoke, write_edges):
        path = write_edges(['a b', 'c d', 'e f'], name='tiny.txt')
        result = invoke('tailfit', '--input', str(path), '--distribution', 'size')
        assert result.exit_code == 1
        assert 'InsufficientTail' in result.output

    def test_invalid_xmin(self, invoke, toy_dataset):
        result = invoke('tailfit', '--input', str(toy_dataset), '--xmin', 'median')
        assert result.exit_code == 1
        assert '--xmin' in result.output


class TestGenerate:
    def test_hypercl_from_dataset(self, invoke, block_dataset):
        result = invoke('generate', 'hypercl', '--input', str(block_dataset))
        assert result.exit_code == 0, result.output
        lines = edge_lines(invoke.out_dir / 'hypercl.txt')
        assert len(lines) == load_hypergraph(block_dataset).num_edges
        report = read_report(invoke.out_dir / 'hypercl.txt.report.json')
        assert report['data']['generator']['model'] == 'hypercl'
        assert not (invoke.out_dir / 'hypercl.txt.levels').exists()

    def test_hyperlap_from_lists(self, invoke):
        result = invoke('generate', 'hyperlap', '--sizes', '2,2,3,2', '--degrees', '1,1,1,1',
                        '--weights', '0.5,0.5')
        assert result.exit_code == 0, result.output
        assert len(edge_lines(invoke.out_dir / 'hyperlap.txt')) == 4
        levels = (invoke.out_dir / 'hyperlap.txt.levels').read_text().split()
        assert set(levels) <= {'1', '2'}
        generator = read_report(invoke.out_dir / 'hyperlap.txt.report.json')['data']['generator']
        assert generator['levels'] == 2
        assert generator['weights'] == [0.5, 0.5]

    def test_weights_must_sum_to_one(self, invoke, toy_dataset):
        result = invoke('generate', 'hyperlap', '--input', str(toy_dataset),
                        '--weights', '0.5,0.4')
        assert result.exit_code == 1
        assert 'Weights must sum to 1' in result.output

    def test_uniform_weights_conflict(self, invoke, toy_dataset):
        result = invoke('generate', 'hyperlap', '--input', str(toy_dataset),
                        '--weights', '0.5,0.5', '--uniform-weights')
        assert result.exit_code == 1
        assert '--uniform-weights' in result.output

    def test_needs_a_source(self, invoke):
        result = invoke('generate', 'hypercl')
        assert result.exit_code == 1

    def test_seed_is_reproducible(self, invoke, block_dataset):
        invoke('--seed', '5', 'generate', 'hyperlap', '--input', str(block_dataset),
               '--name', 'a.txt')
        invoke('--seed', '5', '--threads', '3', 'generate', 'hyperlap', '--input',
               str(block_dataset), '--name', 'b.txt')
        assert (invoke.out_dir / 'a.txt').read_text() == (invoke.out_dir / 'b.txt').read_text()


class TestUpscale:
    def test_scales_counts(self, invoke, toy_dataset):
        result = invoke('upscale', '--input', str(toy_dataset), '--factor', '3')
        assert result.exit_code == 0, result.output
        lines = edge_lines(invoke.out_dir / 'upscaled_x3.txt')
        assert len(lines) == 18
        stats = read_report(invoke.out_dir / 'upscaled_x3.txt.report.json')['data']['stats']
        assert stats['num_edges'] == 18
        assert stats['num_nodes'] == 18
        assert stats['sum_sizes'] == 3 * 15

    def test_invalid_factor(self, invoke, toy_dataset):
        result = invoke('upscale', '--input', str(toy_dataset), '--factor', '0')
        assert result.exit_code == 1


class TestFit:
    def test_writes_fitted_hypergraph(self, invoke, block_dataset):
        result = invoke('--seed', '2', 'fit', '--input', str(block_dataset), '--resolution', '0.25')
        assert result.exit_code == 0, result.output
        num_edges = load_hypergraph(block_dataset).num_edges
        assert len(edge_lines(invoke.out_dir / 'fitted.txt')) == num_edges
        assert len((invoke.out_dir / 'fitted.txt.levels').read_text().split()) == num_edges
        report = read_report(invoke.out_dir / 'fit_report.json')['data']
        assert report['final_hhd'] <= report['initial_hhd']
        assert sum(report['weights']) == pytest.approx(1.0)

    def test_invalid_resolution(self, invoke, block_dataset):
        result = invoke('fit', '--input', str(block_dataset), '--resolution', '1.5')
        assert result.exit_code == 1
        assert 'Resolution must be in (0, 1]' in result.output


class TestBench:
    def test_factor_ladder(self, invoke, toy_dataset):
        result = invoke('bench', '--input', str(toy_dataset), '--factors', '1,2')
        assert result.exit_code == 0, result.output
        rows = read_rows(invoke.out_dir / 'bench.csv')
        assert [int(r['factor']) for r in rows] == [1, 2]
        assert [int(r['num_edges']) for r in rows] == [6, 12]
        data = read_report(invoke.out_dir / 'bench.json')['data']
        assert data['failed'] == []

    def test_failed_factor_exits_nonzero(self, invoke, toy_dataset, mocker):
        mocker.patch('src.interactor.business_logic.hypergraph_manager.HypergraphManager.bench_point',
                     return_value={'success': False, 'error': 'boom', 'error_type': 'Error'})
        result = invoke('bench', '--input', str(toy_dataset), '--factors', '1')
        assert result.exit_code == 1
        data = read_report(invoke.out_dir / 'bench.json')['data']
        assert data['failed'] == [{'factor': 1, 'error': 'boom'}]


class TestConfigCommand:
    def test_shows_configuration(self, invoke):
        result = invoke('--threads', '2', 'config')
        assert result.exit_code == 0, result.output
        assert 'Current Configuration:' in result.output
        assert any(line.split() == ['Threads:', '2'] for line in result.output.splitlines())

    def test_rejects_bad_threads(self, invoke):
        result = invoke('--threads', '0', 'config')
        assert result.exit_code == 1
        assert 'Configuration error' in result.output

    def test_rejects_bad_threads_from_environment(self, invoke, monkeypatch):
        monkeypatch.setenv('HYPERLAP_THREADS', '0')
        result = invoke('config')
        assert result.exit_code == 1
        assert 'HYPERLAP_THREADS' in result.output


class TestEnron:
    def test_stats(self, invoke, enron_paths):
        result = invoke('--format', 'nverts', 'stats', '--input', enron_paths[0],
                        '--input', enron_paths[1])
        assert result.exit_code == 0, result.output
        data = read_report(invoke.out_dir / 'summary.json')['data']
        assert data['num_nodes'] == 143
        assert data['num_edges'] == 1459

    def test_upscale_by_five(self, invoke, enron_paths):
        result = invoke('--format', 'nverts', 'upscale', '--input', enron_paths[0],
                        '--input', enron_paths[1], '--factor', '5')
        assert result.exit_code == 0, result.output
        stats = read_report(invoke.out_dir / 'upscaled_x5.txt.report.json')['data']['stats']
        assert stats['num_edges'] == 7295
        assert len(edge_lines(invoke.out_dir / 'upscaled_x5.txt')) == 7295
