import json
from pathlib import Path

import pytest

from toolforge.cli.main import EXIT_DECODE, EXIT_OK, EXIT_USAGE, main
from toolforge.core.agent.path import path_from_dict
from toolforge.core.evaluation import PassLabel
from toolforge.core.hub.store import dump_hub, load_hub
from toolforge.core.simenv.hub import HEALTHY_FIXTURE_KEYS, default_sim_hub, health_fixture_hub
from toolforge.core.util.misc import read_jsonl


@pytest.fixture
def hub_dir(tmp_path) -> Path:
    (hub_dir := tmp_path / 'hub').mkdir()
    dump_hub(default_sim_hub()[0], hub_dir)
    return hub_dir


def _pipeline(hub_dir: Path, output_dir: Path, *extra: str) -> int:
    return main(['pipeline', '--hub-dir', str(hub_dir), '--output-dir', str(output_dir), '--scenario', 'I2',
                 '--count', '4', '--quiet', *extra])


def test_pipeline_is_reproducible(hub_dir, tmp_path):
    assert _pipeline(hub_dir, tmp_path / 'first') == EXIT_OK
    assert _pipeline(hub_dir, tmp_path / 'second') == EXIT_OK

    for name in ('pairs.jsonl', 'dataset.jsonl', 'run_log.jsonl', 'health.jsonl'):
        assert (tmp_path / 'first' / name).read_bytes() == (tmp_path / 'second' / name).read_bytes()

    first = json.loads((tmp_path / 'first' / 'manifest.json').read_text(encoding='utf-8'))
    second = json.loads((tmp_path / 'second' / 'manifest.json').read_text(encoding='utf-8'))
    assert first['config_hash'] == second['config_hash']
    assert first['outputs'] == second['outputs']
    assert first['extras']['stages']['instruction pairs'] == 4

    dataset = [path_from_dict(record) for record in read_jsonl(tmp_path / 'first' / 'dataset.jsonl')]
    assert dataset
    assert all(path.pass_label == PassLabel.PASS for path in dataset)


def test_pipeline_once_per_seed(hub_dir, tmp_path, capsys):
    assert _pipeline(hub_dir, tmp_path / 'out', '--seed', '1', '--seed', '2') == EXIT_OK

    assert (tmp_path / 'out' / 'seed-1' / 'dataset.jsonl').exists()
    assert (tmp_path / 'out' / 'seed-2' / 'dataset.jsonl').exists()
    assert 'pipeline I2 (seed 2)' in capsys.readouterr().out


def test_missing_hub_is_a_usage_error(tmp_path, capsys):
    assert _pipeline(tmp_path / 'nowhere', tmp_path / 'out') == EXIT_USAGE
    err: str = capsys.readouterr().err
    assert 'hub: not found' in err
    assert 'stage load' in err


def test_hub_filter_keeps_healthy_apis(tmp_path, capsys):
    (fixture_dir := tmp_path / 'fixture').mkdir()
    dump_hub(health_fixture_hub()[0], fixture_dir)

    assert main(['hub', 'filter', '--hub-dir', str(fixture_dir), '--output-dir', str(tmp_path / 'out')]) == EXIT_OK
    assert set(load_hub(tmp_path / 'out' / 'hub').api_keys()) == HEALTHY_FIXTURE_KEYS
    assert len(read_jsonl(tmp_path / 'out' / 'health.jsonl')) == 8
    assert 'retained 3 of 8 APIs' in capsys.readouterr().out


def test_gen_run_and_retrieve(hub_dir, tmp_path):
    out: Path = tmp_path / 'out'
    assert main(['gen', '--hub-dir', str(hub_dir), '--output-dir', str(out), '--scenario', 'I3', '--count', '5',
                 '--quiet']) == EXIT_OK
    pairs_file: Path = out / 'pairs.jsonl'
    assert len(read_jsonl(pairs_file)) == 5

    assert main(['run', '--pairs', str(pairs_file), '--strategy', 'react@n', '--hub-dir', str(hub_dir),
                 '--output-dir', str(out / 'run'), '--quiet']) == EXIT_OK
    assert len(read_jsonl(out / 'run' / 'paths.jsonl')) == 5
    assert not (out / 'run' / 'trees.jsonl').exists()

    assert main(['retrieve', 'eval', '--pairs', str(pairs_file), '--hub-dir', str(hub_dir), '--negatives', '2',
                 '--output-dir', str(out / 'retrieval')]) == EXIT_OK
    scores = read_jsonl(out / 'retrieval' / 'retrieval.jsonl')
    assert {(s['scorer'], s['k']) for s in scores} == {('bm25', 1), ('bm25', 5), ('embedding', 1), ('embedding', 5)}
    assert read_jsonl(out / 'retrieval' / 'training_pairs.jsonl')


def test_eval_pass_and_win(hub_dir, tmp_path):
    assert _pipeline(hub_dir, tmp_path / 'data') == EXIT_OK
    dataset: Path = tmp_path / 'data' / 'dataset.jsonl'

    assert main(['eval', 'pass', '--paths', str(dataset), '--output-dir', str(tmp_path / 'pass')]) == EXIT_OK
    rates = {record['scenario']: record for record in read_jsonl(tmp_path / 'pass' / 'pass_rates.jsonl')}
    assert rates['all']['pass_rate']['value'] == 1.0
    assert rates['I2']['labels']['pass'] == rates['I2']['paths']

    assert main(['eval', 'win', '--a', str(dataset), '--b', str(dataset),
                 '--output-dir', str(tmp_path / 'win')]) == EXIT_OK
    overall = read_jsonl(tmp_path / 'win' / 'win_rates.jsonl')[-1]
    assert overall['scenario'] == 'all'
    assert overall['win_rate']['exact'] == '1/2'


def test_eval_win_needs_both_sides(tmp_path):
    with pytest.raises(SystemExit) as err:
        main(['eval', 'win', '--a', str(tmp_path / 'a.jsonl')])
    assert err.value.code == EXIT_USAGE


def test_decode_errors_point_at_the_line(tmp_path, capsys):
    paths_file: Path = tmp_path / 'paths.jsonl'
    paths_file.write_text('\n{oops\n', encoding='utf-8')

    assert main(['eval', 'pass', '--paths', str(paths_file), '--output-dir', str(tmp_path / 'out')]) == EXIT_DECODE
    assert f'{paths_file}:2' in capsys.readouterr().err


def test_bench(tmp_path, capsys):
    out: Path = tmp_path / 'suite'
    assert main(['simenv', 'generate', '--tasks', '6', '--output-dir', str(out)]) == EXIT_OK
    assert (out / 'hub' / 'hub.json').exists()
    assert (out / 'health_hub' / 'hub.json').exists()

    assert main(['bench', '--suite', str(out / 'suite.json'), '--strategies', 'react,dfsdt',
                 '--output-dir', str(tmp_path / 'bench'), '--quiet']) == EXIT_OK
    summary = read_jsonl(tmp_path / 'bench' / 'bench_summary.jsonl')
    assert [record['strategy'] for record in summary] == ['react', 'dfsdt']
    assert len(read_jsonl(tmp_path / 'bench' / 'bench.jsonl')) == 12
    assert 'pass rate by scenario' in capsys.readouterr().out


def test_bench_usage_errors(tmp_path, capsys):
    assert main(['bench', '--strategies', 'dfsdt', '--output-dir', str(tmp_path)]) == EXIT_USAGE
    assert 'at least 2 distinct strategies' in capsys.readouterr().err

    assert main(['bench', '--tasks', '0', '--output-dir', str(tmp_path)]) == EXIT_USAGE
    assert 'no tasks' in capsys.readouterr().err


def test_bad_config_is_a_usage_error(tmp_path, capsys):
    assert main(['bench', '--budget', '0', '--output-dir', str(tmp_path)]) == EXIT_USAGE
    assert 'budget' in capsys.readouterr().err
