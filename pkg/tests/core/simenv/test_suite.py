from fractions import Fraction

import pytest

from toolforge.core.evaluation import PassLabel, pass_rate
from toolforge.core.reasoning import SearchConfig, Strategy
from toolforge.core.simenv import (TaskKind, TaskSuite, benchmark, build_trap_suite, dump_suite, evaluate_suite,
                                   load_suite, mean_policy_calls, oracle_search, pass_rates_by_scenario)
from toolforge.core.util.errors import DecodeError


SUITE: TaskSuite = build_trap_suite(n_tasks=50, seed=0)


def test_trap_suite_composition():
    kinds: list[TaskKind] = [task.kind for task in SUITE.tasks]
    assert len(kinds) == 50
    assert kinds.count(TaskKind.EASY) == 5
    assert kinds.count(TaskKind.DEEP_TRAP) == 5
    assert kinds.count(TaskKind.SHALLOW_TRAP) == 40

    assert all(oracle_search(task.tree).answers for task in SUITE.tasks)
    assert all(set(task.relevant_apis) <= set(task.available_apis) for task in SUITE.tasks)
    assert len({task.task_id for task in SUITE.tasks}) == 50


def test_trap_suite_is_seeded():
    assert build_trap_suite(n_tasks=10, seed=3).to_dict() == build_trap_suite(n_tasks=10, seed=3).to_dict()
    assert build_trap_suite(n_tasks=10, seed=3).to_dict() != build_trap_suite(n_tasks=10, seed=4).to_dict()

    with pytest.raises(ValueError):
        build_trap_suite(n_tasks=0)


def test_search_strategies_on_trap_suite():
    results, cost_target = benchmark(SUITE, [Strategy.REACT, Strategy.REACT_AT_N, Strategy.DFSDT], SearchConfig())
    rates: dict[Strategy, Fraction] = {strategy: pass_rate([r.label for r in strategy_results])
                                       for strategy, strategy_results in results.items()}

    assert list(results) == [Strategy.REACT, Strategy.REACT_AT_N, Strategy.DFSDT]
    assert rates[Strategy.DFSDT] >= Fraction(9, 10)
    assert rates[Strategy.REACT] <= Fraction(1, 5)
    assert rates[Strategy.REACT] < rates[Strategy.REACT_AT_N] < rates[Strategy.DFSDT]

    # 40 shallow traps cost 6, 5 easy tasks cost 2, 5 deep traps cost 27
    assert mean_policy_calls(results[Strategy.DFSDT]) == Fraction(385, 50)
    assert cost_target == 8

    kinds: dict[str, TaskKind] = {task.task_id: task.kind for task in SUITE.tasks}
    for r in results[Strategy.REACT_AT_N]:
        assert (r.label == PassLabel.PASS) == (kinds[r.task_id] != TaskKind.DEEP_TRAP)
        assert r.trials == (2 if kinds[r.task_id] == TaskKind.SHALLOW_TRAP else 1)


def test_dfsdt_flags_script_exhaustion_on_traps():
    results = evaluate_suite(SUITE, SearchConfig(strategy=Strategy.DFSDT))
    easy: set[str] = {task.task_id for task in SUITE.tasks if task.kind == TaskKind.EASY}
    assert all(r.flagged == (r.task_id not in easy) for r in results)
    assert [r.task_id for r in results] == [task.task_id for task in SUITE.tasks]


def test_benchmark_arguments():
    with pytest.raises(ValueError):
        benchmark(SUITE, [Strategy.DFSDT], SearchConfig())
    with pytest.raises(ValueError):
        benchmark(TaskSuite(specs=SUITE.specs, tasks=[]), [Strategy.REACT, Strategy.DFSDT], SearchConfig())


def test_pass_rates_by_scenario():
    results = evaluate_suite(SUITE, SearchConfig(strategy=Strategy.DFSDT))
    rates: dict[str, Fraction] = pass_rates_by_scenario(results)

    assert rates['all'] == 1
    assert set(rates) == {str(task.scenario) for task in SUITE.tasks} | {'all'}
    assert results[0].to_dict()['strategy'] == 'dfsdt'


def test_suite_documents(tmp_path):
    path = tmp_path / 'suite.json'
    dump_suite(SUITE, path)
    assert load_suite(path).to_dict() == SUITE.to_dict()

    broken = tmp_path / 'broken.json'
    broken.write_text('{"specs": [],\n"tasks": [}\n', encoding='utf-8')
    with pytest.raises(DecodeError) as err:
        load_suite(broken)
    assert err.value.position.endswith('broken.json:2')

    missing = tmp_path / 'missing.json'
    missing.write_text('{"specs": []}', encoding='utf-8')
    with pytest.raises(DecodeError):
        load_suite(missing)
