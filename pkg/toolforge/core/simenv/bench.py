"""
=====================
STRATEGY BENCHMARKING
=====================

Runs search strategies over a scripted task suite with equalized budgets and labels every episode
with the reference judge. ReACT@N's cumulative cost target is set to DFSDT's measured mean cost
(rounded up), so both spend comparable numbers of policy calls.
"""


from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from math import ceil
from typing import Any, TYPE_CHECKING

from loguru import logger
from tqdm import tqdm

from toolforge.core.datagen.instruction import Scenario
from toolforge.core.evaluation.judge import RuleBasedJudge, label_path
from toolforge.core.evaluation.labels import PassLabel
from toolforge.core.evaluation.rules import MIN_VOTES, pass_rate
from toolforge.core.reasoning.strategy import SearchConfig, Strategy, run_strategy

from .script import ScriptedPolicy, script_exhausted

if TYPE_CHECKING:
    from toolforge.core.evaluation.judge import BaseJudge
    from toolforge.core.hub.doc import ApiDoc, Hub
    from toolforge.core.reasoning.base import Episode
    from .hub import SimExecutor
    from .suite import SimTask, TaskSuite


@dataclass
class TaskResult:
    task_id: str
    scenario: Scenario
    strategy: Strategy
    outcome: str
    label: PassLabel
    policy_calls: int
    trials: int
    flagged: bool
    episode: Episode | None = None

    def to_dict(self) -> dict[str, Any]:
        return {'task_id': self.task_id, 'scenario': str(self.scenario), 'strategy': str(self.strategy),
                'outcome': self.outcome, 'label': str(self.label), 'policy_calls': self.policy_calls,
                'trials': self.trials, 'flagged': self.flagged}


def run_sim_task(task: SimTask, config: SearchConfig, hub: Hub, executor: SimExecutor,
                 judge: BaseJudge | None = None, n_votes: int = MIN_VOTES) -> TaskResult:
    """Run one scripted task with the configured strategy and label the outcome."""
    apis: list[ApiDoc] = [hub.api(key) for key in task.available_apis]
    episode: Episode = run_strategy(config, task.instruction, apis,
                                    lambda trial: ScriptedPolicy(task.tree, trial=trial), executor)

    label, _ = label_path(judge or RuleBasedJudge(), episode.path, task.meta, task.truth, n_votes=n_votes)
    return TaskResult(task_id=task.task_id, scenario=task.scenario, strategy=config.strategy,
                      outcome=str(episode.outcome), label=label, policy_calls=episode.policy_calls,
                      trials=episode.trials, flagged=script_exhausted(episode), episode=episode)


def evaluate_suite(suite: TaskSuite, config: SearchConfig, judge: BaseJudge | None = None,
                   n_votes: int = MIN_VOTES, jobs: int = 1, progress: bool = False) -> list[TaskResult]:
    """Results of every suite task, in task order."""
    hub, executor = suite.build_hub()

    def run(task: SimTask) -> TaskResult:
        return run_sim_task(task, config, hub, executor, judge=judge, n_votes=n_votes)

    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        return list(tqdm(pool.map(run, suite.tasks), total=len(suite.tasks),
                         desc=f'running {config.strategy}', disable=not progress))


def mean_policy_calls(results: Sequence[TaskResult]) -> Fraction:
    return Fraction(sum(r.policy_calls for r in results), len(results))


def benchmark(suite: TaskSuite, strategies: Sequence[Strategy], config: SearchConfig,
              judge: BaseJudge | None = None, n_votes: int = MIN_VOTES,
              jobs: int = 1, progress: bool = False) -> tuple[dict[Strategy, list[TaskResult]], int]:
    """
    Run every strategy on the suite with the same budget.

    Returns results per strategy and the ReACT@N cost target used
    (DFSDT's mean policy calls rounded up, or the budget when DFSDT is not run).
    """
    if len(set(strategies)) < 2:
        raise ValueError('*** BENCHMARK NEEDS AT LEAST 2 DISTINCT STRATEGIES ***')
    if not suite.tasks:
        raise ValueError('*** BENCHMARK SUITE HAS NO TASKS ***')

    # DFSDT first: its mean cost sets ReACT@N's target
    ordered: list[Strategy] = sorted(set(strategies), key=lambda s: (s != Strategy.DFSDT, list(Strategy).index(s)))

    results: dict[Strategy, list[TaskResult]] = {}
    cost_target: int = config.cost_target or config.budget
    for strategy in ordered:
        if strategy == Strategy.REACT_AT_N and Strategy.DFSDT in results and config.cost_target is None:
            cost_target = ceil(mean_policy_calls(results[Strategy.DFSDT]))

        strategy_config: SearchConfig = replace(config, strategy=strategy, cost_target=cost_target)
        results[strategy] = evaluate_suite(suite, strategy_config, judge=judge, n_votes=n_votes,
                                           jobs=jobs, progress=progress)

        logger.info(f'{strategy}: pass rate {float(pass_rate([r.label for r in results[strategy]])):.3f}, '
                    f'mean policy calls {float(mean_policy_calls(results[strategy])):.2f}')

    return {strategy: results[strategy] for strategy in strategies if strategy in results}, cost_target


def pass_rates_by_scenario(results: Sequence[TaskResult]) -> dict[str, Fraction]:
    """Pass rate per scenario present in results, plus the overall rate under `all`."""
    rates: dict[str, Fraction] = {}
    for scenario in Scenario:
        if labels := [r.label for r in results if r.scenario == scenario]:
            rates[str(scenario)] = pass_rate(labels)
    rates['all'] = pass_rate([r.label for r in results])
    return rates
