"""
==========================
PASS-GATED PATH ANNOTATION
==========================

Each instruction pair runs one search episode over its sampled APIs; the judge labels the resulting
solution path and only Pass-labeled paths enter the dataset. Everything else is kept in the run log.

Pairs are independent: with `jobs > 1` episodes run on a thread pool, and results are collected
in input order, so the dataset does not depend on the number of jobs.
"""


from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Any, TYPE_CHECKING

from loguru import logger
from tqdm import tqdm

from toolforge.core.evaluation.facts import GroundTruth, TaskMeta
from toolforge.core.evaluation.judge import label_path
from toolforge.core.evaluation.labels import PassLabel
from toolforge.core.evaluation.rules import MIN_VOTES
from toolforge.core.reasoning.strategy import SearchConfig, Strategy, run_strategy
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import ConfigError
from toolforge.core.util.misc import derive_seed

if TYPE_CHECKING:
    from toolforge.core.agent.episode import SchemaMap
    from toolforge.core.agent.path import SolutionPath
    from toolforge.core.evaluation.judge import BaseJudge
    from toolforge.core.hub.doc import ApiDoc, Hub
    from toolforge.core.hub.executor import BaseApiExecutor
    from toolforge.core.reasoning.base import BasePolicy, Episode
    from .instruction import InstructionPair


# (pair, pair seed, trial index) -> policy
type PolicyFactory = Callable[[InstructionPair, int, int], BasePolicy]

# pair -> (task metadata, judge ground truth)
type TaskResolver = Callable[[InstructionPair], tuple[TaskMeta, GroundTruth]]


def default_task(pair: InstructionPair) -> tuple[TaskMeta, GroundTruth]:
    """Solvable task whose relevant APIs are the pair's and whose available APIs are its subset."""
    return TaskMeta(solvable=True), GroundTruth(relevant_apis=frozenset(pair.related_apis),
                                                available_apis=frozenset(pair.subset))


@dataclass
class AnnotationRecord:
    """Run-log entry of one annotated pair."""

    query: str
    scenario: str
    seed: int
    outcome: str
    pass_label: PassLabel
    votes: list[PassLabel]
    policy_calls: int
    retained: bool

    def to_dict(self) -> dict[str, Any]:
        return {'query': self.query,
                'scenario': self.scenario,
                'seed': self.seed,
                'outcome': self.outcome,
                'pass_label': str(self.pass_label),
                'votes': [str(vote) for vote in self.votes],
                'policy_calls': self.policy_calls,
                'retained': self.retained}


@dataclass
class AnnotationResult:
    dataset: list[SolutionPath] = field(default_factory=list)
    run_log: list[AnnotationRecord] = field(default_factory=list)


def annotate_pair(pair: InstructionPair, pair_seed: int, config: SearchConfig, policy_factory: PolicyFactory,
                  executor: BaseApiExecutor, judge: BaseJudge, hub: Hub,
                  n_votes: int = MIN_VOTES, schemas: SchemaMap = None,
                  task_for: TaskResolver = default_task) -> tuple[SolutionPath, AnnotationRecord]:
    """Run and label one pair; the returned path carries its label and replay metadata."""
    apis: list[ApiDoc] = [hub.api(key) for key in pair.subset if key in hub]

    episode: Episode = run_strategy(config, pair.query, apis,
                                    lambda trial: policy_factory(pair, pair_seed, trial),
                                    executor, schemas=schemas)

    meta, truth = task_for(pair)
    label, votes = label_path(judge, episode.path, meta, truth, n_votes=n_votes)

    path: SolutionPath = replace(episode.path,
                                 pass_label=label,
                                 extras={'scenario': str(pair.scenario),
                                         'related_apis': [list(key) for key in pair.related_apis],
                                         'available_apis': [list(key) for key in pair.subset],
                                         'seed': pair_seed})

    return path, AnnotationRecord(query=pair.query, scenario=str(pair.scenario), seed=pair_seed,
                                  outcome=str(episode.outcome), pass_label=label, votes=votes,
                                  policy_calls=episode.policy_calls, retained=label == PassLabel.PASS)


def annotate_dataset(pairs: Sequence[InstructionPair], config: SearchConfig, policy_factory: PolicyFactory,
                     executor: BaseApiExecutor, judge: BaseJudge, hub: Hub,
                     seed: int = ToolForgeConfig.DEFAULT_SEED, jobs: int = 1, n_votes: int = MIN_VOTES,
                     schemas: SchemaMap = None, task_for: TaskResolver = default_task,
                     seeds: Mapping[int, int] | None = None, progress: bool = False) -> AnnotationResult:
    """
    Annotate pairs and keep exactly the Pass-labeled solution paths.

    Pair `i` runs with seed `derive_seed(seed, 'annotate', i)` unless `seeds` (recorded from a previous run)
    gives it one.
    """
    if config.strategy not in (Strategy.REACT, Strategy.DFSDT):
        raise ConfigError(f'annotation runs "{Strategy.REACT}" or "{Strategy.DFSDT}", not "{config.strategy}"')

    pair_seeds: list[int] = [(seeds or {}).get(i, derive_seed(seed, 'annotate', i)) for i in range(len(pairs))]

    def annotate(i: int) -> tuple[SolutionPath, AnnotationRecord]:
        return annotate_pair(pairs[i], pair_seeds[i], config, policy_factory, executor, judge, hub,
                             n_votes=n_votes, schemas=schemas, task_for=task_for)

    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        results: list[tuple[SolutionPath, AnnotationRecord]] = list(
            tqdm(pool.map(annotate, range(len(pairs))), total=len(pairs),
                 desc=f'annotating with {config.strategy}', disable=not progress))

    result: AnnotationResult = AnnotationResult(dataset=[path for path, record in results if record.retained],
                                                run_log=[record for _, record in results])

    logger.info(f'annotated {len(pairs)} pairs: {len(result.dataset)} Pass-labeled paths retained')
    return result
