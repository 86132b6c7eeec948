"""
====================
SCRIPTED TASK SUITES
====================

Randomized script generators and the trap suite.

A trap task scripts a first root branch that calls a decoy API and then gives up,
and a second root branch that calls the relevant API and answers.
A strategy that never backtracks follows the trap and fails; depth-first search recovers.
Easy tasks have only the answering branch; deep traps make the decoy branch long enough
to exhaust a small repeated-trial budget.
"""


from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum, auto
from itertools import count
import json
from pathlib import Path
import random
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.agent.action import Action
from toolforge.core.datagen.instruction import Scenario
from toolforge.core.evaluation.facts import GroundTruth, TaskMeta
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import DecodeError
from toolforge.core.util.misc import dumps_canonical

from .errors import InvalidScript
from .hub import DEFAULT_SIM_CATEGORIES, DEFAULT_SIM_COLLECTIONS, SimApiSpec, build_sim_hub, default_sim_specs
from .script import OracleResult, ScriptNode, ScriptTree, oracle_search, script_from_dict, script_to_dict

if TYPE_CHECKING:
    from toolforge.core.hub.doc import Hub
    from toolforge.core.util.misc import ApiKey
    from .hub import SimExecutor


DEFAULT_API_NAMES: tuple[str, ...] = tuple(spec.key[1] for spec in default_sim_specs())

SHALLOW_TRAP_DEPTH: int = 2
DEEP_TRAP_DEPTH: int = 9


def random_script_tree(seed: int, api_names: Sequence[str] = DEFAULT_API_NAMES, max_depth: int = 5,
                       max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN,
                       answer_prob: float = 0.2, give_up_prob: float = 0.3) -> ScriptTree:
    """Random script of depth <= `max_depth` and branching <= `max_children`; nodes at `max_depth` finish."""
    rng: random.Random = random.Random(seed)
    serial: count = count()

    def node(depth: int) -> ScriptNode:
        roll: float = rng.random()
        if depth >= max_depth or roll < answer_prob + give_up_prob:
            n: int = next(serial)
            if roll < answer_prob or (depth >= max_depth and rng.random() < answer_prob):
                return ScriptNode(Action.give_answer(final_answer=f'answer {n}', thought=f'done at {n}'))
            return ScriptNode(Action.give_up(thought=f'stuck at {n}'))

        return ScriptNode(Action.call(api_name=rng.choice(api_names), parameters={'query': f'q{next(serial)}'},
                                      thought='calling an API'),
                          children=children(depth + 1))

    def children(depth: int) -> list[ScriptNode]:
        return [node(depth) for _ in range(rng.randint(1, max_children))]

    return ScriptTree(children=children(1), max_children=max_children)


def give_up_free_chain(seed: int, api_names: Sequence[str] = DEFAULT_API_NAMES, max_length: int = 8) -> ScriptTree:
    """Linear script of API calls ending in an answer, with no give-up anywhere."""
    rng: random.Random = random.Random(seed)
    n_calls: int = rng.randint(0, max_length - 1)

    tail: ScriptNode = ScriptNode(Action.give_answer(final_answer=f'chain answer {seed}', thought='I have it.'))
    for i in reversed(range(n_calls)):
        tail = ScriptNode(Action.call(api_name=rng.choice(api_names), parameters={'step': i},
                                      thought=f'step {i}'),
                          children=[tail])
    return ScriptTree(children=[tail])


def answer_branch(api_name: str, parameters: Mapping[str, Any], final_answer: str) -> ScriptNode:
    """Call the relevant API, then answer."""
    return ScriptNode(Action.call(api_name=api_name, parameters=parameters, thought=f'{api_name} should answer this.'),
                      children=[ScriptNode(Action.give_answer(final_answer=final_answer,
                                                              thought='The result answers the question.'))])


def trap_branch(api_name: str, depth: int) -> ScriptNode:
    """`depth - 1` calls of a decoy API, then a give-up at `depth`."""
    tail: ScriptNode = ScriptNode(Action.give_up(thought=f'{api_name} keeps returning nothing useful.'))
    for page in reversed(range(1, depth)):
        tail = ScriptNode(Action.call(api_name=api_name, parameters={'page': page},
                                      thought=f'Try page {page} of {api_name}.'),
                          children=[tail])
    return tail


class TaskKind(StrEnum):
    EASY: str = auto()
    SHALLOW_TRAP: str = auto()
    DEEP_TRAP: str = auto()


@dataclass
class SimTask:
    """Scripted task with what a reference judge knows about it."""

    task_id: str
    instruction: str
    tree: ScriptTree
    scenario: Scenario
    kind: TaskKind
    relevant_apis: list[ApiKey]
    available_apis: list[ApiKey]
    solvable: bool = True
    expected_answer: str | None = None

    @property
    def meta(self) -> TaskMeta:
        return TaskMeta(solvable=self.solvable)

    @property
    def truth(self) -> GroundTruth:
        return GroundTruth(relevant_apis=frozenset(self.relevant_apis),
                           available_apis=frozenset(self.available_apis),
                           expected_answer=self.expected_answer)

    def to_dict(self) -> dict[str, Any]:
        return {'task_id': self.task_id,
                'instruction': self.instruction,
                'scenario': str(self.scenario),
                'kind': str(self.kind),
                'relevant_apis': [list(key) for key in self.relevant_apis],
                'available_apis': [list(key) for key in self.available_apis],
                'solvable': self.solvable,
                'expected_answer': self.expected_answer,
                'script': script_to_dict(self.tree)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> SimTask:
        return cls(task_id=d['task_id'],
                   instruction=d['instruction'],
                   tree=script_from_dict(d['script']),
                   scenario=Scenario(d['scenario']),
                   kind=TaskKind(d['kind']),
                   relevant_apis=[tuple(key) for key in d['relevant_apis']],
                   available_apis=[tuple(key) for key in d['available_apis']],
                   solvable=d.get('solvable', True),
                   expected_answer=d.get('expected_answer'))


@dataclass
class TaskSuite:
    """Scripted tasks over one simulated hub."""

    specs: list[SimApiSpec]
    tasks: list[SimTask]
    categories: dict[str, str] = field(default_factory=dict)
    collections: dict[str, set[str]] = field(default_factory=dict)

    def build_hub(self) -> tuple[Hub, SimExecutor]:
        return build_sim_hub(self.specs, categories=self.categories, collections=self.collections)

    def to_dict(self) -> dict[str, Any]:
        return {'specs': [spec.to_dict() for spec in self.specs],
                'categories': dict(self.categories),
                'collections': {name: sorted(members) for name, members in self.collections.items()},
                'tasks': [task.to_dict() for task in self.tasks]}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> TaskSuite:
        return cls(specs=[SimApiSpec.from_dict(spec) for spec in d['specs']],
                   tasks=[SimTask.from_dict(task) for task in d['tasks']],
                   categories=dict(d.get('categories', {})),
                   collections={name: set(members) for name, members in d.get('collections', {}).items()})


def dump_suite(suite: TaskSuite, path: Path | str):
    Path(path).write_text(dumps_canonical(suite.to_dict()) + '\n', encoding='utf-8')


def load_suite(path: Path | str) -> TaskSuite:
    try:
        return TaskSuite.from_dict(json.loads(Path(path).read_text(encoding='utf-8')))
    except json.JSONDecodeError as err:
        raise DecodeError(f'invalid suite document: {err.msg}', position=f'{path}:{err.lineno}') from err
    except (KeyError, TypeError) as err:
        raise DecodeError(f'invalid suite document: missing or bad field {err}', position=str(path)) from err


def _trap_task(i: int, kind: TaskKind, rng: random.Random, specs: Sequence[SimApiSpec],
               deep_trap_depth: int) -> SimTask:
    relevant, decoy, unused = rng.sample(list(specs), 3)
    final_answer: str = f'Task {i}: {relevant.key[1].replace("_", " ")} returned the requested details.'
    answering: ScriptNode = answer_branch(relevant.key[1], dict(relevant.parameters), final_answer)

    match kind:
        case TaskKind.EASY:
            root_children: list[ScriptNode] = [answering]
        case TaskKind.SHALLOW_TRAP:
            root_children: list[ScriptNode] = [trap_branch(decoy.key[1], SHALLOW_TRAP_DEPTH), answering]
        case _:
            root_children: list[ScriptNode] = [trap_branch(decoy.key[1], deep_trap_depth), answering]

    available: list[ApiKey] = [spec.key for spec in (relevant, decoy, unused)]
    rng.shuffle(available)

    description: str = (relevant.description or relevant.key[1]).lower()
    return SimTask(task_id=f'trap-{i:04d}',
                   instruction=f'Request {i}: I need the {description}; '
                               f'my details are {json.dumps(dict(relevant.parameters), ensure_ascii=False)}.',
                   tree=ScriptTree(children=root_children),
                   scenario=rng.choice(list(Scenario)),
                   kind=kind,
                   relevant_apis=[relevant.key],
                   available_apis=available)


def build_trap_suite(n_tasks: int = 50, seed: int = ToolForgeConfig.DEFAULT_SEED,
                     budget: int = ToolForgeConfig.DEFAULT_BUDGET,
                     max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN,
                     max_depth: int = ToolForgeConfig.DFSDT_MAX_DEPTH,
                     easy_fraction: float = 0.1, deep_fraction: float = 0.1,
                     deep_trap_depth: int = DEEP_TRAP_DEPTH) -> TaskSuite:
    """
    Randomized trap suite over the default simulated hub.

    Every task is admitted only once the oracle finds its answer within the search limits.
    """
    if n_tasks < 1:
        raise ValueError(f'*** SUITE NEEDS AT LEAST 1 TASK, GOT {n_tasks} ***')

    rng: random.Random = random.Random(seed)
    specs: list[SimApiSpec] = default_sim_specs()

    n_easy: int = max(1, round(n_tasks * easy_fraction)) if n_tasks >= 3 else 0
    n_deep: int = max(1, round(n_tasks * deep_fraction)) if n_tasks >= 3 else 0
    kinds: list[TaskKind] = ([TaskKind.EASY] * n_easy + [TaskKind.DEEP_TRAP] * n_deep
                             + [TaskKind.SHALLOW_TRAP] * (n_tasks - n_easy - n_deep))
    rng.shuffle(kinds)

    tasks: list[SimTask] = []
    for i, kind in enumerate(kinds):
        task: SimTask = _trap_task(i, kind, rng, specs, deep_trap_depth)

        verdict: OracleResult = oracle_search(task.tree, budget=budget, max_children=max_children,
                                              max_depth=max_depth)
        if not verdict.answers:
            raise InvalidScript(f'*** {task.task_id} ({kind}) HAS NO ANSWER WITHIN BUDGET {budget} ***')
        tasks.append(task)

    logger.info(f'trap suite: {n_easy} easy, {n_deep} deep, {n_tasks - n_easy - n_deep} shallow tasks')
    return TaskSuite(specs=specs, tasks=tasks, categories=dict(DEFAULT_SIM_CATEGORIES),
                     collections={name: set(members) for name, members in DEFAULT_SIM_COLLECTIONS.items()})
