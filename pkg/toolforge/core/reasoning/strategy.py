"""Strategy selection shared by the annotation pipeline and the CLI."""


from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass
from enum import StrEnum
from typing import TYPE_CHECKING

from toolforge.core.util.config import ToolForgeConfig

from .dfsdt import run_dfsdt
from .react import run_react, run_react_at_n

if TYPE_CHECKING:
    from toolforge.core.agent.episode import SchemaMap
    from toolforge.core.hub.doc import ApiDoc
    from toolforge.core.hub.executor import BaseApiExecutor
    from .base import BasePolicy, Episode


class Strategy(StrEnum):
    REACT: str = 'react'
    REACT_AT_N: str = 'react@n'
    DFSDT: str = 'dfsdt'


@dataclass(frozen=True)
class SearchConfig:
    strategy: Strategy = Strategy.DFSDT
    budget: int = ToolForgeConfig.DEFAULT_BUDGET
    max_children: int = ToolForgeConfig.DFSDT_MAX_CHILDREN
    max_depth: int = ToolForgeConfig.DFSDT_MAX_DEPTH

    # ReACT@N only: cumulative policy-call target (defaults to the budget)
    cost_target: int | None = None


def run_strategy(config: SearchConfig, instruction: str, apis: Sequence[ApiDoc],
                 policy_factory: Callable[[int], BasePolicy], executor: BaseApiExecutor,
                 schemas: SchemaMap = None) -> Episode:
    """Run the configured strategy; `policy_factory(trial)` builds the policy of each trial."""
    match config.strategy:
        case Strategy.REACT:
            return run_react(instruction, apis, policy_factory(0), executor, budget=config.budget, schemas=schemas)

        case Strategy.REACT_AT_N:
            return run_react_at_n(instruction, apis, policy_factory, executor,
                                  cost_target=config.cost_target or config.budget,
                                  trial_budget=config.budget, schemas=schemas)

        case Strategy.DFSDT:
            return run_dfsdt(instruction, apis, policy_factory(0), executor, budget=config.budget,
                             max_children=config.max_children, max_depth=config.max_depth, schemas=schemas)

        case _:
            raise ValueError(f'*** UNKNOWN STRATEGY {config.strategy!r} ***')
