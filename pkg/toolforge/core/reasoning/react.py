"""
=================
REACT AND REACT@N
=================

ReACT explores a single direction: query the policy, apply the step, until `Finish` or the budget is spent.
ReACT@N repeats independent ReACT trials, each with a fresh policy,
until a trial answers or the cumulative policy calls reach a cost target.
"""


from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import replace
from typing import TYPE_CHECKING

from loguru import logger

from toolforge.core.agent.action import Action
from toolforge.core.agent.episode import EpisodeState, EpisodeStatus, record_malformed, step
from toolforge.core.agent.path import SolutionPath
from toolforge.core.util.config import ToolForgeConfig

from .base import Episode, Outcome, ask_policy

if TYPE_CHECKING:
    from toolforge.core.agent.episode import SchemaMap
    from toolforge.core.hub.doc import ApiDoc
    from toolforge.core.hub.executor import BaseApiExecutor
    from .base import BasePolicy


BUDGET_EXHAUSTED_THOUGHT: str = 'budget exhausted'


def episode_from_state(state: EpisodeState) -> Episode:
    """Episode for a finished linear run."""
    match state.status:
        case EpisodeStatus.FINISHED_ANSWER:
            outcome: Outcome = Outcome.PASS_CANDIDATE
        case EpisodeStatus.GAVE_UP:
            outcome: Outcome = Outcome.GAVE_UP
        case _:
            outcome: Outcome = Outcome.BUDGET_EXHAUSTED

    final: Action = (state.history[-1].action if state.history and state.history[-1].action.is_finish
                     else Action.give_up(thought=BUDGET_EXHAUSTED_THOUGHT))

    return Episode(outcome=outcome,
                   path=SolutionPath(instruction=state.instruction, steps=list(state.history), final=final),
                   policy_calls=state.policy_calls)


def run_react(instruction: str, apis: Sequence[ApiDoc], policy: BasePolicy, executor: BaseApiExecutor,
              budget: int = ToolForgeConfig.DEFAULT_BUDGET, schemas: SchemaMap = None) -> Episode:
    """Run a single linear chain of steps."""
    if budget < 1:
        raise ValueError(f'*** BUDGET MUST BE AT LEAST 1, GOT {budget} ***')

    state: EpisodeState = EpisodeState.start(instruction, apis)

    while state.running:
        if state.policy_calls >= budget:
            state.exhaust()
            break

        action, raw, error = ask_policy(policy, state)
        if error is not None:
            record_malformed(state, error, raw)
        else:
            step(state, action, executor, schema=schemas)

    episode: Episode = episode_from_state(state)
    logger.debug(f'ReACT: {episode.outcome} after {episode.policy_calls} policy calls')
    return episode


def run_react_at_n(instruction: str, apis: Sequence[ApiDoc], policy_factory: Callable[[int], BasePolicy],
                   executor: BaseApiExecutor, cost_target: int,
                   trial_budget: int = ToolForgeConfig.DEFAULT_BUDGET, schemas: SchemaMap = None) -> Episode:
    """Repeat ReACT trials until one answers or cumulative policy calls reach `cost_target`.

    Returns the first answering trial, else the last trial, with the cumulative call count.
    """
    if cost_target < 1:
        raise ValueError(f'*** COST TARGET MUST BE AT LEAST 1, GOT {cost_target} ***')

    cumulative_calls: int = 0
    trial: int = 0
    while True:
        episode: Episode = run_react(instruction, apis, policy_factory(trial), executor,
                                     budget=trial_budget, schemas=schemas)
        cumulative_calls += episode.policy_calls
        trial += 1

        if episode.outcome == Outcome.PASS_CANDIDATE or cumulative_calls >= cost_target:
            break

    logger.debug(f'ReACT@N: {episode.outcome} after {trial} trials, {cumulative_calls} policy calls')
    return replace(episode, policy_calls=cumulative_calls, trials=trial)
