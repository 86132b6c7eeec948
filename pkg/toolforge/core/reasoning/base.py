"""
================
POLICY INTERFACE
================

`BasePolicy` is `ToolForge`'s abstract base class for step policies.

Given the instruction, the available function schemas, the interaction history so far
and (when a search expands a sibling) the previously generated candidates at this point,
a policy produces one raw action output. Every invocation costs one budget unit.
"""


from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from enum import StrEnum, auto
from typing import Any, TYPE_CHECKING

from toolforge.core.agent.action import Action, parse_action
from toolforge.core.agent.errors import MalformedAction

if TYPE_CHECKING:
    from toolforge.core.agent.episode import EpisodeState, Step
    from toolforge.core.agent.path import SolutionPath
    from .search import SearchTree


type PolicyOutput = str | Mapping[str, Any] | Action


@dataclass(frozen=True)
class PolicyRequest:
    instruction: str
    functions: list[dict[str, Any]]
    history: Sequence[Step] = ()

    # actions previously generated at this same point of the search, in creation order
    previous_candidates: Sequence[Action] = ()

    # rendered diversity prompt ('' when there is no previous candidate)
    diversity: str = ''


class BasePolicy(ABC):
    """Step policy abstract base class."""

    @abstractmethod
    def act(self, request: PolicyRequest) -> PolicyOutput:
        """Produce one raw action output."""


def ask_policy(policy: BasePolicy, state: EpisodeState, previous_candidates: Sequence[Action] = (),
               diversity: str = '') -> tuple[Action | None, PolicyOutput, MalformedAction | None]:
    """Invoke Policy once and parse its output: `(action, raw output, parse error)`."""
    raw: PolicyOutput = policy.act(PolicyRequest(instruction=state.instruction,
                                                 functions=state.functions,
                                                 history=tuple(state.history),
                                                 previous_candidates=tuple(previous_candidates),
                                                 diversity=diversity))
    try:
        return parse_action(raw), raw, None
    except MalformedAction as err:
        return None, raw, err


class Outcome(StrEnum):
    PASS_CANDIDATE: str = auto()
    GAVE_UP: str = auto()
    BUDGET_EXHAUSTED: str = auto()


@dataclass
class Episode:
    """Result of running one strategy on one instruction."""

    outcome: Outcome
    path: SolutionPath
    tree: SearchTree | None = None
    policy_calls: int = 0

    # number of independent trials run (ReACT@N)
    trials: int = 1

    @property
    def answer(self) -> str | None:
        return self.path.final.final_answer if self.outcome == Outcome.PASS_CANDIDATE else None
