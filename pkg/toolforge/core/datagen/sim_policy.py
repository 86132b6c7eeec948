"""Deterministic offline policy that works any generated instruction through its available functions."""


from __future__ import annotations

from dataclasses import dataclass
from typing import Any, TYPE_CHECKING

from toolforge.core.agent.action import FINISH_FUNCTION_NAME, Action
from toolforge.core.reasoning.base import BasePolicy

if TYPE_CHECKING:
    from toolforge.core.reasoning.base import PolicyRequest


_PLACEHOLDERS: dict[str, Any] = {'string': 'example', 'number': 1, 'boolean': True, 'array': [], 'object': {}}


def placeholder_arguments(function: dict[str, Any]) -> dict[str, Any]:
    """Arguments for a function schema's required parameters: example values where documented, else placeholders."""
    parameters: dict[str, Any] = function.get('parameters', {})
    properties: dict[str, Any] = parameters.get('properties', {})
    return {name: properties.get(name, {}).get('example_value',
                                               _PLACEHOLDERS.get(properties.get(name, {}).get('type'), 'example'))
            for name in parameters.get('required', [])}


@dataclass(frozen=True)
class SimInstructionPolicy(BasePolicy):
    """
    Call each available function once, in catalog order; give up right after an error observation,
    answer once every function has answered successfully.

    When a search asks for a sibling with `k` previous candidates, the untried functions are rotated by `k`,
    so sibling branches start from different functions.
    """

    answer_chars: int = 120

    def act(self, request: PolicyRequest) -> Action:
        if any(s.error for s in request.history):
            return Action.give_up(thought='The last API call failed, so I restart from another function.')

        tried: set[str] = {s.action.function_name for s in request.history}
        untried: list[dict[str, Any]] = [f for f in request.functions
                                         if f['name'] != FINISH_FUNCTION_NAME and f['name'] not in tried]

        if not untried:
            findings: str = '; '.join(f'{s.action.function_name}: {s.observation[:self.answer_chars]}'
                                      for s in request.history if not s.action.is_finish)
            return Action.give_answer(final_answer=f'Here is what I found. {findings}'.strip(),
                                      thought='Every function has answered, so I can give the final answer.')

        k: int = len(request.previous_candidates) % len(untried)
        function: dict[str, Any] = (untried[k:] + untried[:k])[0]
        return Action.call(api_name=function['name'], parameters=placeholder_arguments(function),
                           thought=f'I should call {function["name"]} next.')
