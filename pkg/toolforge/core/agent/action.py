"""
============
AGENT ACTION
============

One decision of the agent: a call of an API, or a call of the special `Finish` function
(with a final answer, or giving up).

Policy output comes in two forms, both accepted by `parse_action`:

- textual:

    Thought: <free text>
    API Name: <function name>
    Parameters: <JSON object>

- structured function call: `{"thought": ..., "function_call": {"name": ..., "arguments": ...}}`
  (also `{"content": ...}` for the thought, or a bare `{"name": ..., "arguments": ...}`),
  with `arguments` a JSON object or its text
"""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum, auto
import json
import re
from typing import Any

from .errors import MalformedAction


FINISH_FUNCTION_NAME: str = 'Finish'


class ActionKind(StrEnum):
    API_CALL: str = auto()
    FINISH: str = auto()


class ReturnType(StrEnum):
    GIVE_ANSWER: str = 'give_answer'
    GIVE_UP_AND_RESTART: str = 'give_up_and_restart'


@dataclass(frozen=True, eq=True)
class Action:
    """Agent action."""

    thought: str
    kind: ActionKind
    api_name: str = ''
    parameters: dict[str, Any] = field(default_factory=dict, hash=False)
    return_type: ReturnType | None = None
    final_answer: str | None = None

    def __post_init__(self):
        match self.kind:
            case ActionKind.API_CALL:
                if not self.api_name:
                    raise MalformedAction('API call without API name')
            case ActionKind.FINISH:
                if self.return_type is None:
                    raise MalformedAction('Finish without return_type')
                if self.return_type == ReturnType.GIVE_ANSWER and self.final_answer is None:
                    raise MalformedAction('Finish/give_answer without final_answer')

    @classmethod
    def call(cls, api_name: str, parameters: Mapping[str, Any] | None = None, thought: str = '') -> Action:
        return cls(thought=thought, kind=ActionKind.API_CALL, api_name=api_name, parameters=dict(parameters or {}))

    @classmethod
    def give_answer(cls, final_answer: str, thought: str = '') -> Action:
        return cls(thought=thought, kind=ActionKind.FINISH,
                   return_type=ReturnType.GIVE_ANSWER, final_answer=final_answer)

    @classmethod
    def give_up(cls, thought: str = '') -> Action:
        return cls(thought=thought, kind=ActionKind.FINISH, return_type=ReturnType.GIVE_UP_AND_RESTART)

    @property
    def is_finish(self) -> bool:
        return self.kind == ActionKind.FINISH

    @property
    def is_answer(self) -> bool:
        return self.return_type == ReturnType.GIVE_ANSWER

    @property
    def is_give_up(self) -> bool:
        return self.return_type == ReturnType.GIVE_UP_AND_RESTART

    @property
    def function_name(self) -> str:
        return FINISH_FUNCTION_NAME if self.is_finish else self.api_name

    @property
    def arguments(self) -> dict[str, Any]:
        """Arguments of the function call this action makes."""
        if not self.is_finish:
            return self.parameters
        if self.final_answer is None:
            return {'return_type': str(self.return_type)}
        return {'return_type': str(self.return_type), 'final_answer': self.final_answer}


def render_action(action: Action) -> str:
    """Render Action in the textual three-field format."""
    return (f'Thought: {action.thought}\n'
            f'API Name: {action.function_name}\n'
            f'Parameters: {json.dumps(action.arguments, ensure_ascii=False)}')


# the thought may span lines and mention either field: the last "API Name" line before "Parameters" wins
_TEXTUAL_ACTION_PATTERN: re.Pattern = re.compile(
    r'\A\s*(?:Thought:[ \t]?(?P<thought>.*)\n)?'
    r'API Name:[ \t]*(?P<api_name>[^\n]*?)[ \t]*\n'
    r'Parameters:[ \t]*(?P<parameters>.*?)\s*\Z',
    flags=re.DOTALL)


def _parse_arguments(arguments: str | Mapping[str, Any] | None) -> dict[str, Any]:
    if arguments is None or (isinstance(arguments, str) and not arguments.strip()):
        return {}

    if isinstance(arguments, str):
        try:
            arguments: Any = json.loads(arguments)
        except json.JSONDecodeError as err:
            raise MalformedAction(f'unparseable parameters: {err.msg}') from err

    if not isinstance(arguments, Mapping):
        raise MalformedAction(f'parameters must be a key-value object, got {type(arguments).__name__}')

    return dict(arguments)


def _build_action(thought: str, function_name: str, arguments: dict[str, Any]) -> Action:
    if not function_name:
        raise MalformedAction('missing field "API Name"')

    if function_name != FINISH_FUNCTION_NAME:
        return Action.call(api_name=function_name, parameters=arguments, thought=thought)

    try:
        return_type: ReturnType = ReturnType(arguments.get('return_type'))
    except ValueError as err:
        raise MalformedAction(f'bad Finish return_type {arguments.get("return_type")!r}') from err

    final_answer: Any = arguments.get('final_answer')
    return Action(thought=thought, kind=ActionKind.FINISH, return_type=return_type,
                  final_answer=None if final_answer is None else str(final_answer))


def parse_action(raw: str | Mapping[str, Any] | Action) -> Action:
    """Parse policy output into an Action, raising `MalformedAction` on bad output."""
    if isinstance(raw, Action):
        return raw

    if isinstance(raw, str):
        if (match := _TEXTUAL_ACTION_PATTERN.match(raw)) is None:
            raise MalformedAction('missing field "API Name" or "Parameters"')
        return _build_action(thought=match['thought'] or '',
                             function_name=match['api_name'].strip(),
                             arguments=_parse_arguments(match['parameters']))

    if isinstance(raw, Mapping):
        thought: str = raw.get('thought') or raw.get('content') or ''
        call: Any = raw.get('function_call', raw)
        if not isinstance(call, Mapping) or 'name' not in call:
            raise MalformedAction('no function call in structured output')
        return _build_action(thought=thought, function_name=str(call['name']),
                             arguments=_parse_arguments(call.get('arguments')))

    raise MalformedAction(f'unsupported policy output type {type(raw).__name__}')
