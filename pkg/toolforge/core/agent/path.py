"""
=============
SOLUTION PATH
=============

The dataset record: an instruction, its steps (ending with the `Finish` step when the policy emitted one)
and the final `Finish` action. Documents keep a fixed field order so dataset files diff cleanly:

    {"instruction": ...,
     "steps": [{"thought": ..., "api_name": ..., "parameters": {...}, "observation": ..., "cost": 1}, ...],
     "final": {"thought": ..., "return_type": ..., "final_answer": ...},
     "pass_label": ...,
     "extras": {...}}

`tool_name`/`error` step fields, `pass_label` and `extras` are written only when set.
"""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
import json
from typing import Any, TYPE_CHECKING

from toolforge.core.util.errors import DecodeError
from toolforge.core.util.misc import dumps_canonical

from .action import FINISH_FUNCTION_NAME, Action, ActionKind, ReturnType
from .episode import Step
from .errors import MalformedAction

if TYPE_CHECKING:
    from toolforge.core.evaluation.labels import PassLabel


@dataclass
class SolutionPath:
    instruction: str
    steps: list[Step]
    final: Action
    pass_label: PassLabel | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.final.kind != ActionKind.FINISH:
            raise ValueError('*** FINAL ACTION OF A SOLUTION PATH MUST BE A FINISH ***')

    @property
    def answered(self) -> bool:
        return self.final.is_answer

    @property
    def cost(self) -> int:
        return sum(s.cost for s in self.steps)

    @property
    def api_steps(self) -> list[Step]:
        return [s for s in self.steps if not s.action.is_finish]


def _step_to_dict(s: Step) -> dict[str, Any]:
    d: dict[str, Any] = {'thought': s.action.thought}
    d['api_name'] = s.action.function_name
    d['parameters'] = s.action.arguments
    d['observation'] = s.observation
    d['cost'] = s.cost
    if s.tool_name:
        d['tool_name'] = s.tool_name
    if s.error:
        d['error'] = True
    return d


def _final_to_dict(final: Action) -> dict[str, Any]:
    d: dict[str, Any] = {'thought': final.thought, 'return_type': str(final.return_type)}
    if final.final_answer is not None:
        d['final_answer'] = final.final_answer
    return d


def path_to_dict(path: SolutionPath) -> dict[str, Any]:
    d: dict[str, Any] = {'instruction': path.instruction,
                         'steps': [_step_to_dict(s) for s in path.steps],
                         'final': _final_to_dict(path.final)}
    if path.pass_label is not None:
        d['pass_label'] = str(path.pass_label)
    if path.extras:
        d['extras'] = path.extras
    return d


def _require(d: Any, key: str, position: str, kind: type | tuple[type, ...]) -> Any:
    if not isinstance(d, Mapping) or key not in d:
        raise DecodeError(f'missing field "{key}"', position=position)
    if not isinstance(d[key], kind):
        raise DecodeError(f'field "{key}" has wrong type {type(d[key]).__name__}', position=position)
    return d[key]


def _step_from_dict(d: Any, position: str) -> Step:
    thought: str = _require(d, 'thought', f'{position}.thought', str)
    api_name: str = _require(d, 'api_name', f'{position}.api_name', str)
    parameters: dict = d.get('parameters', {}) if isinstance(d, Mapping) else {}
    if not isinstance(parameters, Mapping):
        raise DecodeError('parameters must be an object', position=f'{position}.parameters')

    try:
        if api_name == FINISH_FUNCTION_NAME:
            action: Action = Action(thought=thought, kind=ActionKind.FINISH,
                                    return_type=ReturnType(parameters.get('return_type')),
                                    final_answer=parameters.get('final_answer'))
        else:
            action: Action = Action.call(api_name=api_name, parameters=parameters, thought=thought)

        return Step(action=action,
                    observation=_require(d, 'observation', f'{position}.observation', str),
                    cost=_require(d, 'cost', f'{position}.cost', int),
                    tool_name=d.get('tool_name', ''),
                    error=bool(d.get('error', False)))
    except DecodeError:
        raise
    except ValueError as err:
        raise DecodeError(str(err), position=position) from err


def _final_from_dict(d: Any) -> Action:
    try:
        return Action(thought=d.get('thought', '') if isinstance(d, Mapping) else '',
                      kind=ActionKind.FINISH,
                      return_type=ReturnType(_require(d, 'return_type', 'final.return_type', str)),
                      final_answer=d.get('final_answer'))
    except DecodeError:
        raise
    except MalformedAction as err:
        raise DecodeError(str(err), position='final') from err
    except ValueError as err:
        raise DecodeError(str(err), position='final.return_type') from err


def path_from_dict(d: Any) -> SolutionPath:
    """Decode a SolutionPath document (already parsed), raising `DecodeError` located by field path."""
    from toolforge.core.evaluation.labels import PassLabel  # pylint: disable=import-outside-toplevel

    instruction: str = _require(d, 'instruction', 'instruction', str)
    steps: list = _require(d, 'steps', 'steps', list)
    final: Action = _final_from_dict(_require(d, 'final', 'final', Mapping))

    try:
        pass_label: PassLabel | None = PassLabel(d['pass_label']) if d.get('pass_label') is not None else None
    except ValueError as err:
        raise DecodeError(str(err), position='pass_label') from err

    return SolutionPath(instruction=instruction,
                        steps=[_step_from_dict(s, f'steps[{i}]') for i, s in enumerate(steps)],
                        final=final, pass_label=pass_label,
                        extras=dict(d.get('extras', {})))


def encode_path(path: SolutionPath) -> str:
    """Encode SolutionPath as a one-line JSON document."""
    return dumps_canonical(path_to_dict(path))


def decode_path(text: str) -> SolutionPath:
    """Decode a one-line JSON SolutionPath document."""
    try:
        d: Any = json.loads(text)
    except json.JSONDecodeError as err:
        raise DecodeError(f'invalid JSON: {err.msg}', position=err.pos) from err
    return path_from_dict(d)
