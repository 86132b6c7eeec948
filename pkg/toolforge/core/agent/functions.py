"""
========================
FUNCTION-CALLING CATALOG
========================

Each API is presented to the policy as a function.
Function names are the sanitized API names, qualified as `<api>_for_<tool>` only for APIs whose
sanitized names clash across tools. The `Finish` function is always appended last.
"""


from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
import re
from typing import Any, TYPE_CHECKING

from toolforge.core.hub.doc import ParamType

from .action import FINISH_FUNCTION_NAME
from .errors import DuplicateFunctionName

if TYPE_CHECKING:
    from toolforge.core.hub.doc import ApiDoc, ParamSpec
    from toolforge.core.util.misc import ApiKey


FINISH_FUNCTION: dict[str, Any] = {
    'name': 'Finish',
    'description': 'If you believe that you have obtained a result that can answer the task, '
                   'please call this function to provide the final answer. '
                   'Alternatively, if you recognize that you are unable to proceed with the task in the current state, '
                   'call this function to restart. '
                   'Remember: you must ALWAYS call this function at the end of your attempt, '
                   'and the only part that will be shown to the user is the final answer, '
                   'so it should contain sufficient information.',
    'parameters': {
        'type': 'object',
        'properties': {
            'return_type': {
                'type': 'string',
                'enum': ['give_answer', 'give_up_and_restart'],
            },
            'final_answer': {
                'type': 'string',
                'description': 'The final answer you want to give the user. '
                               'You should have this field if "return_type"=="give_answer"',
            },
        },
        'required': ['return_type'],
    },
}


_JSON_TYPES: dict[ParamType, str] = {ParamType.STRING: 'string',
                                     ParamType.NUMBER: 'number',
                                     ParamType.BOOLEAN: 'boolean',
                                     ParamType.ARRAY: 'array',
                                     ParamType.OBJECT: 'object',
                                     ParamType.ENUM: 'string'}


def sanitize_function_name(name: str) -> str:
    return re.sub(r'[^a-z0-9_]+', '_', name.lower()).strip('_')[:64] or 'api'


def _param_schema(param: ParamSpec) -> dict[str, Any]:
    schema: dict[str, Any] = {'type': _JSON_TYPES[param.type], 'description': param.description}
    if param.default not in ('', None):
        schema['example_value'] = param.default
    return schema


def function_schema(api: ApiDoc, function_name: str) -> dict[str, Any]:
    """Function schema of one API."""
    return {'name': function_name,
            'description': f'This is the subfunction for tool "{api.tool_name}", you can use this tool. '
                           f'The description of this function is: "{api.description}"',
            'parameters': {'type': 'object',
                           'properties': {p.name: _param_schema(p) for p in api.parameters},
                           'required': [p.name for p in api.required_parameters],
                           'optional': [p.name for p in api.optional_parameters]}}


@dataclass
class FunctionCatalog:
    """Function names and schemas of the APIs available to an episode."""

    apis: list[ApiDoc]
    names: dict[ApiKey, str] = field(init=False)

    def __post_init__(self):
        base_names: dict[ApiKey, str] = {api.key: sanitize_function_name(api.name) for api in self.apis}
        clashes: Counter[str] = Counter(base_names.values())

        self.names: dict[ApiKey, str] = {
            api.key: (base_names[api.key] if clashes[base_names[api.key]] == 1
                      else f'{base_names[api.key]}_for_{sanitize_function_name(api.tool_name)}')
            for api in self.apis}

        taken: Counter[str] = Counter(self.names.values())
        if duplicates := sorted(name for name, n in taken.items() if n > 1 or name == FINISH_FUNCTION_NAME.lower()):
            raise DuplicateFunctionName(f'*** FUNCTION NAMES COLLIDE AFTER SANITIZATION: {duplicates} ***')

        self._by_name: dict[str, ApiDoc] = {self.names[api.key]: api for api in self.apis}

    @property
    def schemas(self) -> list[dict[str, Any]]:
        return [function_schema(api, self.names[api.key]) for api in self.apis] + [FINISH_FUNCTION]

    def resolve(self, name: str) -> ApiDoc | None:
        """Return the API a function name refers to, accepting the raw API name when unambiguous."""
        if (api := self._by_name.get(name)) is not None:
            return api

        matches: list[ApiDoc] = [api for api in self.apis if api.name == name]
        return matches[0] if len(matches) == 1 else None


def render_function_schemas(apis: Sequence[ApiDoc]) -> list[dict[str, Any]]:
    """Function schemas for APIs, followed by the `Finish` schema."""
    if not apis:
        raise ValueError('*** NO API TO RENDER ***')
    return FunctionCatalog(apis=list(apis)).schemas
