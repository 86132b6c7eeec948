"""
================================
TOOL & API DOCUMENTATION RECORDS
================================

The hub is a three-level hierarchy: categories group tools, tools group APIs.
Collections are finer-grained tool-level tags; a tool may belong to none or to several.

Tool documents use the marketplace's JSON key names:
`name`, `tool_description`, `api_list`, and per API `name`, `url`, `description`, `method`,
`required_parameters`, `optional_parameters`, `tool_name`, `category_name`.
Keys this module does not model are preserved in `extras` and written back on serialization.
"""


from __future__ import annotations

from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field
from enum import StrEnum
import json
from typing import Any

from toolforge.core.util.misc import ApiKey

from .errors import BadEnum, HubInvariantError, MissingField


class HttpMethod(StrEnum):
    GET = 'GET'
    POST = 'POST'
    PUT = 'PUT'
    DELETE = 'DELETE'
    PATCH = 'PATCH'


class ParamType(StrEnum):
    STRING = 'STRING'
    NUMBER = 'NUMBER'
    BOOLEAN = 'BOOLEAN'
    ARRAY = 'ARRAY'
    OBJECT = 'OBJECT'
    ENUM = 'ENUM'


@dataclass
class ParamSpec:
    """API parameter specification."""

    name: str
    type: ParamType
    description: str = ''
    default: Any = ''
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise HubInvariantError('*** PARAMETER NAME MUST BE NON-EMPTY ***')


@dataclass
class ApiDoc:
    """Documentation of one API (REST endpoint) of a tool."""

    name: str
    description: str
    url: str
    http_method: HttpMethod
    required_parameters: list[ParamSpec] = field(default_factory=list)
    optional_parameters: list[ParamSpec] = field(default_factory=list)
    example_response: str = ''
    tool_name: str = ''
    category_name: str = ''
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.name:
            raise HubInvariantError('*** API NAME MUST BE NON-EMPTY ***')

    @property
    def key(self) -> ApiKey:
        return (self.tool_name, self.name)

    @property
    def parameters(self) -> list[ParamSpec]:
        return self.required_parameters + self.optional_parameters


@dataclass
class ToolDoc:
    """Documentation of one tool and its APIs."""

    tool_name: str
    tool_description: str
    category: str
    api_list: list[ApiDoc]
    host_url: str = ''
    collections: set[str] = field(default_factory=set)
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.api_list:
            raise MissingField('api_list', 'a tool must document at least one API')

        names: list[str] = [api.name for api in self.api_list]
        if len(set(names)) != len(names):
            raise HubInvariantError(f'*** DUPLICATE API NAMES IN TOOL "{self.tool_name}" ***')

        for api in self.api_list:
            if not api.tool_name:
                api.tool_name = self.tool_name
            if not api.category_name:
                api.category_name = self.category

    def api(self, api_name: str) -> ApiDoc:
        for api in self.api_list:
            if api.name == api_name:
                return api
        raise KeyError(f'{self.tool_name}/{api_name}')


@dataclass
class Hub:
    """The API hub: tools organized by category and collection."""

    tools: list[ToolDoc]
    categories: set[str] = field(default_factory=set)

    # collection name -> names of member tools
    collections: dict[str, set[str]] = field(default_factory=dict)

    def __post_init__(self):
        tool_names: list[str] = [tool.tool_name for tool in self.tools]
        if len(set(tool_names)) != len(tool_names):
            raise HubInvariantError('*** TOOL NAMES MUST BE UNIQUE HUB-WIDE ***')

        for tool in self.tools:
            if tool.category not in self.categories:
                raise HubInvariantError(f'*** TOOL "{tool.tool_name}" HAS UNKNOWN CATEGORY "{tool.category}" ***')

        for collection, members in self.collections.items():
            if unknown := members - set(tool_names):
                raise HubInvariantError(f'*** COLLECTION "{collection}" LISTS UNKNOWN TOOLS {sorted(unknown)} ***')

        self._apis: dict[ApiKey, ApiDoc] = {api.key: api for tool in self.tools for api in tool.api_list}

    @classmethod
    def from_tools(cls, tools: list[ToolDoc], categories: set[str] | None = None) -> Hub:
        """Create Hub whose categories and collections are derived from its tools' tags."""
        collections: dict[str, set[str]] = {}
        for tool in tools:
            for collection in tool.collections:
                collections.setdefault(collection, set()).add(tool.tool_name)

        return cls(tools=list(tools),
                   categories=set(categories) if categories is not None else {tool.category for tool in tools},
                   collections=collections)

    def __iter__(self) -> Iterator[ApiDoc]:
        for tool in self.tools:
            yield from tool.api_list

    def __contains__(self, key: object) -> bool:
        return key in self._apis

    @property
    def n_apis(self) -> int:
        return len(self._apis)

    def api_keys(self) -> list[ApiKey]:
        return list(self._apis)

    def api(self, key: ApiKey) -> ApiDoc:
        return self._apis[key]

    def tool(self, tool_name: str) -> ToolDoc:
        for tool in self.tools:
            if tool.tool_name == tool_name:
                return tool
        raise KeyError(tool_name)

    def tools_in_category(self, category: str) -> list[ToolDoc]:
        return [tool for tool in self.tools if tool.category == category]

    def tools_in_collection(self, collection: str) -> list[ToolDoc]:
        members: set[str] = self.collections.get(collection, set())
        return [tool for tool in self.tools if tool.tool_name in members]


_TOOL_KEYS: frozenset[str] = frozenset({'name', 'tool_name', 'tool_description', 'host_url', 'category_name',
                                        'collections', 'api_list'})
_API_KEYS: frozenset[str] = frozenset({'name', 'url', 'description', 'method', 'required_parameters',
                                       'optional_parameters', 'tool_name', 'category_name', 'example_response'})
_PARAM_KEYS: frozenset[str] = frozenset({'name', 'type', 'description', 'default'})


def _require(d: Mapping[str, Any], key: str) -> Any:
    if key not in d:
        raise MissingField(key)
    return d[key]


def _parse_param(d: Mapping[str, Any]) -> ParamSpec:
    type_tag: str = str(_require(d, 'type')).upper()
    if type_tag not in ParamType.__members__:
        raise BadEnum('type', d['type'], list(ParamType))

    return ParamSpec(name=_require(d, 'name'),
                     type=ParamType(type_tag),
                     description=d.get('description', ''),
                     default=d.get('default', ''),
                     extras={k: v for k, v in d.items() if k not in _PARAM_KEYS})


def _parse_api(d: Mapping[str, Any], tool_name: str, category: str) -> ApiDoc:
    method: str = str(_require(d, 'method')).upper()
    if method not in HttpMethod.__members__:
        raise BadEnum('method', d['method'], list(HttpMethod))

    example = d.get('example_response', '')
    if not isinstance(example, str):
        example: str = json.dumps(example, ensure_ascii=False)

    return ApiDoc(name=_require(d, 'name'),
                  description=_require(d, 'description'),
                  url=_require(d, 'url'),
                  http_method=HttpMethod(method),
                  required_parameters=[_parse_param(p) for p in d.get('required_parameters', [])],
                  optional_parameters=[_parse_param(p) for p in d.get('optional_parameters', [])],
                  example_response=example,
                  tool_name=d.get('tool_name', tool_name),
                  category_name=d.get('category_name', category),
                  extras={k: v for k, v in d.items() if k not in _API_KEYS})


def parse_tool_doc(raw: str | Mapping[str, Any]) -> ToolDoc:
    """Parse a tool document (JSON text or already-decoded mapping) into a `ToolDoc`."""
    d: Mapping[str, Any] = json.loads(raw) if isinstance(raw, str) else raw

    if 'name' in d:
        tool_name: str = d['name']
    elif 'tool_name' in d:
        tool_name: str = d['tool_name']
    else:
        raise MissingField('name')

    api_dicts: list[Mapping[str, Any]] = _require(d, 'api_list')
    if not api_dicts:
        raise MissingField('api_list', 'a tool must document at least one API')

    category: str | None = d.get('category_name') or next((a['category_name'] for a in api_dicts
                                                           if a.get('category_name')), None)
    if not category:
        raise MissingField('category_name')

    extras: dict[str, Any] = {k: v for k, v in d.items() if k not in _TOOL_KEYS}
    if 'name' in d and 'tool_name' in d:
        extras['tool_name'] = d['tool_name']

    return ToolDoc(tool_name=tool_name,
                   tool_description=_require(d, 'tool_description'),
                   category=category,
                   api_list=[_parse_api(a, tool_name=tool_name, category=category) for a in api_dicts],
                   host_url=d.get('host_url', ''),
                   collections=set(d.get('collections', [])),
                   extras=extras)


def _serialize_param(p: ParamSpec) -> dict[str, Any]:
    return {'name': p.name, 'type': str(p.type), 'description': p.description, 'default': p.default} | p.extras


def _serialize_api(api: ApiDoc) -> dict[str, Any]:
    return {'name': api.name,
            'url': api.url,
            'description': api.description,
            'method': str(api.http_method),
            'required_parameters': [_serialize_param(p) for p in api.required_parameters],
            'optional_parameters': [_serialize_param(p) for p in api.optional_parameters],
            'tool_name': api.tool_name,
            'category_name': api.category_name,
            'example_response': api.example_response} | api.extras


def serialize_tool_doc(tool: ToolDoc) -> dict[str, Any]:
    """Return the JSON-ready document form of a `ToolDoc` (inverse of `parse_tool_doc`)."""
    return {'tool_description': tool.tool_description,
            'name': tool.tool_name,
            'host_url': tool.host_url,
            'category_name': tool.category,
            'collections': sorted(tool.collections),
            'api_list': [_serialize_api(api) for api in tool.api_list]} | tool.extras
