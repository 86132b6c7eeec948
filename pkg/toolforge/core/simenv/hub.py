"""
=================
SIMULATED API HUB
=================

In-process stand-ins for live API endpoints. Each `SimApiSpec` fixes what its API returns:
a response template (with `$parameter` placeholders), a reported latency and an optional failure mode.
The executor never sleeps: latency is reported, not waited for.
"""


from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import StrEnum, auto
import json
from string import Template
from typing import Any

from toolforge.core.hub.doc import ApiDoc, HttpMethod, Hub, ParamSpec, ParamType, ToolDoc
from toolforge.core.hub.executor import ApiResponse, BaseApiExecutor
from toolforge.core.util.misc import ApiKey, format_api_key

from .errors import DuplicateKey


SIM_URL_PREFIX: str = 'sim://'

# API documentation extras entry holding simulated behavior
SIM_EXTRAS_KEY: str = 'sim'

DEFAULT_CATEGORY: str = 'Uncategorized'

NOT_FOUND_BODY: str = '{"message": "Not Found"}'
HTML_PAGE_BODY: str = '<html><head><title>Service Unavailable</title></head><body>Please try again later.</body></html>'
ERROR_BODY: str = '{"error": "Invalid API key", "data": {}}'


class FailureMode(StrEnum):
    NONE: str = auto()
    HTTP_404: str = 'http_404'
    HTML_PAGE: str = auto()
    ERROR_BODY: str = auto()
    TIMEOUT: str = auto()


def _param_type(value: Any) -> ParamType:
    match value:
        case bool():
            return ParamType.BOOLEAN
        case int() | float():
            return ParamType.NUMBER
        case list() | tuple():
            return ParamType.ARRAY
        case dict():
            return ParamType.OBJECT
        case _:
            return ParamType.STRING


@dataclass(frozen=True)
class SimApiSpec:
    """Behavior of one simulated API."""

    key: ApiKey
    response_template: str = '{"result": "ok"}'
    latency_ms: float = 50.0
    failure_mode: FailureMode = FailureMode.NONE

    # > 0: the body is sized to exactly this many whitespace-delimited tokens
    response_tokens: int = 0

    description: str = ''

    # required parameter name -> example value
    parameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.response_tokens < 0:
            raise ValueError(f'*** {format_api_key(self.key)}: RESPONSE TOKENS MUST BE NON-NEGATIVE ***')
        if self.latency_ms < 0:
            raise ValueError(f'*** {format_api_key(self.key)}: LATENCY MUST BE NON-NEGATIVE ***')

    def render(self, arguments: Mapping[str, Any] | None = None) -> str:
        """Healthy response body for the given arguments."""
        values: dict[str, str] = {name: str(value) for name, value in {**self.parameters, **(arguments or {})}.items()}
        body: str = Template(self.response_template).safe_substitute(values)

        if not self.response_tokens:
            return body

        words: list[str] = body.split()
        words.extend(f'item{i}' for i in range(len(words), self.response_tokens))
        return ' '.join(words[:self.response_tokens])

    def respond(self, arguments: Mapping[str, Any] | None = None) -> ApiResponse:
        match self.failure_mode:
            case FailureMode.HTTP_404:
                return ApiResponse(status_code=404, body=NOT_FOUND_BODY, latency_ms=self.latency_ms)
            case FailureMode.HTML_PAGE:
                return ApiResponse(status_code=200, body=HTML_PAGE_BODY, latency_ms=self.latency_ms)
            case FailureMode.ERROR_BODY:
                return ApiResponse(status_code=200, body=ERROR_BODY, latency_ms=self.latency_ms)
            case FailureMode.TIMEOUT:
                return ApiResponse(status_code=None, body='', latency_ms=self.latency_ms)
            case _:
                return ApiResponse(status_code=200, body=self.render(arguments), latency_ms=self.latency_ms)

    def api_doc(self, category: str) -> ApiDoc:
        tool_name, api_name = self.key
        return ApiDoc(name=api_name,
                      description=self.description or f'{api_name.replace("_", " ")} from {tool_name}',
                      url=f'{SIM_URL_PREFIX}{tool_name}/{api_name}',
                      http_method=HttpMethod.GET,
                      required_parameters=[ParamSpec(name=name, type=_param_type(value), default=value)
                                           for name, value in self.parameters.items()],
                      example_response=self.render() if self.failure_mode == FailureMode.NONE else '',
                      tool_name=tool_name,
                      category_name=category,
                      extras={SIM_EXTRAS_KEY: self.behavior()})

    def behavior(self) -> dict[str, Any]:
        """What the API does when called, kept in its documentation so a dumped hub replays it."""
        return {'response_template': self.response_template,
                'latency_ms': self.latency_ms,
                'failure_mode': str(self.failure_mode),
                'response_tokens': self.response_tokens}

    def to_dict(self) -> dict[str, Any]:
        return {'key': list(self.key),
                'response_template': self.response_template,
                'latency_ms': self.latency_ms,
                'failure_mode': str(self.failure_mode),
                'response_tokens': self.response_tokens,
                'description': self.description,
                'parameters': dict(self.parameters)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> SimApiSpec:
        return cls(key=tuple(d['key']),
                   response_template=d.get('response_template', '{"result": "ok"}'),
                   latency_ms=d.get('latency_ms', 50.0),
                   failure_mode=FailureMode(d.get('failure_mode', FailureMode.NONE)),
                   response_tokens=d.get('response_tokens', 0),
                   description=d.get('description', ''),
                   parameters=d.get('parameters', {}))


@dataclass(frozen=True)
class SimExecutor(BaseApiExecutor):
    """Executor replaying simulated API behavior; unknown APIs answer 404."""

    specs: Mapping[ApiKey, SimApiSpec]

    def call(self, api: ApiDoc, parameters: dict[str, Any]) -> ApiResponse:
        if (spec := self.specs.get(api.key)) is None:
            return ApiResponse(status_code=404, body=NOT_FOUND_BODY, latency_ms=0.0)
        return spec.respond(parameters)

    @classmethod
    def from_hub_examples(cls, hub: Hub, latency_ms: float = 50.0) -> SimExecutor:
        """
        Executor for every API of Hub: simulated behavior recorded in the API documentation is replayed,
        other APIs answer with their documented example response.
        """
        def spec(api: ApiDoc) -> SimApiSpec:
            if (behavior := api.extras.get(SIM_EXTRAS_KEY)) is not None:
                return SimApiSpec.from_dict(dict(behavior) | {'key': list(api.key)})
            return SimApiSpec(key=api.key, response_template=api.example_response, latency_ms=latency_ms)

        return cls(specs={api.key: spec(api) for api in hub})


def build_sim_hub(specs: Sequence[SimApiSpec], categories: Mapping[str, str] | None = None,
                  collections: Mapping[str, Iterable[str]] | None = None,
                  tool_descriptions: Mapping[str, str] | None = None) -> tuple[Hub, SimExecutor]:
    """
    Build Hub and executor from simulated API specs.

    `categories` maps tool names to categories (`Uncategorized` when absent);
    `collections` maps collection names to member tool names.
    """
    categories: Mapping[str, str] = categories or {}
    tool_descriptions: Mapping[str, str] = tool_descriptions or {}

    by_key: dict[ApiKey, SimApiSpec] = {}
    for spec in specs:
        if (key := tuple(spec.key)) in by_key:
            raise DuplicateKey(f'*** DUPLICATE SIMULATED API {format_api_key(key)} ***')
        by_key[key] = spec

    by_tool: dict[str, list[SimApiSpec]] = {}
    for spec in specs:
        by_tool.setdefault(spec.key[0], []).append(spec)

    membership: dict[str, set[str]] = {}
    for collection, members in (collections or {}).items():
        for tool_name in members:
            membership.setdefault(tool_name, set()).add(collection)

    tools: list[ToolDoc] = []
    for tool_name, tool_specs in by_tool.items():
        category: str = categories.get(tool_name, DEFAULT_CATEGORY)
        tools.append(ToolDoc(tool_name=tool_name,
                             tool_description=tool_descriptions.get(tool_name, f'Simulated tool {tool_name}'),
                             category=category,
                             api_list=[spec.api_doc(category) for spec in tool_specs],
                             collections=membership.get(tool_name, set())))

    return Hub.from_tools(tools), SimExecutor(specs=by_key)


def _spec(tool: str, api: str, template: dict[str, Any], description: str, **parameters: Any) -> SimApiSpec:
    return SimApiSpec(key=(tool, api), response_template=json.dumps(template), description=description,
                      parameters=parameters)


DEFAULT_SIM_CATEGORIES: dict[str, str] = {'weather_now': 'Weather', 'air_watch': 'Weather',
                                          'fx_rates': 'Finance', 'stock_feed': 'Finance',
                                          'word_faker': 'Data', 'geo_lookup': 'Data'}

DEFAULT_SIM_COLLECTIONS: dict[str, set[str]] = {'travel': {'weather_now', 'geo_lookup', 'fx_rates'},
                                                'daily_brief': {'air_watch', 'stock_feed', 'word_faker'}}


def default_sim_specs() -> list[SimApiSpec]:
    """12 healthy APIs of 6 tools."""
    return [
        _spec('weather_now', 'current_weather', {'city': '$city', 'temperature_c': 18, 'sky': 'clear'},
              'Current weather conditions of a city', city='Lisbon'),
        _spec('weather_now', 'forecast', {'city': '$city', 'days': '$days', 'outlook': ['sunny', 'rain', 'cloudy']},
              'Multi-day weather forecast of a city', city='Lisbon', days=3),
        _spec('air_watch', 'air_quality', {'city': '$city', 'aqi': 42, 'level': 'good'},
              'Air quality index of a city', city='Denver'),
        _spec('air_watch', 'pollen_count', {'city': '$city', 'grass': 'low', 'tree': 'moderate'},
              'Pollen levels of a city', city='Denver'),
        _spec('fx_rates', 'convert', {'from': '$source', 'to': '$target', 'amount': '$amount', 'result': 1840.5},
              'Convert an amount between currencies', amount=2000, source='USD', target='EUR'),
        _spec('fx_rates', 'latest_rates', {'base': '$base', 'rates': {'EUR': 0.92, 'JPY': 151.3, 'GBP': 0.79}},
              'Latest exchange rates for a base currency', base='USD'),
        _spec('stock_feed', 'quote', {'symbol': '$symbol', 'price': 187.44, 'change_pct': 1.2},
              'Latest price of a stock symbol', symbol='AAPL'),
        _spec('stock_feed', 'company_news', {'symbol': '$symbol', 'headlines': ['Quarterly results beat estimates']},
              'Recent news headlines about a company', symbol='AAPL'),
        _spec('word_faker', 'random_word', {'word': 'lantern'},
              'A random English word'),
        _spec('word_faker', 'sentence', {'sentence': 'The quiet river bends past the old mill.'},
              'A random English sentence'),
        _spec('geo_lookup', 'geocode', {'address': '$address', 'lat': 38.71, 'lng': -9.14},
              'Coordinates of a street address', address='Rua Augusta 100, Lisbon'),
        _spec('geo_lookup', 'timezone', {'city': '$city', 'timezone': 'Europe/Lisbon', 'utc_offset': '+00:00'},
              'Time zone of a city', city='Lisbon'),
    ]


def default_sim_hub() -> tuple[Hub, SimExecutor]:
    """12 APIs in 3 categories and 2 collections."""
    return build_sim_hub(default_sim_specs(), categories=DEFAULT_SIM_CATEGORIES, collections=DEFAULT_SIM_COLLECTIONS)


def health_fixture_specs(slow_latency_ms: float = 5000.0) -> list[SimApiSpec]:
    """APIs of every health class: 3 healthy, one each 404 / HTML / error body / slow / timeout."""
    return [
        SimApiSpec(key=('status_board', 'ping'), response_template='{"status": "up"}'),
        SimApiSpec(key=('status_board', 'uptime'), response_template='{"uptime_days": 41}'),
        SimApiSpec(key=('status_board', 'missing_page'), failure_mode=FailureMode.HTTP_404),
        SimApiSpec(key=('legacy_portal', 'login_page'), failure_mode=FailureMode.HTML_PAGE),
        SimApiSpec(key=('legacy_portal', 'account'), failure_mode=FailureMode.ERROR_BODY),
        SimApiSpec(key=('slow_archive', 'search'), response_template='{"hits": ["a", "b"]}',
                   latency_ms=slow_latency_ms),
        SimApiSpec(key=('slow_archive', 'fetch'), failure_mode=FailureMode.TIMEOUT),
        SimApiSpec(key=('echo', 'echo'), response_template='{"echo": "$text"}', parameters={'text': 'hello'}),
    ]


HEALTHY_FIXTURE_KEYS: frozenset[ApiKey] = frozenset({('status_board', 'ping'), ('status_board', 'uptime'),
                                                     ('echo', 'echo')})


def health_fixture_hub() -> tuple[Hub, SimExecutor]:
    return build_sim_hub(health_fixture_specs(), categories={'status_board': 'Monitoring', 'legacy_portal': 'Data',
                                                            'slow_archive': 'Data', 'echo': 'Data'})
