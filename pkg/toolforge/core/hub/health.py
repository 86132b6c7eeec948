"""
============================
API HEALTH CHECK & FILTERING
============================

Filtering is two-staged:

1. initial testing: call the API once with default/example parameters to check it is operational
2. example response evaluation: call it again, judge response time and response quality

An API is retained iff it is reachable, consistently fast enough, and returns an OK-quality response.
Tools left with no API are dropped from the hub.
"""


from __future__ import annotations

from collections.abc import Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import StrEnum, auto
import json
from typing import Any, TYPE_CHECKING

from loguru import logger
from tqdm import tqdm

from toolforge.core.util.config import ToolForgeConfig

from .doc import Hub, ParamType, ToolDoc
from .errors import MissingReport

if TYPE_CHECKING:
    from toolforge.core.util.misc import ApiKey
    from .doc import ApiDoc, ParamSpec
    from .executor import ApiResponse, BaseApiExecutor


class Quality(StrEnum):
    OK = 'OK'
    HTTP_ERROR = 'HTTP_ERROR'
    HTML_PAGE = 'HTML_PAGE'
    ERROR_MESSAGE = 'ERROR_MESSAGE'
    EMPTY = 'EMPTY'


class Verdict(StrEnum):
    RETAIN = auto()
    DISCARD = auto()


@dataclass(frozen=True)
class HealthReport:
    reachable: bool
    latency_ms: float
    quality: Quality
    verdict: Verdict
    reason: str

    @classmethod
    def judge(cls, reachable: bool, latency_ms: float, quality: Quality, latency_threshold_ms: float,
              reason: str = '') -> HealthReport:
        """Create report whose verdict follows from the measurements."""
        retain: bool = reachable and latency_ms <= latency_threshold_ms and quality == Quality.OK

        if not reason:
            if not reachable:
                reason: str = 'unreachable'
            elif quality != Quality.OK:
                reason: str = f'low-quality response ({quality})'
            elif latency_ms > latency_threshold_ms:
                reason: str = f'slow response ({latency_ms:.0f} ms > {latency_threshold_ms:.0f} ms)'
            else:
                reason: str = 'healthy'

        return cls(reachable=reachable, latency_ms=latency_ms, quality=quality,
                   verdict=Verdict.RETAIN if retain else Verdict.DISCARD, reason=reason)

    def to_dict(self) -> dict[str, Any]:
        return {'reachable': self.reachable, 'latency_ms': self.latency_ms, 'quality': str(self.quality),
                'verdict': str(self.verdict), 'reason': self.reason}


_ERROR_KEYS: frozenset[str] = frozenset({'error', 'message', 'errors', 'err'})

_PLACEHOLDERS: dict[ParamType, Any] = {ParamType.STRING: 'test',
                                       ParamType.NUMBER: 1,
                                       ParamType.BOOLEAN: True,
                                       ParamType.ARRAY: [],
                                       ParamType.OBJECT: {},
                                       ParamType.ENUM: ''}


def _is_empty(value: Any) -> bool:
    return value is None or value == '' or value == [] or value == {}


def classify_response(response: ApiResponse) -> Quality:
    """Classify response quality."""
    if not response.reachable or response.status_code >= 400:
        return Quality.HTTP_ERROR

    body: str = response.body.strip()
    if not body:
        return Quality.EMPTY

    if body.startswith('<'):
        return Quality.HTML_PAGE

    try:
        payload: Any = json.loads(body)
    except json.JSONDecodeError:
        return Quality.OK

    if _is_empty(payload):
        return Quality.EMPTY

    if isinstance(payload, dict):
        error_keys: set[str] = {k for k in payload if k.lower() in _ERROR_KEYS}
        if error_keys and all(_is_empty(v) for k, v in payload.items() if k not in error_keys):
            return Quality.ERROR_MESSAGE

    return Quality.OK


def default_parameters(api: ApiDoc) -> dict[str, Any]:
    """Default/example arguments for an API's required parameters."""
    def value(param: ParamSpec) -> Any:
        return param.default if not _is_empty(param.default) else _PLACEHOLDERS[param.type]

    return {param.name: value(param) for param in api.required_parameters}


def validate_api(doc: ApiDoc, executor: BaseApiExecutor,
                 latency_threshold_ms: float = ToolForgeConfig.LATENCY_THRESHOLD_MS) -> HealthReport:
    """Check an API's basic functionality and example-response quality."""
    parameters: dict[str, Any] = default_parameters(doc)

    # initial testing
    probe: ApiResponse = executor.call(doc, parameters)
    if not probe.reachable:
        return HealthReport.judge(reachable=False, latency_ms=probe.latency_ms, quality=Quality.HTTP_ERROR,
                                  latency_threshold_ms=latency_threshold_ms)

    # example response evaluation: slow only if slow on both calls
    example: ApiResponse = executor.call(doc, parameters)
    report: HealthReport = HealthReport.judge(reachable=example.reachable,
                                              latency_ms=min(probe.latency_ms, example.latency_ms),
                                              quality=classify_response(example),
                                              latency_threshold_ms=latency_threshold_ms)

    logger.debug(f'{doc.tool_name}/{doc.name}: {report.verdict} ({report.reason})')
    return report


def validate_hub(hub: Hub, executor: BaseApiExecutor,
                 latency_threshold_ms: float = ToolForgeConfig.LATENCY_THRESHOLD_MS,
                 jobs: int = 1, progress: bool = False) -> dict[ApiKey, HealthReport]:
    """Validate every API of Hub and return the report map."""
    apis: list[ApiDoc] = list(hub)

    def check(api: ApiDoc) -> HealthReport:
        return validate_api(api, executor, latency_threshold_ms=latency_threshold_ms)

    with ThreadPoolExecutor(max_workers=max(jobs, 1)) as pool:
        reports: list[HealthReport] = list(tqdm(pool.map(check, apis), total=len(apis),
                                                desc='validating APIs', disable=not progress))

    return {api.key: report for api, report in zip(apis, reports)}


def filter_hub(hub: Hub, reports: Mapping[ApiKey, HealthReport]) -> Hub:
    """Return Hub restricted to APIs with a Retain verdict, dropping emptied tools."""
    surviving_tools: list[ToolDoc] = []

    for tool in hub.tools:
        retained: list[ApiDoc] = []
        for api in tool.api_list:
            if (report := reports.get(api.key)) is None:
                raise MissingReport(*api.key)
            if report.verdict == Verdict.RETAIN:
                retained.append(api)

        if retained:
            surviving_tools.append(ToolDoc(tool_name=tool.tool_name,
                                           tool_description=tool.tool_description,
                                           category=tool.category,
                                           api_list=retained,
                                           host_url=tool.host_url,
                                           collections=set(tool.collections),
                                           extras=dict(tool.extras)))
        else:
            logger.info(f'dropping tool "{tool.tool_name}": no API survived filtering')

    surviving_names: set[str] = {tool.tool_name for tool in surviving_tools}
    emptied_categories: set[str] = {tool.category for tool in hub.tools} - {tool.category for tool in surviving_tools}
    filtered: Hub = Hub(tools=surviving_tools,
                        categories=hub.categories - emptied_categories,
                        collections={name: members & surviving_names
                                     for name, members in hub.collections.items()
                                     if members & surviving_names})

    logger.info(f'hub filtered: {hub.n_apis} -> {filtered.n_apis} APIs, '
                f'{len(hub.tools)} -> {len(filtered.tools)} tools')
    return filtered
