"""
==============
EPISODE KERNEL
==============

State of one instruction being worked on, and the transition applying one action to it.

API failures, hallucinated APIs and malformed policy output never raise:
they become the step's observation, and the episode keeps running.
"""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum, auto
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.hub.compression import CompressionSchema, compress_response
from toolforge.core.hub.doc import ParamType
from toolforge.core.util.tokens import DEFAULT_TOKEN_COUNTER

from .action import Action, ActionKind
from .errors import EpisodeNotRunning
from .functions import FunctionCatalog

if TYPE_CHECKING:
    from collections.abc import Sequence
    from toolforge.core.hub.doc import ApiDoc
    from toolforge.core.hub.executor import ApiResponse, BaseApiExecutor
    from toolforge.core.util.misc import ApiKey
    from toolforge.core.util.tokens import TokenCounter
    from .errors import MalformedAction


MALFORMED_ACTION_NAME: str = 'malformed_action'

type SchemaMap = CompressionSchema | Mapping[ApiKey, CompressionSchema] | None


class EpisodeStatus(StrEnum):
    RUNNING: str = auto()
    FINISHED_ANSWER: str = auto()
    GAVE_UP: str = auto()
    BUDGET_EXHAUSTED: str = auto()


@dataclass(frozen=True)
class Step:
    """An action with its observation and the number of policy calls it consumed."""

    action: Action
    observation: str = ''
    cost: int = 1

    # tool of the called API, when the call resolved to one
    tool_name: str = ''

    # whether the observation reports a failure (API error, hallucination, malformed output)
    error: bool = False

    def __post_init__(self):
        if self.cost < 1:
            raise ValueError('*** STEP COST MUST BE AT LEAST 1 ***')
        if self.action.is_finish and self.observation:
            raise ValueError('*** FINISH STEPS HAVE NO OBSERVATION ***')

    @property
    def api_key(self) -> ApiKey | None:
        return (self.tool_name, self.action.api_name) if self.tool_name else None

    @property
    def successful_call(self) -> bool:
        return not self.action.is_finish and bool(self.tool_name) and not self.error


@dataclass
class EpisodeState:
    """State of one episode."""

    instruction: str
    catalog: FunctionCatalog
    history: list[Step] = field(default_factory=list)
    status: EpisodeStatus = EpisodeStatus.RUNNING

    @classmethod
    def start(cls, instruction: str, apis: Sequence[ApiDoc]) -> EpisodeState:
        return cls(instruction=instruction, catalog=FunctionCatalog(apis=list(apis)))

    @property
    def available_apis(self) -> list[ApiKey]:
        return [api.key for api in self.catalog.apis]

    @property
    def functions(self) -> list[dict[str, Any]]:
        return self.catalog.schemas

    @property
    def running(self) -> bool:
        return self.status == EpisodeStatus.RUNNING

    @property
    def policy_calls(self) -> int:
        return sum(s.cost for s in self.history)

    def fork(self) -> EpisodeState:
        """Copy whose history can grow independently."""
        return EpisodeState(instruction=self.instruction, catalog=self.catalog,
                            history=list(self.history), status=self.status)

    def exhaust(self):
        if self.running:
            self.status: EpisodeStatus = EpisodeStatus.BUDGET_EXHAUSTED

    def append(self, s: Step) -> Step:
        if not self.running:
            raise EpisodeNotRunning(f'*** EPISODE IS {self.status.upper()}; NO FURTHER STEP ALLOWED ***')
        self.history.append(s)
        return s


def _schema_for(schemas: SchemaMap, key: ApiKey) -> CompressionSchema:
    if isinstance(schemas, CompressionSchema):
        return schemas
    if schemas is None:
        return CompressionSchema()
    return schemas.get(key) or CompressionSchema()


def parameter_warnings(api: ApiDoc, parameters: Mapping[str, Any]) -> list[str]:
    """Advisory problems of arguments against API's parameter specs."""
    warnings: list[str] = [f'[warning] missing required parameter "{p.name}"'
                           for p in api.required_parameters if p.name not in parameters]

    checks: dict[ParamType, tuple[type, ...]] = {ParamType.STRING: (str,),
                                                 ParamType.NUMBER: (int, float),
                                                 ParamType.BOOLEAN: (bool,),
                                                 ParamType.ARRAY: (list,),
                                                 ParamType.OBJECT: (dict,)}
    for p in api.parameters:
        if p.name in parameters and (expected := checks.get(p.type)) is not None:
            value: Any = parameters[p.name]
            if not isinstance(value, expected) or (p.type == ParamType.NUMBER and isinstance(value, bool)):
                warnings.append(f'[warning] parameter "{p.name}" expects {p.type}')

    known: set[str] = {p.name for p in api.parameters}
    warnings.extend(f'[warning] unknown parameter "{name}"' for name in parameters if name not in known)
    return warnings


def describe_response(response: ApiResponse) -> tuple[str, bool]:
    """Observation text of an API response, and whether it reports a failure."""
    if not response.reachable:
        return f'API call failed: no response{": " + response.body if response.body else ""}', True
    if response.status_code >= 400:
        return f'API error {response.status_code}: {response.body}', True
    return response.body, False


def step(state: EpisodeState, action: Action, executor: BaseApiExecutor, schema: SchemaMap = None,
         cost: int = 1, counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> tuple[EpisodeState, Step]:
    """Apply Action to a running episode."""
    if not state.running:
        raise EpisodeNotRunning(f'*** EPISODE IS {state.status.upper()}; NO FURTHER STEP ALLOWED ***')

    if action.kind == ActionKind.FINISH:
        s: Step = state.append(Step(action=action, cost=cost))
        state.status: EpisodeStatus = EpisodeStatus.FINISHED_ANSWER if action.is_answer else EpisodeStatus.GAVE_UP
        return state, s

    if (api := state.catalog.resolve(action.api_name)) is None:
        logger.debug(f'hallucinated API "{action.api_name}"')
        return state, state.append(Step(action=action, observation=f'hallucinated API: {action.api_name}',
                                         cost=cost, error=True))

    body, failed = describe_response(executor.call(api, action.parameters))
    observation: str = compress_response(body, _schema_for(schema, api.key), counter=counter)

    if warnings := parameter_warnings(api, action.parameters):
        observation: str = '\n'.join([observation, *warnings])

    logger.debug(f'{api.tool_name}/{api.name} -> {observation[:200]!r}')
    return state, state.append(Step(action=action, observation=observation, cost=cost,
                                     tool_name=api.tool_name, error=failed))


def malformed_step(error: MalformedAction, raw: Any, cost: int = 1) -> Step:
    """Step recording a malformed policy output as an error observation."""
    text: str = raw if isinstance(raw, str) else repr(raw)
    return Step(action=Action.call(api_name=MALFORMED_ACTION_NAME, parameters={}, thought=text),
                observation=f'malformed action: {error}', cost=cost, error=True)


def record_malformed(state: EpisodeState, error: MalformedAction, raw: Any, cost: int = 1) -> tuple[EpisodeState, Step]:
    """Append a malformed-output step; the episode keeps running."""
    logger.warning(f'malformed policy output: {error}')
    return state, state.append(malformed_step(error, raw, cost=cost))
