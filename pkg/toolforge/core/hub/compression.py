"""
========================
API RESPONSE COMPRESSION
========================

Each API has a fixed response format, so one example response is enough to decide,
once per API, which keys are worth keeping. At call time, a response longer than the token limit
has the schema's unimportant keys removed; if it is still too long, only its first `max_tokens` tokens are kept.
"""


from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Iterator, Mapping
import copy
from dataclasses import dataclass, field
import json
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.tokens import DEFAULT_TOKEN_COUNTER

from ._prompts import COMPRESSION_IN_CONTEXT_EXAMPLES, COMPRESSION_SCHEMA_PROMPT_TEMPLATE
from .errors import HubInvariantError, UnparseableExample

if TYPE_CHECKING:
    from toolforge.core.util.lm.base import BaseLM
    from toolforge.core.util.tokens import TokenCounter
    from .doc import ApiDoc, Hub


type KeyPath = str


@dataclass(frozen=True)
class CompressionSchema:
    """Which response keys to keep and drop, and the token limit."""

    keep_keys: frozenset[KeyPath] = frozenset()
    drop_keys: frozenset[KeyPath] = frozenset()
    max_tokens: int = ToolForgeConfig.MAX_RESPONSE_TOKENS

    def __post_init__(self):
        if self.keep_keys & self.drop_keys:
            raise HubInvariantError(f'*** KEYS BOTH KEPT AND DROPPED: {sorted(self.keep_keys & self.drop_keys)} ***')
        if self.max_tokens < 1:
            raise HubInvariantError('*** max_tokens MUST BE POSITIVE ***')

    @property
    def truncation_only(self) -> bool:
        return not self.drop_keys

    def to_dict(self) -> dict[str, Any]:
        return {'keep_keys': sorted(self.keep_keys), 'drop_keys': sorted(self.drop_keys),
                'max_tokens': self.max_tokens}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> CompressionSchema:
        return cls(keep_keys=frozenset(d.get('keep_keys', ())), drop_keys=frozenset(d.get('drop_keys', ())),
                   max_tokens=d.get('max_tokens', ToolForgeConfig.MAX_RESPONSE_TOKENS))


def parse_key_value(text: str) -> dict | list:
    """Parse a response as a key-value structure (an object, or a list holding objects)."""
    try:
        payload: Any = json.loads(text)
    except json.JSONDecodeError as err:
        raise UnparseableExample(f'not JSON: {err.msg}') from err

    if isinstance(payload, dict) or (isinstance(payload, list) and any(isinstance(e, dict) for e in payload)):
        return payload

    raise UnparseableExample(f'not a key-value structure: {type(payload).__name__}')


def iter_key_paths(payload: Any, prefix: str = '', depth: int = 1) -> Iterator[tuple[KeyPath, int, Any]]:
    """Yield `(key path, depth, value)` for every object key, traversing lists transparently."""
    if isinstance(payload, dict):
        for k, v in payload.items():
            path: KeyPath = f'{prefix}.{k}' if prefix else str(k)
            yield path, depth, v
            yield from iter_key_paths(v, prefix=path, depth=depth + 1)

    elif isinstance(payload, list):
        for element in payload:
            yield from iter_key_paths(element, prefix=prefix, depth=depth)


def remove_key_paths(payload: Any, paths: frozenset[KeyPath] | set[KeyPath]) -> Any:
    """Return a copy of payload without the given key paths."""
    def prune(node: Any, prefix: str) -> Any:
        if isinstance(node, dict):
            return {k: prune(v, path) for k, v in node.items()
                    if (path := f'{prefix}.{k}' if prefix else str(k)) not in paths}
        if isinstance(node, list):
            return [prune(element, prefix) for element in node]
        return node

    return prune(copy.deepcopy(payload), '')


def _dumps(payload: Any) -> str:
    return json.dumps(payload, ensure_ascii=False)


def compress_response(raw: str, schema: CompressionSchema, counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> str:
    """Compress API response text to at most `schema.max_tokens` tokens."""
    if counter.count(raw) <= schema.max_tokens:
        return raw

    text: str = raw
    if schema.drop_keys:
        try:
            payload: Any = json.loads(raw)
        except json.JSONDecodeError:
            payload = None

        if isinstance(payload, dict | list):
            text: str = _dumps(remove_key_paths(payload, schema.drop_keys))
            if counter.count(text) <= schema.max_tokens:
                return text

    return counter.truncate(text, schema.max_tokens)


class BaseSchemaProposer(ABC):
    """Proposes a compression schema from an API's documentation and example response."""

    @abstractmethod
    def propose(self, doc: ApiDoc, max_tokens: int, counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> CompressionSchema:
        """Return compression schema for API, raising `UnparseableExample` for non key-value examples."""


@dataclass
class RuleBasedSchemaProposer(BaseSchemaProposer):
    """Greedy rule: rank non-object values by depth (shallowest first), longest first within a depth,
    and drop them in that order until the example fits.

    Object-valued keys are never dropped wholesale, so nested fields stay individually addressable.
    Keys named in `important_keys` (by path or by bare key name) are never dropped.
    """

    important_keys: frozenset[str] = field(default_factory=frozenset)

    def _is_important(self, path: KeyPath) -> bool:
        return path in self.important_keys or path.rsplit('.', maxsplit=1)[-1] in self.important_keys

    def propose(self, doc: ApiDoc, max_tokens: int, counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> CompressionSchema:
        payload: dict | list = parse_key_value(doc.example_response)

        candidates: dict[KeyPath, tuple[int, int]] = {}
        for path, depth, value in iter_key_paths(payload):
            if isinstance(value, dict):
                continue
            n_tokens: int = counter.count(_dumps(value))
            prev_depth, prev_tokens = candidates.get(path, (depth, 0))
            candidates[path] = (prev_depth, prev_tokens + n_tokens)

        ranked: list[KeyPath] = sorted(candidates, key=lambda p: (candidates[p][0], -candidates[p][1], p))

        drop: set[KeyPath] = set()
        for path in ranked:
            if counter.count(_dumps(remove_key_paths(payload, drop))) <= max_tokens:
                break
            if not self._is_important(path):
                drop.add(path)

        keep: set[KeyPath] = {path for path in candidates if path not in drop}
        keep |= {path for path, _, _ in iter_key_paths(payload) if self._is_important(path)}

        return CompressionSchema(keep_keys=frozenset(keep), drop_keys=frozenset(drop), max_tokens=max_tokens)


@dataclass
class LMSchemaProposer(BaseSchemaProposer):
    """LM-written compression schema, prompted with the tool documentation and three expert examples.

    Tool descriptions are looked up in `hub` when given.
    """

    lm: BaseLM
    hub: Hub | None = field(default=None, repr=False)

    def _tool_description(self, doc: ApiDoc) -> str:
        if self.hub is None:
            return ''
        try:
            return self.hub.tool(doc.tool_name).tool_description
        except KeyError:
            logger.warning(f'{doc.tool_name}/{doc.name}: tool not in hub, prompting without its description')
            return ''

    def propose(self, doc: ApiDoc, max_tokens: int, counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> CompressionSchema:
        payload: dict | list = parse_key_value(doc.example_response)
        known_paths: set[KeyPath] = {path for path, _, _ in iter_key_paths(payload)}

        answer: dict = self.lm.get_response(
            prompt=COMPRESSION_SCHEMA_PROMPT_TEMPLATE.format(
                in_context_examples=COMPRESSION_IN_CONTEXT_EXAMPLES,
                tool_name=doc.tool_name, tool_description=self._tool_description(doc),
                api_name=doc.name, api_description=doc.description,
                parameters=[p.name for p in doc.parameters], example_response=doc.example_response),
            json_format=True)

        drop: set[KeyPath] = {p for p in answer.get('drop_keys', []) if p in known_paths}
        keep: set[KeyPath] = {p for p in answer.get('keep_keys', []) if p in known_paths} - drop

        if unknown := set(answer.get('drop_keys', [])) - known_paths:
            logger.warning(f'{doc.tool_name}/{doc.name}: proposer named unknown keys {sorted(unknown)}')

        return CompressionSchema(keep_keys=frozenset(keep), drop_keys=frozenset(drop), max_tokens=max_tokens)


def derive_compression_schema(doc: ApiDoc, judge: BaseSchemaProposer | None = None,
                              max_tokens: int = ToolForgeConfig.MAX_RESPONSE_TOKENS,
                              counter: TokenCounter = DEFAULT_TOKEN_COUNTER) -> CompressionSchema:
    """Derive API's compression schema, falling back to truncation-only for non key-value examples."""
    judge: BaseSchemaProposer = judge or RuleBasedSchemaProposer()

    try:
        return judge.propose(doc, max_tokens=max_tokens, counter=counter)
    except UnparseableExample as err:
        logger.warning(f'{doc.tool_name}/{doc.name}: {err}; using truncation-only compression')
        return CompressionSchema(max_tokens=max_tokens)
