"""
======================
INSTRUCTION GENERATION
======================

A generation call shows the generator three parts: the task description of the scenario's class,
3 seed examples, and the documentation of every sampled API. The generator answers with a bracketed
list of records `[{"Query": ..., "related_apis": [...]}, ...]`.

`TemplateInstructionGenerator` writes such records mechanically from the sampled APIs, so the
pipeline runs offline; `LMInstructionGenerator` sends the assembled prompt to an LM.
"""


from __future__ import annotations

from abc import ABC, abstractmethod
import ast
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
import json
import random
import re
from typing import Any, TYPE_CHECKING

from loguru import logger
from tqdm import tqdm

from toolforge.core.hub.doc import ToolDoc, serialize_tool_doc
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.lm.openai import OpenAILM
from toolforge.core.util.misc import derive_seed

from ._prompts import (GENERATION_PROMPT_TEMPLATE, MULTI_TOOL_TASK_DESCRIPTION, OTHER_REQUIREMENTS,
                       SINGLE_TOOL_TASK_DESCRIPTION)
from .errors import GeneratorOutputUnparseable
from .instruction import InstructionPair, Scenario, SeedExample
from .sampling import sample_api_subset, select_seeds

if TYPE_CHECKING:
    from toolforge.core.hub.doc import ApiDoc, Hub
    from toolforge.core.util.lm.base import BaseLM
    from toolforge.core.util.misc import ApiKey


# API document keys the generator does not see
_HIDDEN_API_KEYS: frozenset[str] = frozenset({'tool_name', 'category_name', 'example_response', 'sim'})


@dataclass
class GenerationRequest:
    """Everything one generation call is conditioned on."""

    scenario: Scenario
    tools: list[ToolDoc]
    seeds: list[SeedExample]
    n_queries: int = ToolForgeConfig.QUERIES_PER_CALL
    seed: int = ToolForgeConfig.DEFAULT_SEED

    @property
    def apis(self) -> list[ApiDoc]:
        return [api for tool in self.tools for api in tool.api_list]

    @property
    def subset(self) -> list[ApiKey]:
        return [api.key for api in self.apis]


def subset_tools(hub: Hub, subset: Sequence[ApiKey]) -> list[ToolDoc]:
    """Tool documents of Hub restricted to the subset's APIs, in subset order."""
    by_tool: dict[str, list[ApiDoc]] = {}
    for key in subset:
        by_tool.setdefault(key[0], []).append(hub.api(key))

    return [ToolDoc(tool_name=(tool := hub.tool(tool_name)).tool_name,
                    tool_description=tool.tool_description,
                    category=tool.category,
                    api_list=apis,
                    host_url=tool.host_url,
                    collections=set(tool.collections))
            for tool_name, apis in by_tool.items()]


def _api_document(tool: ToolDoc) -> dict[str, Any]:
    d: dict[str, Any] = serialize_tool_doc(tool)
    return {'tool_name': d['name'],
            'tool_description': d['tool_description'],
            'api_list': [{k: v for k, v in api.items() if k not in _HIDDEN_API_KEYS} for api in d['api_list']]}


def build_generation_prompt(request: GenerationRequest) -> str:
    task_description: str = (MULTI_TOOL_TASK_DESCRIPTION if request.scenario.multi_tool
                             else SINGLE_TOOL_TASK_DESCRIPTION).format(n_queries=request.n_queries)

    return GENERATION_PROMPT_TEMPLATE.format(
        task_description=task_description,
        seed_examples='\n'.join(f'{{{example.text}}}' for example in request.seeds),
        api_documents='\n'.join(json.dumps(_api_document(tool), ensure_ascii=False) for tool in request.tools),
        other_requirements=OTHER_REQUIREMENTS.format(n_queries=request.n_queries))


_RECORD_PATTERN: re.Pattern = re.compile(r'\{.*?\}(?=\s*(?:,\s*\{|\]|$))', re.DOTALL)


def _literal(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass

    try:
        return ast.literal_eval(text)
    except (ValueError, SyntaxError, MemoryError, RecursionError):
        return None


def _related_key(item: Any, request: GenerationRequest) -> ApiKey | None:
    if isinstance(item, str):
        # single-tool records name APIs without their tool
        tool_names: list[str] = [tool.tool_name for tool in request.tools]
        return (tool_names[0], item) if len(tool_names) == 1 else None

    if isinstance(item, (list, tuple)) and len(item) == 2 and all(isinstance(part, str) for part in item):
        return (item[0], item[1])

    return None


def _to_pair(record: Any, request: GenerationRequest) -> InstructionPair | None:
    if not isinstance(record, Mapping):
        return None

    query: Any = record.get('Query', record.get('query'))
    related: Any = record.get('related_apis')
    if not isinstance(query, str) or not query.strip() or not isinstance(related, (list, tuple)) or not related:
        return None

    keys: list[ApiKey | None] = [_related_key(item, request) for item in related]
    if any(key is None for key in keys):
        return None

    return InstructionPair(query=query.strip(), related_apis=keys, scenario=request.scenario, subset=request.subset)


def parse_generator_output(text: str, request: GenerationRequest) -> list[InstructionPair]:
    """
    Parse a bracketed record list into instruction pairs.

    The outer list is read as JSON, then as a Python literal; failing both, records are recovered one by one.
    Records lacking a query or a well-formed `related_apis` list are skipped with a warning.
    """
    start: int = text.find('[')
    end: int = text.rfind(']')
    if start < 0 or end <= start:
        raise GeneratorOutputUnparseable('generator output has no bracketed record list')

    records: Any = _literal(text[start:end + 1])
    if not isinstance(records, list):
        records = [record for snippet in _RECORD_PATTERN.findall(text[start + 1:end + 1])
                   if (record := _literal(snippet)) is not None]
        if not records:
            raise GeneratorOutputUnparseable('generator output records cannot be parsed')

    pairs: list[InstructionPair] = []
    for i, record in enumerate(records):
        if (pair := _to_pair(record, request)) is None:
            logger.warning(f'skipping unparseable generator record #{i}: {str(record)[:200]}')
        else:
            pairs.append(pair)
    return pairs


class BaseInstructionGenerator(ABC):
    """Instruction generator abstract base class."""

    @abstractmethod
    def generate(self, prompt: str, request: GenerationRequest) -> str:
        """Return the raw bracketed record list answering Prompt."""


_OPENERS: tuple[str, ...] = ('Could you help me', 'I would like to', 'Please', 'My team needs to',
                             'For a project with my friends, I want to', 'Our company is trying to')


def _example_arguments(api: ApiDoc) -> str:
    values: list[str] = [f'{p.name} {p.default}' for p in api.required_parameters if p.default not in ('', None)]
    return f' using {", ".join(values)}' if values else ''


@dataclass
class TemplateInstructionGenerator(BaseInstructionGenerator):
    """Deterministic generator referencing sampled APIs through fixed phrasings."""

    max_related: int = 3

    def generate(self, prompt: str, request: GenerationRequest) -> str:
        rng: random.Random = random.Random(request.seed)
        apis: list[ApiDoc] = request.apis
        by_tool: dict[str, list[ApiDoc]] = {}
        for api in apis:
            by_tool.setdefault(api.tool_name, []).append(api)

        records: list[dict[str, Any]] = []
        for _ in range(request.n_queries):
            if request.scenario.multi_tool and len(by_tool) >= 2:
                tool_names: list[str] = rng.sample(sorted(by_tool), rng.randint(2, min(len(by_tool), self.max_related)))
                related: list[ApiDoc] = [rng.choice(by_tool[name]) for name in tool_names]
            else:
                related: list[ApiDoc] = rng.sample(apis, min(len(apis), rng.randint(1, self.max_related)))

            needs: str = ', and then '.join(f'{api.description.rstrip(".").lower() or api.name} with '
                                            f'{api.tool_name} {api.name}{_example_arguments(api)}'
                                            for api in related)
            records.append({'Query': f'{rng.choice(_OPENERS)} {needs}.',
                            'related_apis': ([[api.tool_name, api.name] for api in related]
                                             if request.scenario.multi_tool else [api.name for api in related])})

        return json.dumps(records, ensure_ascii=False)


@dataclass
class LMInstructionGenerator(BaseInstructionGenerator):
    """LM-backed instruction generator."""

    lm: BaseLM = field(default_factory=OpenAILM.from_defaults,
                       init=True,
                       repr=True,
                       hash=None,
                       compare=True,
                       metadata=None,
                       kw_only=False)

    def generate(self, prompt: str, request: GenerationRequest) -> str:
        return self.lm.get_response(prompt=prompt, seed=request.seed)


def generate_instructions(subset: Sequence[ApiKey], hub: Hub, seeds: Sequence[SeedExample],
                          generator: BaseInstructionGenerator, scenario: Scenario,
                          n_queries: int = ToolForgeConfig.QUERIES_PER_CALL,
                          seed: int = ToolForgeConfig.DEFAULT_SEED) -> list[InstructionPair]:
    """Run one generation call over the subset and parse its records (hallucinations not yet filtered)."""
    if not subset:
        raise ValueError('*** CANNOT GENERATE INSTRUCTIONS FROM AN EMPTY API SUBSET ***')

    request: GenerationRequest = GenerationRequest(scenario=scenario, tools=subset_tools(hub, subset),
                                                   seeds=list(seeds), n_queries=n_queries, seed=seed)
    prompt: str = build_generation_prompt(request)
    logger.debug(f'generation prompt:\n{prompt}')

    return parse_generator_output(generator.generate(prompt, request), request)


def filter_hallucinated(pairs: Sequence[InstructionPair]) -> list[InstructionPair]:
    """Keep pairs whose relevant APIs all come from their subset (and span >= 2 tools for multi-tool scenarios)."""
    kept: list[InstructionPair] = [
        pair for pair in pairs
        if pair.related_apis
        and set(pair.related_apis) <= set(pair.subset)
        and (not pair.scenario.multi_tool or len(pair.related_tools) >= 2)]

    if len(kept) < len(pairs):
        logger.info(f'dropped {len(pairs) - len(kept)} of {len(pairs)} pairs citing hallucinated APIs')
    return kept


def _normalize_query(query: str) -> str:
    return ' '.join(query.split())


def dedup_instructions(pairs: Sequence[InstructionPair]) -> list[InstructionPair]:
    """Drop pairs whose whitespace-normalized query repeats an earlier one."""
    seen: set[str] = set()
    unique: list[InstructionPair] = []
    for pair in pairs:
        if (query := _normalize_query(pair.query)) not in seen:
            seen.add(query)
            unique.append(pair)
    return unique


def build_instruction_set(hub: Hub, scenario: Scenario, count: int, seed: int,
                          generator: BaseInstructionGenerator, pool: Sequence[SeedExample],
                          n_queries: int = ToolForgeConfig.QUERIES_PER_CALL,
                          weights: Mapping[str, float] | None = None,
                          max_calls: int | None = None, progress: bool = False) -> list[InstructionPair]:
    """
    Repeat generation calls until `count` filtered, deduplicated pairs exist (or `max_calls` calls were made).

    Call `i` derives its subset and seed draws from `derive_seed(seed, scenario, i)`.
    """
    n_calls: int = max_calls if max_calls is not None else 4 * max(1, -(-count // max(n_queries, 1)))
    pairs: list[InstructionPair] = []

    with tqdm(total=count, desc=f'generating {scenario} instructions', disable=not progress) as bar:
        for i in range(n_calls):
            if len(pairs) >= count:
                break

            call_seed: int = derive_seed(seed, str(scenario), i)
            try:
                subset: list[ApiKey] = sample_api_subset(hub, scenario, seed=call_seed, weights=weights)
                generated: list[InstructionPair] = generate_instructions(
                    subset, hub, select_seeds(pool, scenario, seed=call_seed), generator, scenario,
                    n_queries=n_queries, seed=call_seed)
            except GeneratorOutputUnparseable as err:
                logger.warning(f'generation call #{i} skipped: {err}')
                continue

            before: int = len(pairs)
            pairs = dedup_instructions(pairs + filter_hallucinated(generated))[:count]
            bar.update(len(pairs) - before)

    if len(pairs) < count:
        logger.warning(f'only {len(pairs)} of {count} {scenario} instructions after {n_calls} generation calls')
    return pairs

