"""
=======================
API SUBSET & SEED DRAWS
=======================

Every generation call works on a small sampled set of APIs:

- I1: all APIs of one tool (capped)
- I2: 2-5 tools of one category, 1-3 APIs of each
- I3: 2-5 tools of one collection, 1-3 APIs of each

plus 3 in-context seed examples drawn from the pool of the scenario's class.
All draws use a private `random.Random(seed)`, so equal seeds give equal draws.
"""


from __future__ import annotations

from collections.abc import Mapping, Sequence
from functools import cache
from importlib.resources import files
import json
import random
from typing import TYPE_CHECKING

from toolforge.core.util.config import ToolForgeConfig

from .errors import InsufficientTools, PoolTooSmall
from .instruction import Scenario, SeedClass, SeedExample

if TYPE_CHECKING:
    from toolforge.core.hub.doc import Hub, ToolDoc
    from toolforge.core.util.misc import ApiKey


MIN_TOOLS: int = 2
MAX_TOOLS: int = 5
MAX_APIS_PER_TOOL: int = 3
N_SEEDS: int = 3


def _pick(rng: random.Random, names: list[str], weights: Mapping[str, float] | None) -> str:
    if weights is None:
        return rng.choice(names)
    return rng.choices(names, weights=[weights.get(name, 0.0) for name in names])[0]


def _tool_groups(hub: Hub, scenario: Scenario) -> dict[str, list[ToolDoc]]:
    if scenario == Scenario.I2:
        groups: dict[str, list[ToolDoc]] = {category: hub.tools_in_category(category)
                                            for category in sorted(hub.categories)}
    else:
        groups: dict[str, list[ToolDoc]] = {collection: hub.tools_in_collection(collection)
                                            for collection in sorted(hub.collections)}
    return {name: tools for name, tools in groups.items() if len(tools) >= MIN_TOOLS}


def sample_api_subset(hub: Hub, scenario: Scenario, seed: int,
                      weights: Mapping[str, float] | None = None,
                      api_cap: int = ToolForgeConfig.SINGLE_TOOL_API_CAP) -> list[ApiKey]:
    """
    Sample the API subset of one generation call.

    `weights` optionally maps category (I1, I2) or collection (I3) names to relative sampling weights;
    the default is uniform.
    """
    rng: random.Random = random.Random(seed)

    if scenario == Scenario.I1:
        if not hub.tools:
            raise InsufficientTools('*** HUB HAS NO TOOL TO SAMPLE FROM ***')

        if weights is None:
            tool: ToolDoc = rng.choice(hub.tools)
        else:
            tool: ToolDoc = rng.choices(hub.tools, weights=[weights.get(t.category, 0.0) for t in hub.tools])[0]

        if len(tool.api_list) <= api_cap:
            return [api.key for api in tool.api_list]

        kept: set[int] = set(rng.sample(range(len(tool.api_list)), api_cap))
        return [api.key for i, api in enumerate(tool.api_list) if i in kept]

    if not (groups := _tool_groups(hub, scenario)):
        raise InsufficientTools(f'*** NO {"CATEGORY" if scenario == Scenario.I2 else "COLLECTION"} '
                                f'HOLDS AT LEAST {MIN_TOOLS} TOOLS ***')

    group: list[ToolDoc] = groups[_pick(rng, list(groups), weights)]
    tools: list[ToolDoc] = rng.sample(group, rng.randint(MIN_TOOLS, min(MAX_TOOLS, len(group))))

    subset: list[ApiKey] = []
    for tool in tools:
        n_apis: int = rng.randint(1, min(MAX_APIS_PER_TOOL, len(tool.api_list)))
        kept: set[int] = set(rng.sample(range(len(tool.api_list)), n_apis))
        subset.extend(api.key for i, api in enumerate(tool.api_list) if i in kept)
    return subset


@cache
def _bundled_seed_pool() -> tuple[SeedExample, ...]:
    raw: dict[str, list[str]] = json.loads(files('toolforge.core.datagen').joinpath('data').joinpath('seeds.json')
                                           .read_text(encoding='utf-8'))
    return tuple(SeedExample(scenario_class=SeedClass(seed_class), text=text)
                 for seed_class, texts in raw.items() for text in texts)


def load_seed_pool(scenario_class: SeedClass | None = None) -> list[SeedExample]:
    """Bundled seed examples (12 single-tool, 36 multi-tool), optionally of one class only."""
    return [example for example in _bundled_seed_pool()
            if scenario_class is None or example.scenario_class == scenario_class]


def select_seeds(pool: Sequence[SeedExample], scenario: Scenario, seed: int) -> list[SeedExample]:
    """Draw 3 distinct seed examples of the scenario's class, uniformly without replacement."""
    candidates: list[SeedExample] = [example for example in pool if example.scenario_class == scenario.seed_class]
    if len(candidates) < N_SEEDS:
        raise PoolTooSmall(f'*** {len(candidates)} {scenario.seed_class} SEED EXAMPLES, NEED {N_SEEDS} ***')

    return random.Random(seed).sample(candidates, N_SEEDS)
