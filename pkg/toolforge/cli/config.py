"""
=================
RUN CONFIGURATION
=================

A command run is described by a validated `RunConfig`. Values resolve in this order:
built-in defaults (`ToolForgeConfig`), then the `[defaults]` table of the `--config` TOML file,
then explicit command-line flags. External providers are picked by named `[profiles.<name>]`
tables; their credential always comes from `TOOLFORGE_PROVIDER_KEY`.
"""


from __future__ import annotations

from collections.abc import Mapping
from enum import StrEnum, auto
from pathlib import Path
import tomllib
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from toolforge.core.datagen.instruction import Scenario
from toolforge.core.evaluation.rules import MIN_VOTES
from toolforge.core.reasoning.strategy import SearchConfig, Strategy
from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import ConfigError
from toolforge.core.util.lm.openai import OpenAILM
from toolforge.core.util.misc import config_hash


DEFAULT_PROFILE: str = 'default'

# fields that locate or display a run but do not change its outputs
_PRESENTATION_FIELDS: frozenset[str] = frozenset({'output_dir', 'jobs', 'credential'})


class Provider(StrEnum):
    # deterministic in-process policy, judge, generator and executor
    SIM: str = auto()

    # LM-backed policy, judge and generator; live HTTP executor
    EXTERNAL: str = auto()


class ProviderProfile(BaseModel):
    model_config = ConfigDict(extra='forbid')

    model: str = ToolForgeConfig.DEFAULT_MODEL
    api_base: str = ToolForgeConfig.PROVIDER_URL


class RunConfig(BaseModel):
    """Resolved configuration of one command run."""

    model_config = ConfigDict(extra='forbid')

    hub_dir: Path | None = Field(default_factory=lambda: Path(ToolForgeConfig.HUB_DIR)
                                 if ToolForgeConfig.HUB_DIR else None)
    scenario: Scenario = Scenario.I1
    strategy: Strategy = Strategy.DFSDT
    budget: int = Field(default=ToolForgeConfig.DEFAULT_BUDGET, ge=1)
    max_children: int = Field(default=ToolForgeConfig.DFSDT_MAX_CHILDREN, ge=1)
    max_depth: int = Field(default=ToolForgeConfig.DFSDT_MAX_DEPTH, ge=1)
    cost_target: int | None = Field(default=None, ge=1)
    seeds: list[int] = Field(default_factory=lambda: [ToolForgeConfig.DEFAULT_SEED], min_length=1)
    provider: Provider = Provider.SIM
    profile: str = DEFAULT_PROFILE
    profiles: dict[str, ProviderProfile] = Field(default_factory=dict)
    output_dir: Path = Path('toolforge-output')
    jobs: int = Field(default=1, ge=1)
    votes: int = Field(default=MIN_VOTES, ge=MIN_VOTES)
    latency_threshold_ms: float = Field(default=ToolForgeConfig.LATENCY_THRESHOLD_MS, gt=0)
    credential: str | None = Field(default_factory=lambda: ToolForgeConfig.PROVIDER_KEY, repr=False)

    @model_validator(mode='after')
    def check_provider(self) -> RunConfig:
        if self.provider == Provider.EXTERNAL:
            if not self.credential:
                raise ValueError('external provider requires a credential (set TOOLFORGE_PROVIDER_KEY)')
            if self.profiles and self.profile not in self.profiles:
                raise ValueError(f'unknown provider profile "{self.profile}"; known: {sorted(self.profiles)}')
        return self

    @property
    def seed(self) -> int:
        return self.seeds[0]

    @property
    def provider_profile(self) -> ProviderProfile:
        return self.profiles.get(self.profile, ProviderProfile())

    def search_config(self, strategy: Strategy | None = None) -> SearchConfig:
        return SearchConfig(strategy=strategy or self.strategy, budget=self.budget, max_children=self.max_children,
                            max_depth=self.max_depth, cost_target=self.cost_target)

    def lm(self) -> OpenAILM:
        profile: ProviderProfile = self.provider_profile
        # pylint: disable=unexpected-keyword-arg
        return OpenAILM(model=profile.model, api_base=profile.api_base, api_key=self.credential or '')

    def manifest_dict(self) -> dict[str, Any]:
        return self.model_dump(mode='json', exclude={'credential'})

    def config_hash(self) -> str:
        """Hash of everything that determines the run's outputs."""
        return config_hash(self.model_dump(mode='json', exclude=set(_PRESENTATION_FIELDS)))


def load_config_file(path: Path | str) -> dict[str, Any]:
    """Read a TOML config file: a `[defaults]` table of RunConfig fields and `[profiles.<name>]` tables."""
    path: Path = Path(path)
    try:
        with path.open(mode='rb') as f:
            document: dict[str, Any] = tomllib.load(f)
    except FileNotFoundError as err:
        raise ConfigError(f'config file not found: {path}') from err
    except tomllib.TOMLDecodeError as err:
        raise ConfigError(f'invalid config file {path}: {err}') from err

    if unknown := set(document) - {'defaults', 'profiles'}:
        raise ConfigError(f'unknown config tables {sorted(unknown)} in {path}')

    return dict(document.get('defaults', {})) | {'profiles': dict(document.get('profiles', {}))}


def resolve_config(overrides: Mapping[str, Any], config_file: Path | str | None = None) -> RunConfig:
    """RunConfig from the config file (if any) overridden by the non-None `overrides`."""
    values: dict[str, Any] = load_config_file(config_file) if config_file else {}
    values |= {key: value for key, value in overrides.items() if value is not None}

    try:
        return RunConfig(**values)
    except ValidationError as err:
        problems: str = '; '.join(f'{".".join(map(str, e["loc"])) or "config"}: {e["msg"]}' for e in err.errors())
        raise ConfigError(f'invalid run configuration: {problems}') from err
