"""Instruction-generation records: scenarios, (instruction, relevant APIs) pairs and seed examples."""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum, auto
from typing import Any

from toolforge.core.util.errors import DecodeError
from toolforge.core.util.misc import ApiKey


class Scenario(StrEnum):
    """Instruction scenario."""

    # single-tool instructions
    I1: str = 'I1'

    # intra-category multi-tool instructions
    I2: str = 'I2'

    # intra-collection multi-tool instructions
    I3: str = 'I3'

    @property
    def multi_tool(self) -> bool:
        return self != Scenario.I1

    @property
    def seed_class(self) -> SeedClass:
        return SeedClass.MULTI_TOOL if self.multi_tool else SeedClass.SINGLE_TOOL


class SeedClass(StrEnum):
    SINGLE_TOOL: str = auto()
    MULTI_TOOL: str = auto()


@dataclass(frozen=True)
class SeedExample:
    """Hand-written seed instruction shown to the generator as an in-context example."""

    scenario_class: SeedClass
    text: str


@dataclass
class InstructionPair:
    """Generated instruction with its relevant APIs and the API subset it was sampled from."""

    query: str
    related_apis: list[ApiKey]
    scenario: Scenario
    subset: list[ApiKey] = field(default_factory=list)

    @property
    def related_tools(self) -> set[str]:
        return {tool_name for tool_name, _ in self.related_apis}

    def to_dict(self) -> dict[str, Any]:
        return {'query': self.query,
                'related_apis': [list(key) for key in self.related_apis],
                'scenario': str(self.scenario),
                'subset': [list(key) for key in self.subset]}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> InstructionPair:
        try:
            return cls(query=d['query'],
                       related_apis=[tuple(key) for key in d['related_apis']],
                       scenario=Scenario(d['scenario']),
                       subset=[tuple(key) for key in d.get('subset', [])])
        except KeyError as err:
            raise DecodeError(f'instruction pair missing field {err}', position=err.args[0]) from err
        except ValueError as err:
            raise DecodeError(f'bad instruction pair: {err}', position='scenario') from err
