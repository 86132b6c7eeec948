"""
==========
PATH FACTS
==========

Everything the pass-rule tree and the win comparator consume about one solution path,
plus per-task metadata: solvability and named milestones.
"""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import StrEnum, auto
from typing import Any, TYPE_CHECKING

from .labels import FinishType, Level, Resolution

if TYPE_CHECKING:
    from toolforge.core.agent.path import SolutionPath
    from toolforge.core.util.misc import ApiKey


class MilestoneKind(StrEnum):
    # a successful call of API `key`
    CALLED_API: str = auto()

    # `text` appears in some observation
    OBSERVED: str = auto()

    # `text` appears in the final answer
    ANSWERED: str = auto()


@dataclass(frozen=True)
class Milestone:
    """Named task-specific predicate over a solution path."""

    name: str
    kind: MilestoneKind
    key: ApiKey | None = None
    text: str = ''

    def __post_init__(self):
        if self.kind == MilestoneKind.CALLED_API and self.key is None:
            raise ValueError(f'*** MILESTONE "{self.name}" NEEDS AN API KEY ***')
        if self.kind != MilestoneKind.CALLED_API and not self.text:
            raise ValueError(f'*** MILESTONE "{self.name}" NEEDS A TEXT ***')

    def hit(self, path: SolutionPath) -> bool:
        match self.kind:
            case MilestoneKind.CALLED_API:
                return any(s.successful_call and s.api_key == tuple(self.key) for s in path.steps)
            case MilestoneKind.OBSERVED:
                return any(self.text.lower() in s.observation.lower() for s in path.api_steps if not s.error)
            case MilestoneKind.ANSWERED:
                return self.text.lower() in (path.final.final_answer or '').lower()

    def to_dict(self) -> dict[str, Any]:
        return {'name': self.name, 'kind': str(self.kind),
                'key': None if self.key is None else list(self.key), 'text': self.text}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> Milestone:
        return cls(name=d['name'], kind=MilestoneKind(d['kind']),
                   key=None if d.get('key') is None else tuple(d['key']), text=d.get('text', ''))


@dataclass(frozen=True)
class TaskMeta:
    solvable: bool = True
    milestones: tuple[Milestone, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        return {'solvable': self.solvable, 'milestones': [m.to_dict() for m in self.milestones]}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> TaskMeta:
        return cls(solvable=d.get('solvable', True),
                   milestones=tuple(Milestone.from_dict(m) for m in d.get('milestones', [])))


@dataclass(frozen=True)
class GroundTruth:
    """What a reference judge knows about a task."""

    relevant_apis: frozenset[ApiKey] = field(default_factory=frozenset)
    available_apis: frozenset[ApiKey] = field(default_factory=frozenset)
    expected_answer: str | None = None

    def to_dict(self) -> dict[str, Any]:
        return {'relevant_apis': sorted(list(k) for k in self.relevant_apis),
                'available_apis': sorted(list(k) for k in self.available_apis),
                'expected_answer': self.expected_answer}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> GroundTruth:
        return cls(relevant_apis=frozenset(tuple(k) for k in d.get('relevant_apis', [])),
                   available_apis=frozenset(tuple(k) for k in d.get('available_apis', [])),
                   expected_answer=d.get('expected_answer'))


@dataclass(frozen=True)
class PathFacts:
    finish_type: FinishType
    tried_all_apis: bool
    any_useful_info: bool
    answer_resolves: Resolution
    distinct_apis_called: int = 0
    redundant_calls: int = 0
    milestones_hit: int = 0

    # ordinal judge scores for the win comparator
    richness: Level = Level.MEDIUM
    factuality: Level = Level.MEDIUM
    reasoning: Level = Level.MEDIUM

    def __post_init__(self):
        if min(self.distinct_apis_called, self.redundant_calls, self.milestones_hit) < 0:
            raise ValueError('*** PATH-FACT COUNTS MUST BE NON-NEGATIVE ***')

    def to_dict(self) -> dict[str, Any]:
        return {'finish_type': str(self.finish_type), 'tried_all_apis': self.tried_all_apis,
                'any_useful_info': self.any_useful_info, 'answer_resolves': str(self.answer_resolves),
                'distinct_apis_called': self.distinct_apis_called, 'redundant_calls': self.redundant_calls,
                'milestones_hit': self.milestones_hit, 'richness': self.richness.name,
                'factuality': self.factuality.name, 'reasoning': self.reasoning.name}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> PathFacts:
        return cls(finish_type=FinishType(d['finish_type']),
                   tried_all_apis=bool(d['tried_all_apis']),
                   any_useful_info=bool(d['any_useful_info']),
                   answer_resolves=Resolution(d['answer_resolves']),
                   distinct_apis_called=int(d.get('distinct_apis_called', 0)),
                   redundant_calls=int(d.get('redundant_calls', 0)),
                   milestones_hit=int(d.get('milestones_hit', 0)),
                   richness=Level[d.get('richness', 'MEDIUM')],
                   factuality=Level[d.get('factuality', 'MEDIUM')],
                   reasoning=Level[d.get('reasoning', 'MEDIUM')])
