"""Contrastive training pairs for an external dense-retriever trainer."""


from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from pathlib import Path
import random
from typing import Any, TYPE_CHECKING

from toolforge.core.util.misc import write_jsonl

from .errors import NotEnoughNegatives, UnknownApiKey

if TYPE_CHECKING:
    from toolforge.core.datagen.instruction import InstructionPair
    from toolforge.core.hub.doc import Hub
    from toolforge.core.util.misc import ApiKey


@dataclass(frozen=True)
class TrainingPair:
    query: str
    positive: ApiKey
    negatives: tuple[ApiKey, ...]

    def __post_init__(self):
        if self.positive in self.negatives:
            raise ValueError(f'*** POSITIVE {self.positive} ALSO LISTED AS NEGATIVE ***')

    def to_dict(self) -> dict[str, Any]:
        return {'query': self.query, 'positive': list(self.positive), 'negatives': [list(k) for k in self.negatives]}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any], /) -> TrainingPair:
        return cls(query=d['query'], positive=tuple(d['positive']), negatives=tuple(tuple(k) for k in d['negatives']))


def make_training_pairs(pairs: Iterable[InstructionPair], hub: Hub, negatives_per_query: int,
                        seed: int) -> list[TrainingPair]:
    """One training pair per (instruction, relevant API), negatives drawn from the hub minus the relevant set."""
    rng: random.Random = random.Random(seed)
    all_keys: set[ApiKey] = set(hub.api_keys())

    training_pairs: list[TrainingPair] = []
    for pair in pairs:
        relevant: set[ApiKey] = set(pair.related_apis)
        if unknown := relevant - all_keys:
            raise UnknownApiKey(f'instruction cites unknown APIs {sorted(unknown)}')

        pool: list[ApiKey] = sorted(all_keys - relevant)
        if len(pool) < negatives_per_query:
            raise NotEnoughNegatives(f'only {len(pool)} non-relevant APIs for {negatives_per_query} negatives')

        for positive in pair.related_apis:
            training_pairs.append(TrainingPair(query=pair.query, positive=positive,
                                               negatives=tuple(rng.sample(pool, negatives_per_query))))

    return training_pairs


def export_training_pairs(path: Path | str, training_pairs: Iterable[TrainingPair]) -> int:
    return write_jsonl(path, (p.to_dict() for p in training_pairs))
