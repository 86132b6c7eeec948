"""Evaluation verdict enums and the pairwise preference record."""


from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from enum import IntEnum, StrEnum, auto
from typing import Any


class PassLabel(StrEnum):
    PASS: str = 'pass'
    FAIL: str = 'fail'
    UNSURE: str = 'unsure'


class FinishType(StrEnum):
    GIVE_ANSWER: str = 'give_answer'
    GIVE_UP: str = 'give_up'


class Resolution(StrEnum):
    """How the final answer relates to the instruction."""

    FULLY: str = auto()
    PARTIALLY: str = auto()
    REFUSAL: str = auto()
    HALLUCINATED: str = auto()
    INDETERMINATE: str = auto()


class Level(IntEnum):
    """Three-level ordinal score."""

    LOW = 1
    MEDIUM = 2
    HIGH = 3


class PreferenceValue(StrEnum):
    WIN: str = 'win'
    LOSE: str = 'lose'
    TIE: str = 'tie'


class Criterion(StrEnum):
    PASS_PRECEDENCE: str = auto()
    INFORMATION_RICHNESS: str = auto()
    FACTUALITY: str = auto()
    REASONING: str = auto()
    MILESTONE: str = auto()
    EXPLORATION: str = auto()
    COST: str = auto()


@dataclass(frozen=True)
class Preference:
    """Preference of path `a` over path `b`."""

    value: PreferenceValue
    deciding_criterion: Criterion | None = None

    def __post_init__(self):
        if self.value == PreferenceValue.TIE and self.deciding_criterion is not None:
            raise ValueError('*** A TIE HAS NO DECIDING CRITERION ***')

    @classmethod
    def win(cls, criterion: Criterion) -> Preference:
        return cls(PreferenceValue.WIN, criterion)

    @classmethod
    def lose(cls, criterion: Criterion) -> Preference:
        return cls(PreferenceValue.LOSE, criterion)

    @classmethod
    def tie(cls) -> Preference:
        return cls(PreferenceValue.TIE)

    def mirror(self) -> Preference:
        """Preference of `b` over `a`."""
        match self.value:
            case PreferenceValue.WIN:
                return Preference.lose(self.deciding_criterion)
            case PreferenceValue.LOSE:
                return Preference.win(self.deciding_criterion)
            case _:
                return self

    def to_dict(self) -> dict[str, Any]:
        return {'value': str(self.value),
                'deciding_criterion': None if self.deciding_criterion is None else str(self.deciding_criterion)}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any] | str, /) -> Preference:
        if isinstance(d, str):
            return cls(PreferenceValue(d))
        criterion: str | None = d.get('deciding_criterion')
        return cls(PreferenceValue(d['value']), None if criterion is None else Criterion(criterion))
