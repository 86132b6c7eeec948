"""
======
JUDGES
======

A judge extracts `PathFacts` from a solution path; the rule tree then decides the label.

- `RuleBasedJudge` derives facts from ground truth (relevant/available APIs, expected answer) and is deterministic
- `LMJudge` asks an LM for the same facts, voting with a different seed each time
"""


from __future__ import annotations

from abc import ABC, abstractmethod
from collections import Counter
from dataclasses import dataclass, field
import json
import re
from typing import Any, TYPE_CHECKING

from loguru import logger

from toolforge.core.util.config import ToolForgeConfig
from toolforge.core.util.errors import ProviderError
from toolforge.core.util.lm.openai import OpenAILM

from ._prompts import PATH_FACTS_PROMPT_TEMPLATE
from .facts import GroundTruth, PathFacts
from .labels import FinishType, Level, Resolution
from .rules import MIN_VOTES, aggregate_votes, judge_pass_rules

if TYPE_CHECKING:
    from toolforge.core.agent.path import SolutionPath
    from toolforge.core.util.lm.base import BaseLM
    from toolforge.core.util.misc import ApiKey
    from .facts import TaskMeta
    from .labels import PassLabel


REFUSAL_MARKERS: tuple[str, ...] = ("sorry", "cannot", "can't", "unable", "not able", "apologize")


def _normalize(text: str) -> str:
    return re.sub(r'\s+', ' ', text).strip().lower()


class BaseJudge(ABC):
    """Path-facts extractor abstract base class."""

    @abstractmethod
    def extract(self, path: SolutionPath, meta: TaskMeta, truth: GroundTruth | None = None,
                vote: int = 0) -> PathFacts:
        """Extract PathFacts of path (`vote` distinguishes repeated votes)."""


@dataclass
class RuleBasedJudge(BaseJudge):
    """Reference judge over ground truth."""

    refusal_markers: tuple[str, ...] = REFUSAL_MARKERS

    def extract(self, path: SolutionPath, meta: TaskMeta, truth: GroundTruth | None = None,
                vote: int = 0) -> PathFacts:
        truth: GroundTruth = truth or GroundTruth()
        answer: str = path.final.final_answer or ''

        called: list[ApiKey] = [s.api_key for s in path.api_steps if s.api_key is not None]
        succeeded: set[ApiKey] = {s.api_key for s in path.api_steps if s.successful_call}
        useful: set[ApiKey] = succeeded & truth.relevant_apis

        if not _normalize(answer):
            resolution: Resolution = Resolution.INDETERMINATE
        elif any(marker in _normalize(answer) for marker in self.refusal_markers):
            resolution: Resolution = Resolution.REFUSAL
        elif not meta.solvable:
            resolution: Resolution = Resolution.HALLUCINATED
        elif truth.expected_answer is not None:
            if _normalize(truth.expected_answer) in _normalize(answer):
                resolution: Resolution = Resolution.FULLY
            else:
                resolution: Resolution = Resolution.PARTIALLY if useful else Resolution.HALLUCINATED
        elif truth.relevant_apis and useful == truth.relevant_apis:
            resolution: Resolution = Resolution.FULLY
        else:
            resolution: Resolution = Resolution.PARTIALLY if useful else Resolution.HALLUCINATED

        n_errors: int = sum(s.error for s in path.api_steps)

        return PathFacts(
            finish_type=FinishType.GIVE_ANSWER if path.final.is_answer else FinishType.GIVE_UP,
            tried_all_apis=bool(truth.available_apis) and truth.available_apis <= set(called),
            any_useful_info=bool(useful),
            answer_resolves=resolution,
            distinct_apis_called=len(set(called)),
            redundant_calls=redundant_calls(path),
            milestones_hit=sum(m.hit(path) for m in meta.milestones),
            richness=(Level.HIGH if truth.relevant_apis and useful == truth.relevant_apis
                      else Level.MEDIUM if useful else Level.LOW),
            factuality={Resolution.FULLY: Level.HIGH, Resolution.HALLUCINATED: Level.LOW}.get(resolution,
                                                                                              Level.MEDIUM),
            reasoning=(Level.HIGH if n_errors == 0
                       else Level.MEDIUM if 2 * n_errors <= len(path.api_steps) else Level.LOW))


def redundant_calls(path: SolutionPath) -> int:
    """Number of API calls repeating an earlier call with the same parameters."""
    calls: Counter[str] = Counter(f'{s.action.api_name}|{json.dumps(s.action.parameters, sort_keys=True)}'
                                  for s in path.api_steps)
    return sum(n - 1 for n in calls.values())


def _render_steps(path: SolutionPath) -> str:
    return '\n'.join(f'{i}. thought: {s.action.thought}\n   function: {s.action.function_name}\n'
                     f'   arguments: {json.dumps(s.action.arguments, ensure_ascii=False)}\n'
                     f'   observation: {s.observation}'
                     for i, s in enumerate(path.steps, start=1))


@dataclass
class LMJudge(BaseJudge):
    """LM as path-facts extractor."""

    lm: BaseLM = field(default_factory=OpenAILM.from_defaults,
                       init=True,
                       repr=True,
                       hash=None,
                       compare=True,
                       metadata=None,
                       kw_only=False)

    def extract(self, path: SolutionPath, meta: TaskMeta, truth: GroundTruth | None = None,
                vote: int = 0) -> PathFacts:
        truth: GroundTruth = truth or GroundTruth()
        prompt: str = PATH_FACTS_PROMPT_TEMPLATE.format(
            instruction=path.instruction,
            available_apis=', '.join(f'{t}/{a}' for t, a in sorted(truth.available_apis)) or '(unknown)',
            steps=_render_steps(path) or '(no step)',
            finish_type=path.final.return_type,
            final_answer=path.final.final_answer or '',
            solvable=meta.solvable,
            milestones=', '.join(m.name for m in meta.milestones) or '(none)')

        answer: dict[str, Any] = self.lm.get_response(prompt=prompt, json_format=True,
                                                      seed=ToolForgeConfig.DEFAULT_SEED + vote)
        try:
            return PathFacts(finish_type=FinishType.GIVE_ANSWER if path.final.is_answer else FinishType.GIVE_UP,
                             tried_all_apis=bool(answer['tried_all_apis']),
                             any_useful_info=bool(answer['any_useful_info']),
                             answer_resolves=Resolution(str(answer['answer_resolves']).lower()),
                             distinct_apis_called=len({s.api_key for s in path.api_steps if s.api_key}),
                             redundant_calls=redundant_calls(path),
                             milestones_hit=min(max(int(answer.get('milestones_hit', 0)), 0), len(meta.milestones)),
                             richness=Level[str(answer.get('richness', 'MEDIUM')).upper()],
                             factuality=Level[str(answer.get('factuality', 'MEDIUM')).upper()],
                             reasoning=Level[str(answer.get('reasoning', 'MEDIUM')).upper()])
        except (KeyError, ValueError) as err:
            logger.debug(f'unusable judge answer: {answer}')
            raise ProviderError(f'judge returned unusable facts: {err}') from err


def judge_votes(judge: BaseJudge, path: SolutionPath, meta: TaskMeta, truth: GroundTruth | None = None,
                n_votes: int = MIN_VOTES) -> list[PassLabel]:
    """Pass labels of `n_votes` independent judgments."""
    return [judge_pass_rules(judge.extract(path, meta, truth, vote=vote), meta) for vote in range(n_votes)]


def label_path(judge: BaseJudge, path: SolutionPath, meta: TaskMeta, truth: GroundTruth | None = None,
               n_votes: int = MIN_VOTES) -> tuple[PassLabel, list[PassLabel]]:
    """Majority-voted pass label of path, with its votes."""
    votes: list[PassLabel] = judge_votes(judge, path, meta, truth, n_votes=n_votes)
    return aggregate_votes(votes), votes

