"""
==============
TOOLEVAL RULES
==============

Solvability-aware pass labeling, majority voting, pairwise comparison and the two headline rates.

Pass-rule tree (solvable tasks):

- gave up: Pass iff every API was tried and none returned useful information, else Fail
- answered:
    - answer fully resolves the instruction: Pass
    - resolution undeterminable: Unsure
    - unresolved (partial, hallucinated) or refusal:
      Pass if every API was tried without useful information; Fail if useful information was returned

Pass-rule tree (unsolvable tasks):

- gave up: Pass
- answered: Pass if the answer fully resolves or refuses; Fail if it hallucinates a positive answer

Fact combinations the tree leaves open are labeled Fail:
an unresolved answer with no useful information and untried APIs (solvable),
and a partial answer (unsolvable). An indeterminate answer to an unsolvable task is Unsure.
"""


from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from fractions import Fraction
from typing import Any, TYPE_CHECKING

from .errors import EmptyInput, InconsistentFacts, TooFewVotes, UnsureOperand
from .labels import Criterion, FinishType, PassLabel, Preference, PreferenceValue, Resolution

if TYPE_CHECKING:
    from toolforge.core.agent.path import SolutionPath
    from .facts import PathFacts, TaskMeta

    type ScoredPath = tuple[SolutionPath, PathFacts, PassLabel]


MIN_VOTES: int = 4

DEFAULT_CRITERIA: tuple[Criterion, ...] = (Criterion.INFORMATION_RICHNESS,
                                           Criterion.FACTUALITY,
                                           Criterion.REASONING,
                                           Criterion.MILESTONE,
                                           Criterion.EXPLORATION,
                                           Criterion.COST)


def check_facts(facts: PathFacts, meta: TaskMeta):
    """Raise `InconsistentFacts` when facts count more milestones than the task has."""
    if not 0 <= facts.milestones_hit <= len(meta.milestones):
        raise InconsistentFacts(f'*** {facts.milestones_hit} MILESTONES HIT OF {len(meta.milestones)} ***')


def judge_pass_rules(facts: PathFacts, meta: TaskMeta) -> PassLabel:
    """Pass label of a solution path from its facts."""
    check_facts(facts, meta)

    unresolved_or_refusal: bool = facts.answer_resolves in (Resolution.PARTIALLY,
                                                            Resolution.HALLUCINATED,
                                                            Resolution.REFUSAL)
    if meta.solvable:
        if facts.finish_type == FinishType.GIVE_UP:
            return PassLabel.PASS if facts.tried_all_apis and not facts.any_useful_info else PassLabel.FAIL

        if facts.answer_resolves == Resolution.FULLY:
            return PassLabel.PASS
        if facts.answer_resolves == Resolution.INDETERMINATE:
            return PassLabel.UNSURE
        if unresolved_or_refusal and not facts.any_useful_info and facts.tried_all_apis:
            return PassLabel.PASS
        return PassLabel.FAIL

    if facts.finish_type == FinishType.GIVE_UP:
        return PassLabel.PASS

    match facts.answer_resolves:
        case Resolution.FULLY | Resolution.REFUSAL:
            return PassLabel.PASS
        case Resolution.INDETERMINATE:
            return PassLabel.UNSURE
        case _:
            return PassLabel.FAIL


def aggregate_votes(labels: Sequence[PassLabel]) -> PassLabel:
    """Strict-majority label of at least 4 votes; Unsure without a strict majority."""
    if len(labels) < MIN_VOTES:
        raise TooFewVotes(f'*** NEED AT LEAST {MIN_VOTES} VOTES, GOT {len(labels)} ***')

    label, count = Counter(labels).most_common(1)[0]
    return label if 2 * count > len(labels) else PassLabel.UNSURE


def _criterion_value(criterion: Criterion, facts: PathFacts) -> int:
    match criterion:
        case Criterion.INFORMATION_RICHNESS:
            return int(facts.richness)
        case Criterion.FACTUALITY:
            return int(facts.factuality)
        case Criterion.REASONING:
            return int(facts.reasoning)
        case Criterion.MILESTONE:
            return facts.milestones_hit
        case Criterion.EXPLORATION:
            return facts.distinct_apis_called
        case Criterion.COST:
            return -facts.redundant_calls
        case _:
            raise ValueError(f'*** {criterion} IS NOT A COMPARISON CRITERION ***')


def compare_paths(a: ScoredPath, b: ScoredPath, criteria: Sequence[Criterion] = DEFAULT_CRITERIA,
                  meta: TaskMeta | None = None) -> Preference:
    """Preference of path `a` over path `b`: pass first, then the criteria in order, first strict difference.

    With `meta`, both paths' facts are first checked against the task they solve.
    """
    _, facts_a, label_a = a
    _, facts_b, label_b = b

    if meta is not None:
        check_facts(facts_a, meta)
        check_facts(facts_b, meta)

    if PassLabel.UNSURE in (label_a, label_b):
        raise UnsureOperand('*** ONLY PATHS LABELED PASS OR FAIL CAN BE COMPARED ***')

    if label_a != label_b:
        return (Preference.win(Criterion.PASS_PRECEDENCE) if label_a == PassLabel.PASS
                else Preference.lose(Criterion.PASS_PRECEDENCE))

    for criterion in criteria:
        value_a, value_b = _criterion_value(criterion, facts_a), _criterion_value(criterion, facts_b)
        if value_a > value_b:
            return Preference.win(criterion)
        if value_a < value_b:
            return Preference.lose(criterion)

    return Preference.tie()


def aggregate_preferences(prefs: Sequence[Preference]) -> Preference:
    """Strict-majority preference of votes (Tie without one), decided by the most frequent majority criterion."""
    if not prefs:
        raise EmptyInput('*** NO PREFERENCE TO AGGREGATE ***')

    value, count = Counter(p.value for p in prefs).most_common(1)[0]
    if 2 * count <= len(prefs) or value == PreferenceValue.TIE:
        return Preference.tie()

    criteria: Counter[Criterion] = Counter(p.deciding_criterion for p in prefs if p.value == value)
    criterion: Criterion = max(criteria, key=lambda c: (criteria[c], -list(Criterion).index(c)))
    return Preference(value, criterion)


def pass_rate(labels: Sequence[PassLabel]) -> Fraction:
    """Fraction of Pass labels (Unsure counts as not passed)."""
    if not labels:
        raise EmptyInput('*** PASS RATE OF NO LABEL ***')
    return Fraction(sum(label == PassLabel.PASS for label in labels), len(labels))


def win_rate(prefs: Sequence[Preference]) -> Fraction:
    """Fraction of wins, ties counting half."""
    if not prefs:
        raise EmptyInput('*** WIN RATE OF NO PREFERENCE ***')
    counts: Counter[PreferenceValue] = Counter(p.value for p in prefs)
    return Fraction(2 * counts[PreferenceValue.WIN] + counts[PreferenceValue.TIE], 2 * len(prefs))


def win_rate_breakdown(prefs: Sequence[Preference]) -> dict[str, Any]:
    """Win/tie/lose ratios alongside the tie-split win rate."""
    if not prefs:
        raise EmptyInput('*** WIN RATE OF NO PREFERENCE ***')
    counts: Counter[PreferenceValue] = Counter(p.value for p in prefs)
    return {'win': Fraction(counts[PreferenceValue.WIN], len(prefs)),
            'tie': Fraction(counts[PreferenceValue.TIE], len(prefs)),
            'lose': Fraction(counts[PreferenceValue.LOSE], len(prefs)),
            'win_rate': win_rate(prefs)}
