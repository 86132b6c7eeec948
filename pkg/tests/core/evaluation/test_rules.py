from fractions import Fraction
import itertools
import random

import pytest

from toolforge.core.evaluation import (Criterion, EmptyInput, FinishType, InconsistentFacts, Level, Milestone,
                                       MilestoneKind, PassLabel, PathFacts, Preference, PreferenceValue, Resolution,
                                       TaskMeta, TooFewVotes, UnsureOperand, aggregate_preferences, aggregate_votes,
                                       compare_paths, judge_pass_rules, pass_rate, win_rate, win_rate_breakdown)


SOLVABLE: TaskMeta = TaskMeta(solvable=True)
UNSOLVABLE: TaskMeta = TaskMeta(solvable=False)

P, F, U = PassLabel.PASS, PassLabel.FAIL, PassLabel.UNSURE
GIVE_UP, ANSWER = FinishType.GIVE_UP, FinishType.GIVE_ANSWER


def _facts(finish_type: FinishType, tried_all: bool = False, useful: bool = False,
           resolves: Resolution = Resolution.INDETERMINATE, **kwargs) -> PathFacts:
    return PathFacts(finish_type=finish_type, tried_all_apis=tried_all, any_useful_info=useful,
                     answer_resolves=resolves, **kwargs)


@pytest.mark.parametrize(('facts', 'meta', 'label'), [
    # solvable, gave up
    (_facts(GIVE_UP, tried_all=True, useful=False), SOLVABLE, P),
    (_facts(GIVE_UP, tried_all=False, useful=False), SOLVABLE, F),
    (_facts(GIVE_UP, tried_all=True, useful=True), SOLVABLE, F),
    # solvable, answered
    (_facts(ANSWER, tried_all=True, useful=False, resolves=Resolution.PARTIALLY), SOLVABLE, P),
    (_facts(ANSWER, tried_all=True, useful=False, resolves=Resolution.REFUSAL), SOLVABLE, P),
    (_facts(ANSWER, useful=True, resolves=Resolution.HALLUCINATED), SOLVABLE, F),
    (_facts(ANSWER, useful=True, resolves=Resolution.FULLY), SOLVABLE, P),
    (_facts(ANSWER, useful=True, resolves=Resolution.INDETERMINATE), SOLVABLE, U),
    # unsolvable
    (_facts(ANSWER, resolves=Resolution.HALLUCINATED), UNSOLVABLE, F),
    (_facts(ANSWER, resolves=Resolution.REFUSAL), UNSOLVABLE, P),
    (_facts(GIVE_UP), UNSOLVABLE, P),
])
def test_pass_rule_tree(facts, meta, label):
    assert judge_pass_rules(facts, meta) == label


def test_pass_rules_are_total():
    for finish, tried, useful, resolves, solvable in itertools.product(FinishType, (True, False), (True, False),
                                                                        Resolution, (True, False)):
        label: PassLabel = judge_pass_rules(_facts(finish, tried, useful, resolves), TaskMeta(solvable=solvable))
        assert label in PassLabel


def test_open_fact_combinations_fail():
    assert judge_pass_rules(_facts(ANSWER, tried_all=False, useful=False, resolves=Resolution.PARTIALLY),
                            SOLVABLE) == F
    assert judge_pass_rules(_facts(ANSWER, resolves=Resolution.PARTIALLY), UNSOLVABLE) == F
    assert judge_pass_rules(_facts(ANSWER, resolves=Resolution.INDETERMINATE), UNSOLVABLE) == U


def test_majority_vote():
    assert aggregate_votes([P, P, P, F]) == P
    assert aggregate_votes([P, P, F, F]) == U
    assert aggregate_votes([F, U, F, F, P]) == F

    with pytest.raises(TooFewVotes):
        aggregate_votes([P, P, P])

    rng = random.Random(0)
    for _ in range(200):
        votes = rng.choices([P, F, U], k=rng.randint(4, 9))
        assert aggregate_votes(votes) == aggregate_votes(rng.sample(votes, len(votes)))

    assert aggregate_votes([F] * 4) == F


def _scored(label: PassLabel, **facts) -> tuple:
    return (None, _facts(ANSWER, **facts), label)


def test_pass_precedence():
    assert compare_paths(_scored(P), _scored(F)) == Preference.win(Criterion.PASS_PRECEDENCE)
    assert compare_paths(_scored(F), _scored(P)) == Preference.lose(Criterion.PASS_PRECEDENCE)


def test_identical_paths_tie():
    assert compare_paths(_scored(P), _scored(P)) == Preference.tie()


def test_first_strict_difference_decides():
    a = _scored(F, milestones_hit=3, distinct_apis_called=1)
    b = _scored(F, milestones_hit=1, distinct_apis_called=4)
    assert compare_paths(a, b) == Preference.win(Criterion.MILESTONE)

    richer = _scored(P, richness=Level.HIGH, milestones_hit=0)
    assert compare_paths(richer, a[:2] + (P,)) == Preference.win(Criterion.INFORMATION_RICHNESS)

    frugal = _scored(P, redundant_calls=0)
    wasteful = _scored(P, redundant_calls=2)
    assert compare_paths(frugal, wasteful) == Preference.win(Criterion.COST)


def test_comparison_is_antisymmetric():
    rng = random.Random(1)
    for _ in range(300):
        a = _scored(rng.choice([P, F]), richness=rng.choice(list(Level)), milestones_hit=rng.randint(0, 2),
                    distinct_apis_called=rng.randint(0, 2), redundant_calls=rng.randint(0, 2))
        b = _scored(rng.choice([P, F]), richness=rng.choice(list(Level)), milestones_hit=rng.randint(0, 2),
                    distinct_apis_called=rng.randint(0, 2), redundant_calls=rng.randint(0, 2))
        assert compare_paths(a, b) == compare_paths(b, a).mirror()


def test_unsure_paths_are_not_compared():
    with pytest.raises(UnsureOperand):
        compare_paths(_scored(U), _scored(P))


def test_milestones_hit_is_bounded_by_the_task():
    one_milestone = TaskMeta(milestones=(Milestone('quoted', MilestoneKind.ANSWERED, text='187'),))
    assert judge_pass_rules(_facts(ANSWER, useful=True, resolves=Resolution.FULLY, milestones_hit=1),
                            one_milestone) == P

    with pytest.raises(InconsistentFacts):
        judge_pass_rules(_facts(ANSWER, useful=True, resolves=Resolution.FULLY, milestones_hit=2), one_milestone)

    a = _scored(F, milestones_hit=3, distinct_apis_called=1)
    b = _scored(F, milestones_hit=1, distinct_apis_called=4)
    assert compare_paths(a, b) == Preference.win(Criterion.MILESTONE)
    with pytest.raises(InconsistentFacts):
        compare_paths(a, b, meta=one_milestone)


def test_aggregate_preferences():
    win_richness, lose_cost = Preference.win(Criterion.INFORMATION_RICHNESS), Preference.lose(Criterion.COST)
    assert aggregate_preferences([win_richness, win_richness, lose_cost]) == win_richness
    assert aggregate_preferences([win_richness, lose_cost]) == Preference.tie()
    assert aggregate_preferences([Preference.tie()] * 3 + [win_richness]) == Preference.tie()

    with pytest.raises(EmptyInput):
        aggregate_preferences([])


def test_pass_rate():
    assert pass_rate([P, F, P, U]) == Fraction(1, 2)
    assert pass_rate([P] * 3) == 1
    assert pass_rate([U] * 3) == 0

    with pytest.raises(EmptyInput):
        pass_rate([])


WIN, TIE, LOSE = Preference.win(Criterion.FACTUALITY), Preference.tie(), Preference.lose(Criterion.FACTUALITY)


def test_win_rate():
    assert win_rate([WIN, TIE, LOSE, WIN]) == Fraction(5, 8)
    assert float(win_rate([WIN, TIE, LOSE, WIN])) == 0.625
    assert win_rate([TIE] * 5) == Fraction(1, 2)
    assert win_rate([LOSE] * 2) == 0

    with pytest.raises(EmptyInput):
        win_rate([])


def test_win_rate_of_mirrored_preferences_sums_to_one():
    rng = random.Random(2)
    for _ in range(1000):
        prefs: list[Preference] = rng.choices([WIN, TIE, LOSE], k=rng.randint(1, 20))
        assert win_rate(prefs) + win_rate([p.mirror() for p in prefs]) == 1


def test_win_rate_breakdown():
    breakdown: dict = win_rate_breakdown([WIN, TIE, LOSE, WIN])
    assert breakdown == {'win': Fraction(1, 2), 'tie': Fraction(1, 4), 'lose': Fraction(1, 4),
                         'win_rate': Fraction(5, 8)}


def test_preference_records():
    with pytest.raises(ValueError):
        Preference(PreferenceValue.TIE, Criterion.COST)

    assert Preference.from_dict(WIN.to_dict()) == WIN
    assert Preference.from_dict('tie') == TIE
