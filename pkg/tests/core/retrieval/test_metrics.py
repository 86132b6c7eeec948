import math
import random

from hypothesis import given, settings, strategies as st
import pytest

from toolforge.core.datagen.instruction import InstructionPair, Scenario
from toolforge.core.retrieval import (EmptyRelevantSet, RetrievalScore, Scorer, build_index, embed_index,
                                      evaluate_retrieval, ndcg_at_k)
from toolforge.core.simenv.hub import default_sim_hub


def test_ndcg_single_relevant_at_second_position():
    assert ndcg_at_k([('t', 'x'), ('t', 'a')], {('t', 'a')}, k=5) == pytest.approx(1 / math.log2(3))


def test_ndcg_needs_relevant_items():
    with pytest.raises(EmptyRelevantSet):
        ndcg_at_k([('t', 'a')], set(), k=1)


keys = st.lists(st.tuples(st.sampled_from('tuvw'), st.sampled_from('abcdefgh')), min_size=1, max_size=12)


@settings(max_examples=20, deadline=None)
@given(ranking=keys, relevant=keys, k=st.integers(min_value=1, max_value=10))
def test_ndcg_is_within_unit_interval(ranking, relevant, k):
    value: float = ndcg_at_k(ranking, set(relevant), k)
    assert 0.0 <= value <= 1.0 + 1e-12


def test_ndcg_matches_hand_derivation():
    rng = random.Random(5)
    universe = [('t', str(i)) for i in range(10)]

    for _ in range(20):
        ranking = rng.sample(universe, rng.randint(1, 10))
        relevant = set(rng.sample(universe, rng.randint(1, 5)))
        k: int = rng.randint(1, 10)

        dcg: float = 0.0
        for position, key in enumerate(ranking[:k], start=1):
            if key in relevant:
                dcg += 1 / math.log2(position + 1)
        ideal: float = sum(1 / math.log2(position + 1) for position in range(1, min(len(relevant), k) + 1))

        assert abs(ndcg_at_k(ranking, relevant, k) - dcg / ideal) <= 1e-9


def test_ndcg_ideal_ranking_scores_one():
    relevant = [('t', c) for c in 'abc']
    assert ndcg_at_k(relevant + [('u', 'x')], set(relevant), k=5) == pytest.approx(1.0)


def test_swapping_relevant_item_forward_never_decreases_ndcg():
    rng = random.Random(7)
    universe = [('t', str(i)) for i in range(12)]

    for _ in range(1000):
        ranking = rng.sample(universe, len(universe))
        relevant = set(rng.sample(universe, rng.randint(1, 4)))
        k: int = rng.randint(1, len(universe))

        i, j = sorted(rng.sample(range(len(universe)), 2))
        if ranking[j] in relevant and ranking[i] not in relevant:
            swapped = list(ranking)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            assert ndcg_at_k(swapped, relevant, k) >= ndcg_at_k(ranking, relevant, k) - 1e-12


def test_evaluate_retrieval_per_scenario():
    hub, _ = default_sim_hub()
    index = embed_index(build_index(hub))

    pairs: list[InstructionPair] = [
        InstructionPair(query='What is the air quality index in Denver?',
                        related_apis=[('air_watch', 'air_quality')], scenario=Scenario.I1),
        InstructionPair(query='Convert 2000 USD to EUR for my trip.',
                        related_apis=[('fx_rates', 'convert')], scenario=Scenario.I1),
        InstructionPair(query='Latest stock quote and company news for AAPL',
                        related_apis=[('stock_feed', 'quote'), ('stock_feed', 'company_news')],
                        scenario=Scenario.I2),
    ]

    scores: list[RetrievalScore] = evaluate_retrieval(pairs, index, ks=(1, 5), scorers=(Scorer.BM25, Scorer.EMBEDDING))
    assert [(s.scenario, s.scorer, s.k) for s in scores] == [('I1', Scorer.BM25, 1), ('I1', Scorer.BM25, 5),
                                                             ('I1', Scorer.EMBEDDING, 1), ('I1', Scorer.EMBEDDING, 5),
                                                             ('I2', Scorer.BM25, 1), ('I2', Scorer.BM25, 5),
                                                             ('I2', Scorer.EMBEDDING, 1), ('I2', Scorer.EMBEDDING, 5)]
    assert [s.n_queries for s in scores] == [2] * 4 + [1] * 4
    assert all(0.0 <= s.ndcg <= 1.0 for s in scores)

    bm25_i1_at_5: RetrievalScore = scores[1]
    assert bm25_i1_at_5.ndcg == pytest.approx(1.0)
    assert bm25_i1_at_5.to_dict()['scorer'] == 'bm25'
