import pytest

from toolforge.core.datagen.instruction import InstructionPair, Scenario
from toolforge.core.retrieval import NotEnoughNegatives, TrainingPair, UnknownApiKey, make_training_pairs
from toolforge.core.retrieval.training import export_training_pairs
from toolforge.core.simenv.hub import default_sim_hub
from toolforge.core.util.misc import read_jsonl


PAIR: InstructionPair = InstructionPair(query='Quote and news for AAPL',
                                        related_apis=[('stock_feed', 'quote'), ('stock_feed', 'company_news')],
                                        scenario=Scenario.I1)


def test_one_training_pair_per_relevant_api():
    hub, _ = default_sim_hub()
    training_pairs: list[TrainingPair] = make_training_pairs([PAIR], hub, negatives_per_query=4, seed=3)

    assert [p.positive for p in training_pairs] == PAIR.related_apis
    for p in training_pairs:
        assert len(p.negatives) == 4
        assert not set(p.negatives) & set(PAIR.related_apis)


def test_training_pairs_are_seeded():
    hub, _ = default_sim_hub()
    assert make_training_pairs([PAIR], hub, 3, seed=5) == make_training_pairs([PAIR], hub, 3, seed=5)


def test_unknown_api_is_rejected():
    hub, _ = default_sim_hub()
    pair = InstructionPair(query='q', related_apis=[('nope', 'nothing')], scenario=Scenario.I1)
    with pytest.raises(UnknownApiKey):
        make_training_pairs([pair], hub, 1, seed=0)


def test_too_many_negatives_requested():
    hub, _ = default_sim_hub()
    with pytest.raises(NotEnoughNegatives):
        make_training_pairs([PAIR], hub, hub.n_apis, seed=0)


def test_export(tmp_path):
    hub, _ = default_sim_hub()
    training_pairs: list[TrainingPair] = make_training_pairs([PAIR], hub, 2, seed=1)

    assert export_training_pairs(tmp_path / 'pairs.jsonl', training_pairs) == 2
    assert [TrainingPair.from_dict(d) for d in read_jsonl(tmp_path / 'pairs.jsonl')] == training_pairs
