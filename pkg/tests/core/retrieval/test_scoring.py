from collections import Counter
import math
import random

import pytest

from toolforge.core.hub.doc import Hub
from toolforge.core.retrieval import (ApiRecord, EmptyHub, HashedBagOfWordsEmbedder, Index, Scorer, VectorsMissing,
                                      bm25_score, build_index, build_index_from_texts, embed_index, retrieve,
                                      retrieved_api_subset, tokenize)
from toolforge.core.simenv.hub import default_sim_hub


VOCABULARY: list[str] = ['weather', 'forecast', 'city', 'stock', 'quote', 'news', 'currency', 'convert',
                         'rate', 'random', 'word', 'sentence', 'time', 'zone', 'air', 'pollen']


def _okapi(query: str, doc: str, corpus: list[str], k1: float = 1.2, b: float = 0.75) -> float:
    tokenized: list[list[str]] = [d.lower().split() for d in corpus]
    avg_len: float = sum(map(len, tokenized)) / len(tokenized)
    tf: Counter = Counter(doc.lower().split())

    score: float = 0.0
    for term in query.lower().split():
        if not tf[term]:
            continue
        n: int = sum(term in d for d in tokenized)
        term_idf: float = max(0.0, math.log((len(corpus) - n + 0.5) / (n + 0.5)))
        score += term_idf * tf[term] * (k1 + 1) / (tf[term] + k1 * (1 - b + b * len(doc.split()) / avg_len))
    return score


def test_bm25_agrees_with_reference_formula():
    rng = random.Random(11)

    for _ in range(100):
        corpus: list[str] = [' '.join(rng.choices(VOCABULARY, k=rng.randint(1, 12)))
                             for _ in range(rng.randint(1, 10))]
        index: Index = build_index_from_texts([(('tool', f'api{i}'), text) for i, text in enumerate(corpus)])
        query: str = ' '.join(rng.choices(VOCABULARY, k=rng.randint(1, 4)))

        for i, text in enumerate(corpus):
            record: ApiRecord = index.record(('tool', f'api{i}'))
            assert bm25_score(query, record, index) == pytest.approx(_okapi(query, text, corpus))


def test_bm25_scores_are_non_negative():
    index: Index = build_index_from_texts([(('t', 'a'), 'weather city'), (('t', 'b'), 'weather news'),
                                           (('t', 'c'), 'weather stock')])
    assert all(score >= 0 for _, score in retrieve('weather', index, k=3))


def test_retrieve_orders_by_score_then_key():
    index: Index = build_index_from_texts([(('t', 'b'), 'random word'), (('t', 'a'), 'random word'),
                                           (('t', 'c'), 'stock quote')])
    assert [key for key, _ in retrieve('random word', index, k=3)] == [('t', 'a'), ('t', 'b'), ('t', 'c')]


def test_retrieve_rejects_bad_k():
    index: Index = build_index_from_texts([(('t', 'a'), 'weather')])
    with pytest.raises(ValueError):
        retrieve('weather', index, k=0)


def test_embedding_retrieval():
    hub, _ = default_sim_hub()
    index: Index = build_index(hub)

    with pytest.raises(VectorsMissing):
        retrieve('pollen levels', index, k=1, scorer=Scorer.EMBEDDING)

    embedded: Index = embed_index(index)
    assert embedded.has_vectors
    assert not index.has_vectors
    assert retrieve('pollen levels of a city', embedded, k=1, scorer=Scorer.EMBEDDING)[0][0] == \
        ('air_watch', 'pollen_count')


def test_tokenize():
    assert tokenize('Air-quality INDEX of a_city!') == ['air', 'quality', 'index', 'of', 'a_city']


def test_empty_hub_cannot_be_indexed():
    with pytest.raises(EmptyHub):
        build_index(Hub(tools=[]))


def test_hashed_embeddings_are_unit_vectors():
    embedder = HashedBagOfWordsEmbedder(dim=64)
    vector: list[float] = embedder.embed('pollen levels of a city')

    assert len(vector) == 64
    assert sum(v * v for v in vector) == pytest.approx(1.0)
    assert embedder.embed('') == [0.0] * 64
    assert embedder.embed('pollen levels') == embedder.embed('pollen levels')


def test_retrieved_subset_stands_in_for_ground_truth():
    hub, _ = default_sim_hub()
    subset = retrieved_api_subset('convert currency amount', build_index(hub), k=3)

    assert len(subset) == 3
    assert subset[0] == ('fx_rates', 'convert')
