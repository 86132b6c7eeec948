"""
=====================
API RETRIEVAL SCORING
=====================

Two scorers rank an index against an instruction:

- `bm25`: Okapi BM25 with the index's `k1`/`b`, IDF floored at zero so scores are never negative
- `embedding`: cosine similarity between the instruction's and the API documents' vectors
"""


from __future__ import annotations

from collections import Counter
from enum import StrEnum, auto
import math
from typing import TYPE_CHECKING

from .errors import VectorsMissing
from .index import tokenize

if TYPE_CHECKING:
    from collections.abc import Sequence
    from toolforge.core.util.misc import ApiKey
    from .index import ApiRecord, Index


class Scorer(StrEnum):
    BM25: str = auto()
    EMBEDDING: str = auto()


def idf(term: str, index: Index) -> float:
    n: int = index.doc_freq.get(term, 0)
    return max(0.0, math.log((index.n_docs - n + 0.5) / (n + 0.5)))


def bm25_score(query: str, record: ApiRecord, index: Index) -> float:
    """Okapi BM25 score of record for query."""
    tf: Counter[str] = index.term_freqs(record.key)
    length_norm: float = index.params.k1 * (1 - index.params.b
                                            + index.params.b * index.doc_len(record.key) / (index.avg_doc_len or 1.0))

    score: float = 0.0
    for term in tokenize(query):
        if (f := tf.get(term, 0)) == 0:
            continue
        score += idf(term, index) * f * (index.params.k1 + 1) / (f + length_norm)

    return score


def cosine_similarity(u: Sequence[float], v: Sequence[float]) -> float:
    norm_u: float = math.sqrt(sum(x * x for x in u))
    norm_v: float = math.sqrt(sum(x * x for x in v))
    if not (norm_u and norm_v):
        return 0.0
    return sum(x * y for x, y in zip(u, v)) / (norm_u * norm_v)


def retrieve(query: str, index: Index, k: int, scorer: Scorer = Scorer.BM25) -> list[tuple[ApiKey, float]]:
    """Return the top-k (key, score) pairs, score descending then key ascending."""
    if k < 1:
        raise ValueError(f'*** k MUST BE POSITIVE, GOT {k} ***')

    match scorer:
        case Scorer.BM25:
            scored: list[tuple[ApiKey, float]] = [(r.key, bm25_score(query, r, index)) for r in index.records]

        case Scorer.EMBEDDING:
            if not index.has_vectors or index.embedder is None:
                raise VectorsMissing('*** INDEX HAS NO EMBEDDING VECTORS; RUN embed_index(...) FIRST ***')
            query_vector: list[float] = index.embedder.embed(query)
            scored: list[tuple[ApiKey, float]] = [(r.key, cosine_similarity(query_vector, r.vector))
                                                  for r in index.records]

        case _:
            raise ValueError(f'*** UNKNOWN SCORER {scorer!r} ***')

    return sorted(scored, key=lambda pair: (-pair[1], pair[0]))[:k]


def retrieved_api_subset(query: str, index: Index, k: int, scorer: Scorer = Scorer.BM25) -> list[ApiKey]:
    """Top-k retrieved API keys, to stand in for the ground-truth API subset of an episode."""
    return [key for key, _ in retrieve(query, index, k=k, scorer=scorer)]
