"""
=================
RETRIEVAL METRICS
=================

NDCG@k with binary gains and `log2(position + 1)` discount, and the per-scenario evaluation loop.
"""


from __future__ import annotations

from collections import defaultdict
from collections.abc import Collection, Iterable, Sequence
from dataclasses import dataclass
import math
from typing import Any, TYPE_CHECKING

from loguru import logger

from .errors import EmptyRelevantSet
from .scoring import Scorer, retrieve

if TYPE_CHECKING:
    from toolforge.core.datagen.instruction import InstructionPair
    from toolforge.core.util.misc import ApiKey
    from .index import Index


def dcg(gains: Iterable[float]) -> float:
    return sum(gain / math.log2(position + 1) for position, gain in enumerate(gains, start=1))


def ndcg_at_k(ranking: Sequence[ApiKey], relevant: Collection[ApiKey], k: int) -> float:
    """Normalized discounted cumulative gain of ranking at cutoff k."""
    if not relevant:
        raise EmptyRelevantSet('*** NDCG NEEDS AT LEAST ONE RELEVANT ITEM ***')
    if k < 1:
        raise ValueError(f'*** k MUST BE POSITIVE, GOT {k} ***')

    seen: set[ApiKey] = set()
    gains: list[float] = []
    for key in ranking[:k]:
        gains.append(1.0 if key in relevant and key not in seen else 0.0)
        seen.add(key)

    return dcg(gains) / dcg([1.0] * min(len(relevant), k))


@dataclass(frozen=True)
class RetrievalScore:
    scenario: str
    scorer: Scorer
    k: int
    ndcg: float
    n_queries: int

    def to_dict(self) -> dict[str, Any]:
        return {'scenario': self.scenario, 'scorer': str(self.scorer), 'k': self.k,
                'ndcg': self.ndcg, 'n_queries': self.n_queries}


def evaluate_retrieval(pairs: Iterable[InstructionPair], index: Index, ks: Sequence[int] = (1, 5),
                       scorers: Sequence[Scorer] = (Scorer.BM25,)) -> list[RetrievalScore]:
    """Mean NDCG@k per (scenario, scorer, k) over instruction pairs, in the order scenarios appear."""
    by_scenario: dict[str, list[InstructionPair]] = defaultdict(list)
    for pair in pairs:
        by_scenario[str(pair.scenario)].append(pair)

    scores: list[RetrievalScore] = []
    for scenario, scenario_pairs in by_scenario.items():
        for scorer in scorers:
            rankings: list[list[ApiKey]] = [[key for key, _ in retrieve(p.query, index, k=max(ks), scorer=scorer)]
                                            for p in scenario_pairs]
            for k in ks:
                values: list[float] = [ndcg_at_k(ranking, set(p.related_apis), k)
                                       for ranking, p in zip(rankings, scenario_pairs)]
                scores.append(RetrievalScore(scenario=scenario, scorer=scorer, k=k,
                                             ndcg=sum(values) / len(values), n_queries=len(values)))

        logger.info(f'{scenario}: evaluated retrieval over {len(scenario_pairs)} queries')

    return scores
