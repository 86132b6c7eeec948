"""
==========================
API RETRIEVAL CORPUS INDEX
==========================

One searchable record per API: tool name, tool description, API name, API description and category,
plus optional embedding vector.
Corpus statistics (document frequencies, mean document length) are computed once, at build time.
"""


from __future__ import annotations

from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field, replace
import hashlib
import math
import re
from typing import Protocol, TYPE_CHECKING

from toolforge.core.util.config import ToolForgeConfig

from .errors import EmptyHub

if TYPE_CHECKING:
    from toolforge.core.hub.doc import Hub
    from toolforge.core.util.misc import ApiKey


_TOKEN_PATTERN: re.Pattern = re.compile(r'\w+')


def tokenize(text: str) -> list[str]:
    return _TOKEN_PATTERN.findall(text.lower())


class Embedder(Protocol):
    """Maps text to a fixed-dimension vector."""

    dim: int

    def embed(self, text: str) -> list[float]:
        """Return embedding of text."""


@dataclass(frozen=True)
class HashedBagOfWordsEmbedder:
    """Deterministic feature-hashing embedder (L2-normalised term counts)."""

    dim: int = ToolForgeConfig.EMBEDDING_DIM

    def embed(self, text: str) -> list[float]:
        vector: list[float] = [0.0] * self.dim
        for token in tokenize(text):
            digest: bytes = hashlib.sha1(token.encode('utf-8')).digest()
            vector[int.from_bytes(digest[:4], byteorder='big') % self.dim] += 1.0

        if (norm := math.sqrt(sum(v * v for v in vector))) > 0:
            vector: list[float] = [v / norm for v in vector]
        return vector


@dataclass(frozen=True)
class ApiRecord:
    key: ApiKey
    text: str
    vector: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError(f'*** EMPTY SEARCHABLE TEXT FOR {self.key} ***')


@dataclass(frozen=True)
class Bm25Params:
    k1: float = ToolForgeConfig.BM25_K1
    b: float = ToolForgeConfig.BM25_B


@dataclass
class Index:
    """API corpus with BM25 statistics, and optionally the embedder its vectors came from."""

    records: list[ApiRecord]
    params: Bm25Params = field(default_factory=Bm25Params)
    embedder: Embedder | None = None

    doc_freq: dict[str, int] = field(init=False, repr=False)
    avg_doc_len: float = field(init=False)

    def __post_init__(self):
        self._term_freqs: dict[ApiKey, Counter[str]] = {r.key: Counter(tokenize(r.text)) for r in self.records}
        self._doc_lens: dict[ApiKey, int] = {key: tf.total() for key, tf in self._term_freqs.items()}

        self.doc_freq: dict[str, int] = dict(Counter(term for tf in self._term_freqs.values() for term in tf))
        self.avg_doc_len: float = sum(self._doc_lens.values()) / len(self.records) if self.records else 0.0

        if self.embedder is not None:
            for record in self.records:
                if record.vector is not None and len(record.vector) != self.embedder.dim:
                    raise ValueError(f'*** VECTOR OF {record.key} HAS DIMENSION {len(record.vector)}, '
                                     f'INDEX EXPECTS {self.embedder.dim} ***')

    @property
    def n_docs(self) -> int:
        return len(self.records)

    @property
    def has_vectors(self) -> bool:
        return bool(self.records) and all(r.vector is not None for r in self.records)

    def term_freqs(self, key: ApiKey) -> Counter[str]:
        return self._term_freqs[key]

    def doc_len(self, key: ApiKey) -> int:
        return self._doc_lens[key]

    def record(self, key: ApiKey) -> ApiRecord:
        for r in self.records:
            if r.key == key:
                return r
        raise KeyError(key)


def searchable_text(tool_name: str, tool_description: str, api_name: str, api_description: str,
                    category: str) -> str:
    return '\n'.join(part for part in (tool_name, tool_description, api_name, api_description, category) if part)


def build_index(hub: Hub, params: Bm25Params | None = None) -> Index:
    """Build a BM25-ready index with one record per API of Hub."""
    if not hub.n_apis:
        raise EmptyHub('*** CANNOT INDEX AN EMPTY HUB ***')

    return Index(records=[ApiRecord(key=api.key,
                                    text=searchable_text(tool.tool_name, tool.tool_description,
                                                         api.name, api.description, tool.category))
                          for tool in hub.tools for api in tool.api_list],
                 params=params or Bm25Params())


def build_index_from_texts(texts: Sequence[tuple[ApiKey, str]], params: Bm25Params | None = None) -> Index:
    """Build an index directly from (key, text) pairs."""
    return Index(records=[ApiRecord(key=key, text=text) for key, text in texts], params=params or Bm25Params())


def embed_index(index: Index, embedder: Embedder | None = None) -> Index:
    """Return a copy of Index whose records carry vectors from Embedder."""
    embedder: Embedder = embedder or HashedBagOfWordsEmbedder()
    return Index(records=[replace(r, vector=tuple(embedder.embed(r.text))) for r in index.records],
                 params=index.params, embedder=embedder)
