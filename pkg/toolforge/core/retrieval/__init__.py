"""API retrieval: BM25 and embedding scorers, NDCG evaluation, contrastive training pairs."""


from .errors import EmptyHub, EmptyRelevantSet, NotEnoughNegatives, UnknownApiKey, VectorsMissing
from .index import (ApiRecord, Bm25Params, Embedder, HashedBagOfWordsEmbedder, Index,
                    build_index, build_index_from_texts, embed_index, tokenize)
from .metrics import RetrievalScore, evaluate_retrieval, ndcg_at_k
from .scoring import Scorer, bm25_score, cosine_similarity, retrieve, retrieved_api_subset
from .training import TrainingPair, export_training_pairs, make_training_pairs
