"""Five baseline keyphrase rankers over shared candidate machinery."""

from kpgen.extractors.base import (
    DfTable,
    RankedPhrase,
    build_df,
    doc_candidates,
    rank_order,
    tfidf_rank,
    top_k,
)
from kpgen.extractors.embedding import (
    CommandProvider,
    EmbeddingProvider,
    StubProvider,
    embed_rank,
    serve_request,
)
from kpgen.extractors.kea import KeaModel, kea_rank, kea_train
from kpgen.extractors.topicrank import topicrank
from kpgen.extractors.yake import yake

__all__ = [
    "DfTable",
    "RankedPhrase",
    "build_df",
    "doc_candidates",
    "rank_order",
    "tfidf_rank",
    "top_k",
    "CommandProvider",
    "EmbeddingProvider",
    "StubProvider",
    "embed_rank",
    "serve_request",
    "KeaModel",
    "kea_rank",
    "kea_train",
    "topicrank",
    "yake",
]
