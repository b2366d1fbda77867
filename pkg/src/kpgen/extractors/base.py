"""Shared extractor types: scored phrases, ranking order, document frequency.

All extractors emit RankedPhrase lists sorted by the one true comparator:
score descending, then first offset ascending, then normalized form. Score
orientation is unified to higher-is-better (YAKE's raw score is negated at
this boundary).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from kpgen import textproc
from kpgen.corpus import Document
from kpgen.errors import UsageError
from kpgen.textproc import CandidatePhrase


@dataclass(frozen=True, slots=True)
class RankedPhrase:
    phrase: CandidatePhrase
    score: float


@dataclass(frozen=True, slots=True)
class DfTable:
    n_docs: int
    df: dict[str, int]

    def lookup(self, normalized: str) -> int:
        """Document frequency with df=1 smoothing for unseen phrases."""
        return self.df.get(normalized, 1)


def rank_order(scored: list[tuple[CandidatePhrase, float]]) -> list[RankedPhrase]:
    """Apply the deterministic comparator shared by every extractor."""
    for phrase, score in scored:
        if not math.isfinite(score):
            raise UsageError(f"non-finite score for {phrase.surface!r}")
    ordered = sorted(
        scored, key=lambda pair: (-pair[1], pair[0].first_offset, pair[0].normalized)
    )
    return [RankedPhrase(phrase=c, score=s) for c, s in ordered]


def doc_candidates(doc: Document, n_max: int = 3) -> list[CandidatePhrase]:
    return textproc.ngram_candidates(textproc.analyze(doc.body), n_max)


def build_df(docs: list[Document]) -> DfTable:
    """Count documents whose 1-3 gram candidate set contains each phrase."""
    if not docs:
        raise UsageError("empty corpus")
    df: dict[str, int] = {}
    for doc in docs:
        for normalized in {c.normalized for c in doc_candidates(doc)}:
            df[normalized] = df.get(normalized, 0) + 1
    return DfTable(n_docs=len(docs), df=df)


def tfidf_rank(doc: Document, df: DfTable) -> list[RankedPhrase]:
    """score = tf * ln(n_docs / df) over 1-3 gram candidates."""
    scored = [
        (c, c.frequency * math.log(df.n_docs / df.lookup(c.normalized)))
        for c in doc_candidates(doc)
    ]
    return rank_order(scored)


def top_k(ranked: list[RankedPhrase], k: int) -> list[str]:
    """First k surface forms after removing duplicates by normalized form."""
    if k < 1:
        raise UsageError("k must be positive")
    out = []
    seen = set()
    for rp in ranked:
        key = rp.phrase.normalized
        if key in seen:
            continue
        seen.add(key)
        out.append(rp.phrase.surface)
        if len(out) == k:
            break
    return out
