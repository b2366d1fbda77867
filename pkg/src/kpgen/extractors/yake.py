"""Statistical single-document keyword scoring from local term features.

Five per-term features are combined into a term score where LOWER is
better, then multiplied over each candidate phrase:

    casing     max(upper count, acronym count) / (1 + ln tf)
    position   ln(ln(3 + median sentence index of the occurrences))
    frequency  tf / (mean tf + std tf) over content terms
    relatedness 1 + (DL + DR) * tf / max tf, where DL (DR) is the ratio of
               distinct left (right) window neighbours to total neighbours
    spread     fraction of sentences containing the term

    S(t) = relatedness * position / (casing + frequency/relatedness
                                     + spread/relatedness)
    S(kw) = prod S(t) / (tf(kw) * (1 + sum S(t)))

The exported ranking negates S(kw) so that higher is better, matching the
shared comparator. Terms are merged by stem; the co-occurrence stream runs
over word tokens (stopwords included) within each sentence.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field

from kpgen import textproc
from kpgen.corpus import Document
from kpgen.errors import UsageError
from kpgen.extractors.base import RankedPhrase, rank_order

DEFAULT_WINDOW = 1


@dataclass
class _TermStats:
    tf: int = 0
    upper: int = 0
    acronym: int = 0
    sentences: set[int] = field(default_factory=set)
    sentence_indices: list[int] = field(default_factory=list)
    left: list[str] = field(default_factory=list)
    right: list[str] = field(default_factory=list)
    is_stopword: bool = False


def _term_scores(tokens, window: int) -> dict[str, float]:
    sentences: dict[int, list] = {}
    for tok in tokens:
        if not tok.is_punct:
            sentences.setdefault(tok.sentence_idx, []).append(tok)
    n_sentences = max(len(sentences), 1)

    stats: dict[str, _TermStats] = {}
    for sent_idx, stream in sorted(sentences.items()):
        for pos, tok in enumerate(stream):
            st = stats.setdefault(tok.stem, _TermStats())
            st.tf += 1
            st.is_stopword = st.is_stopword or tok.is_stopword
            st.sentences.add(sent_idx)
            st.sentence_indices.append(sent_idx)
            if len(tok.surface) > 1 and tok.surface.isupper():
                st.acronym += 1
            elif pos > 0 and tok.surface[0].isupper():
                st.upper += 1
            st.left.extend(t.stem for t in stream[max(0, pos - window) : pos])
            st.right.extend(t.stem for t in stream[pos + 1 : pos + 1 + window])

    if not stats:
        return {}
    content_tfs = [s.tf for s in stats.values() if not s.is_stopword] or [
        s.tf for s in stats.values()
    ]
    mean_tf = statistics.fmean(content_tfs)
    std_tf = statistics.pstdev(content_tfs)
    max_tf = max(s.tf for s in stats.values())

    scores = {}
    for term, st in stats.items():
        casing = max(st.upper, st.acronym) / (1.0 + math.log(st.tf))
        position = math.log(math.log(3.0 + statistics.median(st.sentence_indices)))
        frequency = st.tf / (mean_tf + std_tf)
        dl = len(set(st.left)) / len(st.left) if st.left else 0.0
        dr = len(set(st.right)) / len(st.right) if st.right else 0.0
        relatedness = 1.0 + (dl + dr) * st.tf / max_tf
        spread = len(st.sentences) / n_sentences
        scores[term] = (relatedness * position) / (
            casing + frequency / relatedness + spread / relatedness
        )
    return scores


def yake(doc: Document, window: int = DEFAULT_WINDOW) -> list[RankedPhrase]:
    """Rank 1-3 gram candidates, lowest combined term score first."""
    if window < 1:
        raise UsageError("window must be >= 1")
    tokens = textproc.analyze(doc.body)
    term_scores = _term_scores(tokens, window)
    scored = []
    for cand in textproc.ngram_candidates(tokens, 3):
        product = 1.0
        total = 0.0
        for term in cand.stems:
            s = term_scores[term]
            product *= s
            total += s
        phrase_score = product / (cand.frequency * (1.0 + total))
        scored.append((cand, -phrase_score))
    return rank_order(scored)
