"""Graph-based ranking of topic clusters built from phrase candidates.

Pipeline: stopword-block candidates -> average-linkage agglomerative
clustering on stem-set overlap -> complete graph over clusters weighted by
reciprocal occurrence distances -> PageRank -> each cluster reported
through its earliest-appearing candidate.
"""

from __future__ import annotations

from kpgen import textproc
from kpgen.corpus import Document
from kpgen.errors import UsageError
from kpgen.extractors.base import RankedPhrase, rank_order
from kpgen.textproc import CandidatePhrase

DEFAULT_DAMPING = 0.85
DEFAULT_CLUSTER_THRESHOLD = 0.25
PAGERANK_TOL = 1e-8
PAGERANK_MAX_ITER = 100


def _stem_overlap(a: CandidatePhrase, b: CandidatePhrase) -> float:
    """Jaccard overlap of the stem sets."""
    sa, sb = set(a.stems), set(b.stems)
    return len(sa & sb) / len(sa | sb)


def _cluster(candidates: list[CandidatePhrase], threshold: float) -> list[list[int]]:
    """Average-linkage agglomeration; merge while best similarity >= threshold."""
    n = len(candidates)
    sim = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            sim[i][j] = sim[j][i] = _stem_overlap(candidates[i], candidates[j])
    clusters = [[i] for i in range(n)]
    while len(clusters) > 1:
        best = None
        best_sim = -1.0
        for a in range(len(clusters)):
            for b in range(a + 1, len(clusters)):
                pairs = [(i, j) for i in clusters[a] for j in clusters[b]]
                avg = sum(sim[i][j] for i, j in pairs) / len(pairs)
                if avg > best_sim:
                    best_sim = avg
                    best = (a, b)
        if best is None or best_sim < threshold:
            break
        a, b = best
        clusters[a].extend(clusters[b])
        del clusters[b]
    return clusters


def _pagerank(weights: list[list[float]], damping: float) -> list[float]:
    """Power iteration on the weighted graph until L1 change < tolerance."""
    n = len(weights)
    out_sum = [sum(row) for row in weights]
    scores = [1.0 / n] * n
    for _ in range(PAGERANK_MAX_ITER):
        nxt = []
        for i in range(n):
            rank = 0.0
            for j in range(n):
                if out_sum[j] > 0:
                    rank += weights[j][i] / out_sum[j] * scores[j]
                else:
                    rank += scores[j] / n
            nxt.append((1 - damping) / n + damping * rank)
        if sum(abs(a - b) for a, b in zip(nxt, scores)) < PAGERANK_TOL:
            scores = nxt
            break
        scores = nxt
    return scores


def topicrank(
    doc: Document,
    damping: float = DEFAULT_DAMPING,
    cluster_threshold: float = DEFAULT_CLUSTER_THRESHOLD,
) -> list[RankedPhrase]:
    """Rank topic clusters; one RankedPhrase per cluster."""
    if not 0 < damping < 1:
        raise UsageError("damping must be in (0, 1)")
    candidates = textproc.block_candidates(textproc.analyze(doc.body))
    if not candidates:
        return []
    clusters = _cluster(candidates, cluster_threshold)
    n = len(clusters)
    weights = [[0.0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            w = 0.0
            for i in clusters[a]:
                for j in clusters[b]:
                    for oi in candidates[i].offsets:
                        for oj in candidates[j].offsets:
                            if oi != oj:
                                w += 1.0 / abs(oi - oj)
            weights[a][b] = weights[b][a] = w
    scores = _pagerank(weights, damping)
    scored = []
    for cluster, score in zip(clusters, scores):
        representative = min(cluster, key=lambda i: candidates[i].first_offset)
        scored.append((candidates[representative], score))
    return rank_order(scored)
