"""Scoring of predicted keyphrase lists against gold lists.

Three metrics with deliberately different normalizations:

* full_match_f1 — exact set matches after stemming+lowercasing
* rouge1 — clipped unigram counts on the comma-joined strings, lowercased
  but NOT stemmed (classic behaviour)
* bertscore — greedy max-cosine token matching, no baseline rescaling and
  no importance weighting (reported as "bertscore-greedy")

plus the relative performance growth of an ordering strategy against the
No-Sort baseline, and per-fold aggregation.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from kpgen import textproc
from kpgen.errors import DataError, UsageError
from kpgen.ordering import Strategy

FULLMATCH = "fullmatch"
ROUGE1 = "rouge1"
BERTSCORE = "bertscore"
METRIC_NAMES = (FULLMATCH, ROUGE1, BERTSCORE)

JOIN_SEPARATOR = ", "


@dataclass(frozen=True, slots=True)
class MetricReport:
    precision: float
    recall: float
    f1: float
    metric_name: str
    k: int | None = None


@dataclass(frozen=True, slots=True)
class GrowthReport:
    strategy: Strategy
    r_strategy: float
    r_nosort: float
    growth: float


@dataclass(frozen=True, slots=True)
class FoldAggregate:
    per_fold: tuple[MetricReport, ...]
    mean: MetricReport


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


def _report(p, r, name, k=None):
    return MetricReport(precision=p, recall=r, f1=_f1(p, r), metric_name=name, k=k)


def full_match_f1(gold: list[str], pred: list[str], k: int | None = None) -> MetricReport:
    """Exact matches between the normalized, deduplicated phrase sets."""
    gold_set = {n for n in (textproc.normalize_phrase(g) for g in gold) if n}
    pred_set = {n for n in (textproc.normalize_phrase(p) for p in pred) if n}
    matches = len(gold_set & pred_set)
    p = matches / len(pred_set) if pred_set else 0.0
    r = matches / len(gold_set) if gold_set else 0.0
    return _report(p, r, FULLMATCH, k)


def _unigrams(phrases: list[str]) -> Counter:
    joined = JOIN_SEPARATOR.join(phrases)
    return Counter(t.surface.lower() for t in textproc.tokenize(joined) if not t.is_punct)


def rouge1(gold: list[str], pred: list[str], k: int | None = None) -> MetricReport:
    """Clipped unigram overlap on the comma-joined keyphrase strings."""
    gold_counts = _unigrams(gold)
    pred_counts = _unigrams(pred)
    match = sum(min(c, pred_counts[u]) for u, c in gold_counts.items())
    n_pred = sum(pred_counts.values())
    n_gold = sum(gold_counts.values())
    p = match / n_pred if n_pred else 0.0
    r = match / n_gold if n_gold else 0.0
    return _report(p, r, ROUGE1, k)


def _cosine(a, b) -> float:
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return dot / (na * nb)


def bertscore(
    gold_tokens: list[tuple[str, list[float]]],
    pred_tokens: list[tuple[str, list[float]]],
    k: int | None = None,
) -> MetricReport:
    """Greedy max-cosine matching between token embedding lists.

    Recall averages over gold tokens, precision over predicted tokens.
    """
    vectors = [v for _, v in gold_tokens] + [v for _, v in pred_tokens]
    dims = {len(v) for v in vectors}
    if len(dims) > 1:
        raise DataError(f"mixed embedding dimensions: {sorted(dims)}")
    for _, v in gold_tokens + pred_tokens:
        if not any(x != 0.0 for x in v):
            raise DataError("zero embedding vector")
    if not gold_tokens or not pred_tokens:
        return _report(0.0, 0.0, BERTSCORE, k)
    r = sum(max(_cosine(g, p) for _, p in pred_tokens) for _, g in gold_tokens) / len(gold_tokens)
    p = sum(max(_cosine(p, g) for _, g in gold_tokens) for _, p in pred_tokens) / len(pred_tokens)
    return _report(p, r, BERTSCORE, k)


def performance_growth(r_strategy: float, r_nosort: float, strategy: Strategy) -> GrowthReport:
    """Relative change of a strategy's score versus the No-Sort baseline."""
    if strategy is Strategy.NO_SORT:
        raise UsageError("growth is measured against NoSort, not for it")
    if r_nosort == 0:
        raise UsageError("growth is undefined when the NoSort score is 0")
    return GrowthReport(
        strategy=strategy,
        r_strategy=r_strategy,
        r_nosort=r_nosort,
        growth=(r_strategy - r_nosort) / r_nosort,
    )


def aggregate_folds(reports: list[MetricReport]) -> FoldAggregate:
    """Componentwise arithmetic mean of per-fold reports."""
    if not reports:
        raise UsageError("no reports to aggregate")
    names = {r.metric_name for r in reports}
    ks = {r.k for r in reports}
    if len(names) > 1 or len(ks) > 1:
        raise UsageError(f"cannot aggregate mixed reports: {sorted(names)} at k={sorted(ks, key=str)}")
    n = len(reports)
    mean = MetricReport(
        precision=sum(r.precision for r in reports) / n,
        recall=sum(r.recall for r in reports) / n,
        f1=sum(r.f1 for r in reports) / n,
        metric_name=reports[0].metric_name,
        k=reports[0].k,
    )
    return FoldAggregate(per_fold=tuple(reports), mean=mean)
