"""Supervised candidate classification with naive Bayes.

Two features per candidate: its tf-idf score and its relative first
occurrence (first offset / body length). Features are discretized into
equal-width bins learned from the training range; bin conditionals are
Laplace-smoothed so unseen bins never zero out a posterior. A candidate is
a positive example iff its normalized form matches a normalized gold
keyphrase of its document.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from kpgen import textproc
from kpgen.corpus import Document
from kpgen.errors import TrainingError, UsageError
from kpgen.extractors.base import DfTable, RankedPhrase, doc_candidates, rank_order

DEFAULT_N_BINS = 5
N_FEATURES = 2
_CLASSES = (0, 1)  # 0 = not-keyphrase, 1 = keyphrase


@dataclass(frozen=True, slots=True)
class FeatureBinning:
    lo: float
    width: float
    n_bins: int

    def bin(self, x: float) -> int:
        if self.width <= 0:
            return 0
        b = int((x - self.lo) / self.width)
        return min(max(b, 0), self.n_bins - 1)


@dataclass(frozen=True, slots=True)
class KeaModel:
    priors: tuple[float, float]
    binnings: tuple[FeatureBinning, ...]
    # conditionals[class][feature][bin] = P(bin | class), Laplace-smoothed
    conditionals: tuple[tuple[tuple[float, ...], ...], ...]

    def posterior(self, features: tuple[float, ...]) -> float:
        joint = []
        for cls in _CLASSES:
            p = self.priors[cls]
            for f_idx, x in enumerate(features):
                b = self.binnings[f_idx].bin(x)
                p *= self.conditionals[cls][f_idx][b]
            joint.append(p)
        total = joint[0] + joint[1]
        return joint[1] / total if total > 0 else 0.0


def _features(doc: Document, df: DfTable) -> list[tuple]:
    """(candidate, (tfidf, relative first offset)) pairs for one document."""
    out = []
    length = len(doc.body)
    for cand in doc_candidates(doc):
        tfidf = cand.frequency * math.log(df.n_docs / df.lookup(cand.normalized))
        out.append((cand, (tfidf, cand.first_offset / length)))
    return out


def kea_train(train_docs: list[Document], df: DfTable, n_bins: int = DEFAULT_N_BINS) -> KeaModel:
    """Fit priors, bin boundaries and bin conditionals on labeled candidates."""
    if n_bins < 1:
        raise UsageError("n_bins must be >= 1")
    if not train_docs:
        raise TrainingError("no training documents")
    examples = []
    for doc in train_docs:
        gold = {textproc.normalize_phrase(k) for k in doc.gold_keyphrases}
        for cand, feats in _features(doc, df):
            examples.append((feats, 1 if cand.normalized in gold else 0))
    n_pos = sum(label for _, label in examples)
    if n_pos == 0:
        raise TrainingError("training corpus contains no positive candidate examples")

    binnings = []
    for f_idx in range(N_FEATURES):
        values = [feats[f_idx] for feats, _ in examples]
        lo, hi = min(values), max(values)
        binnings.append(FeatureBinning(lo=lo, width=(hi - lo) / n_bins, n_bins=n_bins))

    counts = [[[0] * n_bins for _ in range(N_FEATURES)] for _ in _CLASSES]
    class_totals = [0, 0]
    for feats, label in examples:
        class_totals[label] += 1
        for f_idx, x in enumerate(feats):
            counts[label][f_idx][binnings[f_idx].bin(x)] += 1

    conditionals = tuple(
        tuple(
            tuple(
                (counts[cls][f_idx][b] + 1) / (class_totals[cls] + n_bins)
                for b in range(n_bins)
            )
            for f_idx in range(N_FEATURES)
        )
        for cls in _CLASSES
    )
    n = len(examples)
    return KeaModel(
        priors=(class_totals[0] / n, class_totals[1] / n),
        binnings=tuple(binnings),
        conditionals=conditionals,
    )


def kea_rank(model: KeaModel, doc: Document, df: DfTable) -> list[RankedPhrase]:
    """Score candidates by posterior probability of the keyphrase class."""
    scored = [(cand, model.posterior(feats)) for cand, feats in _features(doc, df)]
    return rank_order(scored)
