"""Document model, JSONL ingestion, dataset statistics and fold assignment.

Corpus format: one JSON record per line, UTF-8, fields `id` (string),
`title` (optional string), `text` (string), `keyphrases` (array of
strings). When a title is present it is prepended to the text with a
single space to form the document body.
"""

from __future__ import annotations

import json
import logging
import random
import statistics
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from kpgen import textproc
from kpgen.errors import (
    IngestionError,
    ParseError,
    UndefinedStatisticError,
    UsageError,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Document:
    """One text with its author keyphrase list, in author order."""

    id: str
    title: str | None
    body: str
    gold_keyphrases: tuple[str, ...]

    def __post_init__(self):
        if not self.id:
            raise IngestionError("document id must be non-empty")
        if not self.body:
            raise IngestionError(f"document {self.id!r}: body must be non-empty")
        if any(not k for k in self.gold_keyphrases):
            raise IngestionError(f"document {self.id!r}: empty gold keyphrase")

    @property
    def text(self) -> str:
        """The body without the prepended title."""
        if self.title is None:
            return self.body
        return self.body[len(self.title) + 1 :]


@dataclass(frozen=True, slots=True)
class DatasetStats:
    size: int
    avg_symbols: float
    std_symbols: float
    avg_tokens: float
    std_tokens: float
    avg_keyphrases: float
    std_keyphrases: float
    absent_pct: float
    std_absent_pct: float


@dataclass(frozen=True, slots=True)
class FoldAssignment:
    n_folds: int
    assignment: dict[str, int]

    def fold_ids(self, fold: int) -> list[str]:
        return sorted(i for i, f in self.assignment.items() if f == fold)


def _record_to_document(rec: dict, line_number: int) -> Document:
    if not isinstance(rec, dict):
        raise ParseError("record is not an object", line_number)
    try:
        doc_id = rec["id"]
        text = rec["text"]
        keyphrases = rec["keyphrases"]
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}", line_number) from None
    title = rec.get("title")
    if (
        not isinstance(doc_id, str)
        or not isinstance(text, str)
        or not isinstance(keyphrases, list)
        or any(not isinstance(k, str) for k in keyphrases)
        or (title is not None and not isinstance(title, str))
    ):
        raise ParseError("field has wrong type", line_number)
    body = f"{title} {text}" if title is not None else text
    try:
        return Document(id=doc_id, title=title, body=body, gold_keyphrases=tuple(keyphrases))
    except IngestionError as exc:
        raise ParseError(str(exc), line_number) from None


def load_documents(path: str | Path) -> list[Document]:
    """Read a JSONL corpus, preserving file order."""
    docs = []
    seen = set()
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"invalid JSON ({exc.msg})", line_number) from None
            doc = _record_to_document(rec, line_number)
            if doc.id in seen:
                raise IngestionError(f"duplicate document id {doc.id!r}")
            seen.add(doc.id)
            if not doc.gold_keyphrases:
                log.warning("document %r has no gold keyphrases; excluded from keyphrase stats", doc.id)
            docs.append(doc)
    return docs


def save_documents(docs: list[Document], path: str | Path) -> None:
    """Write documents back to the JSONL corpus format."""
    with open(path, "w", encoding="utf-8") as f:
        for doc in docs:
            rec = {"id": doc.id}
            if doc.title is not None:
                rec["title"] = doc.title
            rec["text"] = doc.text
            rec["keyphrases"] = list(doc.gold_keyphrases)
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


@lru_cache(maxsize=4096)
def _content_stems(body: str) -> tuple[str, ...]:
    # empty stems are dropped on both sides of the containment test
    return tuple(t.stem for t in textproc.tokenize(body) if not t.is_punct and t.stem)


def is_present(doc: Document, phrase: str) -> bool:
    """True iff the phrase's stem sequence occurs contiguously in the body."""
    if not phrase:
        raise UsageError("phrase must be non-empty")
    needle = tuple(textproc.normalize_phrase(phrase).split())
    if not needle:
        return False
    hay = _content_stems(doc.body)
    n = len(needle)
    return any(hay[i : i + n] == needle for i in range(len(hay) - n + 1))


def absent_fraction(doc: Document) -> float:
    """Fraction of gold keyphrases not present in the body."""
    if not doc.gold_keyphrases:
        raise UndefinedStatisticError(f"document {doc.id!r} has no gold keyphrases")
    absent = sum(1 for k in doc.gold_keyphrases if not is_present(doc, k))
    return absent / len(doc.gold_keyphrases)


def compute_stats(docs: list[Document]) -> DatasetStats:
    """Means and population standard deviations over the corpus.

    Documents without gold keyphrases are excluded from the keyphrase and
    absent-percentage statistics (but still counted in size/symbols/tokens).
    """
    if not docs:
        raise UsageError("empty corpus")
    symbols = [len(d.body) for d in docs]
    tokens = [len(textproc.tokenize(d.body)) for d in docs]
    with_gold = [d for d in docs if d.gold_keyphrases]
    keyphrases = [len(d.gold_keyphrases) for d in with_gold]
    absents = [100.0 * absent_fraction(d) for d in with_gold]

    def mean_std(xs):
        if not xs:
            return 0.0, 0.0
        return statistics.fmean(xs), statistics.pstdev(xs)

    avg_symbols, std_symbols = mean_std(symbols)
    avg_tokens, std_tokens = mean_std(tokens)
    avg_keyphrases, std_keyphrases = mean_std(keyphrases)
    absent_pct, std_absent_pct = mean_std(absents)
    return DatasetStats(
        size=len(docs),
        avg_symbols=avg_symbols,
        std_symbols=std_symbols,
        avg_tokens=avg_tokens,
        std_tokens=std_tokens,
        avg_keyphrases=avg_keyphrases,
        std_keyphrases=std_keyphrases,
        absent_pct=absent_pct,
        std_absent_pct=std_absent_pct,
    )


def make_folds(docs: list[Document], n_folds: int, seed: int) -> FoldAssignment:
    """Shuffle document ids with the seed, deal round-robin into folds."""
    if n_folds < 2:
        raise UsageError("n_folds must be at least 2")
    if n_folds > len(docs):
        raise UsageError(f"n_folds={n_folds} exceeds corpus size {len(docs)}")
    ids = [d.id for d in docs]
    rng = random.Random(seed)
    rng.shuffle(ids)
    return FoldAssignment(
        n_folds=n_folds,
        assignment={doc_id: i % n_folds for i, doc_id in enumerate(ids)},
    )
