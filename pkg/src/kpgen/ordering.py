"""Target-sequence construction under eight keyphrase ordering strategies.

A target sequence is the gold keyphrase list joined with ", " after
reordering. The two control-code strategies additionally mark the absent
and present blocks with the reserved tokens <absent> and <present>; both
tokens are always emitted, even when the absent block is empty, so the
grammar stays fixed. parse_prediction inverts the encoding for generated
sequences.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from enum import Enum

from kpgen import textproc
from kpgen.corpus import Document
from kpgen.errors import DataError

SEPARATOR = ", "
ABSENT_TOKEN = "<absent>"
PRESENT_TOKEN = "<present>"


class Strategy(Enum):
    NO_SORT = "no-sort"
    RANDOM = "random"
    LENGTH = "length"
    ALPHA = "alpha"
    APPEAR_PRE = "appear-pre"
    APPEAR_POST = "appear-post"
    APPEAR_PRE_CC = "appear-pre-cc"
    APPEAR_POST_CC = "appear-post-cc"

    @property
    def uses_control_codes(self) -> bool:
        return self in (Strategy.APPEAR_PRE_CC, Strategy.APPEAR_POST_CC)

    @property
    def needs_absent_split(self) -> bool:
        return self in (
            Strategy.APPEAR_PRE,
            Strategy.APPEAR_POST,
            Strategy.APPEAR_PRE_CC,
            Strategy.APPEAR_POST_CC,
        )


@dataclass(frozen=True, slots=True)
class TargetSequence:
    text: str
    separator: str
    uses_control_codes: bool
    phrase_count: int


def _sanitize(phrase: str) -> str:
    """Commas would break the encoding; fold them (and runs of space) away."""
    return re.sub(r"\s+", " ", phrase.replace(",", " ")).strip()


def _first_match_offset(doc: Document, phrase: str) -> int | None:
    """Char offset of the first stemmed occurrence of phrase in the body."""
    needle = tuple(textproc.normalize_phrase(phrase).split())
    if not needle:
        return None
    content = [t for t in textproc.tokenize(doc.body) if not t.is_punct and t.stem]
    hay = tuple(t.stem for t in content)
    n = len(needle)
    for i in range(len(hay) - n + 1):
        if hay[i : i + n] == needle:
            return content[i].char_offset
    return None


def _split(doc: Document, phrases: list[str]) -> tuple[list[str], list[str]]:
    present = []
    absent = []
    for phrase in phrases:
        offset = _first_match_offset(doc, phrase)
        if offset is None:
            absent.append(phrase)
        else:
            present.append((offset, phrase))
    present.sort(key=lambda pair: pair[0])
    return [p for _, p in present], absent


def split_present_absent(doc: Document) -> tuple[list[str], list[str]]:
    """Present keyphrases sorted by first occurrence; absent in author order."""
    return _split(doc, list(doc.gold_keyphrases))


def _rng_for(seed: int, doc_id: str) -> random.Random:
    # str seeds hash stably across processes, unlike hash((seed, id))
    return random.Random(f"{seed}:{doc_id}")


def build_target(doc: Document, strategy: Strategy, seed: int = 0) -> TargetSequence:
    """Encode the document's gold keyphrases under one ordering strategy."""
    if not doc.gold_keyphrases:
        raise DataError(f"document {doc.id!r} has no gold keyphrases to encode")
    phrases = [_sanitize(k) for k in doc.gold_keyphrases]
    pieces: list[str]
    if strategy is Strategy.NO_SORT:
        pieces = phrases
    elif strategy is Strategy.RANDOM:
        pieces = phrases[:]
        _rng_for(seed, doc.id).shuffle(pieces)
    elif strategy is Strategy.LENGTH:
        pieces = sorted(phrases, key=len)
    elif strategy is Strategy.ALPHA:
        pieces = sorted(phrases, key=str.casefold)
    else:
        present, absent = _split(doc, phrases)
        _rng_for(seed, doc.id).shuffle(absent)
        if strategy in (Strategy.APPEAR_PRE, Strategy.APPEAR_PRE_CC):
            pieces = absent + present
            if strategy is Strategy.APPEAR_PRE_CC:
                pieces = [ABSENT_TOKEN, *absent, PRESENT_TOKEN, *present]
        else:
            pieces = present + absent
            if strategy is Strategy.APPEAR_POST_CC:
                pieces = [PRESENT_TOKEN, *present, ABSENT_TOKEN, *absent]
    return TargetSequence(
        text=SEPARATOR.join(pieces),
        separator=SEPARATOR,
        uses_control_codes=strategy.uses_control_codes,
        phrase_count=len(phrases),
    )


def parse_prediction(text: str) -> list[str]:
    """Recover a keyphrase list from a generated sequence.

    Splits on commas, strips control tokens, drops empties, and removes
    duplicates by normalized form keeping the first occurrence.
    """
    out = []
    seen = set()
    for piece in text.split(","):
        piece = piece.replace(ABSENT_TOKEN, "").replace(PRESENT_TOKEN, "").strip()
        if not piece:
            continue
        key = textproc.normalize_phrase(piece)
        if key and key not in seen:
            seen.add(key)
            out.append(piece)
    return out
