"""Tokenization, sentence splitting, normalization and candidate phrases.

Every extractor and the presence test share this pipeline, so all rules
here are deterministic and versioned in-repo:

* word tokens are maximal runs of unicode letters/digits (underscore is
  punctuation); every other non-space character is a single-character
  punctuation token, so hyphenated forms split ("e-books" -> e / - / books)
* sentence boundaries fall after '.', '!' or '?' when the next token
  starts with an uppercase letter (or input ends); a '.' is suppressed
  after the abbreviations in _NO_BREAK_BEFORE_DOT
* stems come from the Porter 1980 rules (kpgen.porter)
* the stopword list is the 571-word SMART list shipped in data/
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from importlib import resources

from kpgen.porter import stem

__all__ = [
    "Token",
    "CandidatePhrase",
    "STOPWORDS",
    "tokenize",
    "split_sentences",
    "analyze",
    "stem",
    "ngram_candidates",
    "block_candidates",
    "normalize_phrase",
]

_TOKEN_RE = re.compile(r"[^\W_]+|\S", re.UNICODE)

# Abbreviations whose trailing period never ends a sentence. Only matters
# when a capitalized word follows ("Dr. Smith", "Fig. 3", "et al. (2019)").
_NO_BREAK_BEFORE_DOT = frozenset(
    "al dr e eq eqs fig figs g i mr mrs ms no prof ref refs sec secs st vol vs".split()
)

_TERMINALS = frozenset(".!?")


def _load_stopwords() -> frozenset[str]:
    text = resources.files("kpgen.data").joinpath("stopwords_smart.txt").read_text("utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


STOPWORDS = _load_stopwords()


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    stem: str
    char_offset: int
    sentence_idx: int
    is_stopword: bool
    is_punct: bool


@dataclass(frozen=True, slots=True)
class CandidatePhrase:
    """A 1-3 word phrase merged over its occurrences by stem sequence."""

    surface: str
    stems: tuple[str, ...]
    length_words: int
    first_offset: int
    frequency: int
    sentence_set: frozenset[int]
    offsets: tuple[int, ...]

    @property
    def normalized(self) -> str:
        # empty stems (a possessive "s" token) drop out, matching normalize_phrase
        return " ".join(s for s in self.stems if s)


def tokenize(text: str) -> list[Token]:
    """Split text into word and punctuation tokens with char offsets.

    sentence_idx is 0 for every token; run split_sentences (or analyze)
    to fill it.
    """
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        surface = m.group()
        first = surface[0]
        is_punct = not (first.isalnum() and first != "_")
        lowered = surface.lower()
        tokens.append(
            Token(
                surface=surface,
                stem=stem(lowered),
                char_offset=m.start(),
                sentence_idx=0,
                is_stopword=(not is_punct) and lowered in STOPWORDS,
                is_punct=is_punct,
            )
        )
    return tokens


def split_sentences(tokens: list[Token]) -> list[Token]:
    """Return the tokens with sentence_idx assigned."""
    out = []
    idx = 0
    prev_word = None
    for i, tok in enumerate(tokens):
        out.append(replace(tok, sentence_idx=idx) if tok.sentence_idx != idx else tok)
        if tok.is_punct and tok.surface in _TERMINALS:
            if tok.surface == "." and prev_word is not None and prev_word.lower() in _NO_BREAK_BEFORE_DOT:
                continue
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            if nxt is None or (not nxt.is_punct and nxt.surface[0].isupper()):
                idx += 1
        elif not tok.is_punct:
            prev_word = tok.surface
    return out


def analyze(text: str) -> list[Token]:
    """tokenize + split_sentences in one call."""
    return split_sentences(tokenize(text))


def normalize_phrase(phrase: str) -> str:
    """Lowercase, drop punctuation, stem each word, join with single spaces.

    Words whose stem is empty (e.g. a bare "s") are dropped so the result
    re-tokenizes cleanly.
    """
    stems = (t.stem for t in tokenize(phrase) if not t.is_punct)
    return " ".join(s for s in stems if s)


def _chunks(tokens, break_on_stopwords):
    """Maximal word-token runs that cross no sentence/punctuation boundary."""
    run = []
    prev = None
    for tok in tokens:
        boundary = tok.is_punct or (prev is not None and tok.sentence_idx != prev.sentence_idx)
        if boundary or (break_on_stopwords and tok.is_stopword):
            if run:
                yield run
                run = []
        if not tok.is_punct and not (break_on_stopwords and tok.is_stopword):
            run.append(tok)
        prev = tok
    if run:
        yield run


class _Builder:
    """Accumulates occurrences keyed by stem sequence."""

    def __init__(self):
        self.entries = {}

    def add(self, toks):
        key = tuple(t.stem for t in toks)
        entry = self.entries.get(key)
        if entry is None:
            self.entries[key] = {
                "surface": " ".join(t.surface for t in toks),
                "first_offset": toks[0].char_offset,
                "offsets": [toks[0].char_offset],
                "sentences": {toks[0].sentence_idx},
            }
        else:
            entry["offsets"].append(toks[0].char_offset)
            entry["sentences"].add(toks[0].sentence_idx)

    def build(self):
        out = []
        for key, e in self.entries.items():
            out.append(
                CandidatePhrase(
                    surface=e["surface"],
                    stems=key,
                    length_words=len(key),
                    first_offset=e["first_offset"],
                    frequency=len(e["offsets"]),
                    sentence_set=frozenset(e["sentences"]),
                    offsets=tuple(e["offsets"]),
                )
            )
        return out


def ngram_candidates(tokens: list[Token], n_max: int = 3) -> list[CandidatePhrase]:
    """All 1..n_max-grams inside a chunk, no stopword at either edge.

    Interior stopwords are allowed ("state of art"); candidates are merged
    by stem sequence and returned in first-occurrence order.
    """
    if not 1 <= n_max <= 3:
        raise ValueError("n_max must be in 1..3")
    builder = _Builder()
    for run in _chunks(tokens, break_on_stopwords=False):
        for i in range(len(run)):
            if run[i].is_stopword:
                continue
            for n in range(1, n_max + 1):
                j = i + n
                if j > len(run):
                    break
                if run[j - 1].is_stopword:
                    continue
                builder.add(run[i:j])
    return builder.build()


def block_candidates(tokens: list[Token]) -> list[CandidatePhrase]:
    """Maximal stopword-free runs, truncated to their first 3 words.

    Approximates noun-phrase candidates without a POS tagger; merged by
    stem sequence like ngram_candidates.
    """
    builder = _Builder()
    for run in _chunks(tokens, break_on_stopwords=True):
        builder.add(run[:3])
    return builder.build()
