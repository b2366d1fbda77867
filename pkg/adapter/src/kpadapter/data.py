"""Readers for the toolkit's corpus/targets file formats plus checksums.

The adapter talks to the main toolkit only through files: the corpus JSONL
({id, title?, text, keyphrases}) and the targets JSONL ({id, strategy,
target}) it consumes, and the predictions JSONL ({id, keyphrases}) it
produces.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path


class DataFormatError(ValueError):
    """A record in one of the interchange files is malformed."""


def read_corpus_bodies(path: str | Path) -> dict[str, str]:
    """id -> document body (title prepended with a single space)."""
    bodies: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                doc_id, text = rec["id"], rec["text"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataFormatError(f"corpus line {line_number}: {exc}") from None
            if doc_id in bodies:
                raise DataFormatError(f"corpus line {line_number}: duplicate id {doc_id!r}")
            title = rec.get("title")
            bodies[doc_id] = f"{title} {text}" if title is not None else text
    return bodies


def read_targets(path: str | Path, strategy: str) -> dict[str, str]:
    """id -> target sequence for one strategy."""
    targets: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                doc_id, rec_strategy, target = rec["id"], rec["strategy"], rec["target"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataFormatError(f"targets line {line_number}: {exc}") from None
            if rec_strategy == strategy:
                targets[doc_id] = target
    return targets


def training_pairs(spec, corpus_path, targets_path) -> list[tuple[str, str, str]]:
    """(doc id, body, target) for the run spec's train ids, id-sorted."""
    bodies = read_corpus_bodies(corpus_path)
    targets = read_targets(targets_path, spec.strategy)
    pairs = []
    for doc_id in sorted(spec.train_ids):
        if doc_id not in bodies:
            raise DataFormatError(f"train id {doc_id!r} not in corpus")
        if doc_id not in targets:
            raise DataFormatError(
                f"train id {doc_id!r} has no {spec.strategy!r} target in {targets_path}"
            )
        pairs.append((doc_id, bodies[doc_id], targets[doc_id]))
    return pairs


def token_checksum(sequences: list[list[int]]) -> str:
    """Stable digest over tokenized inputs; covers the data pipeline only."""
    h = hashlib.sha256()
    for seq in sequences:
        h.update(",".join(str(i) for i in seq).encode())
        h.update(b";")
    return h.hexdigest()
