"""Batch generation of keyphrase sequences into a predictions file.

Beam search (4 beams, max length 256), outputs decoded and recovered with
the shared comma/control-token grammar. A document whose decode fails is
written with an empty keyphrase list and a logged warning, never dropped.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

import torch

from kpadapter.data import read_corpus_bodies
from kpadapter.finetune import input_prefix
from kpadapter.grammar import parse_sequence

log = logging.getLogger(__name__)

NUM_BEAMS = 4
MAX_LENGTH = 256


def load_artifact(artifact_dir: str | Path):
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    artifact_dir = Path(artifact_dir)
    model_dir = artifact_dir / "model" if (artifact_dir / "model").exists() else artifact_dir
    spec_path = artifact_dir / "spec.json"
    spec = json.loads(spec_path.read_text()) if spec_path.exists() else {}
    tokenizer = AutoTokenizer.from_pretrained(model_dir)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_dir)
    model.eval()
    return model, tokenizer, spec


def generate(artifact_dir, corpus_path, out_path, batch_size: int = 8,
             max_input_len: int = 256) -> int:
    """Write one {id, keyphrases} record per corpus document; returns count."""
    model, tokenizer, spec = load_artifact(artifact_dir)
    prefix = input_prefix(spec.get("model_id", ""))
    bodies = read_corpus_bodies(corpus_path)
    ids = list(bodies)
    n_written = 0
    raw_log = Path(out_path).with_suffix(".raw.jsonl")
    with open(out_path, "w", encoding="utf-8") as out, open(
        raw_log, "w", encoding="utf-8"
    ) as raw_out, torch.no_grad():
        for start in range(0, len(ids), batch_size):
            chunk = ids[start : start + batch_size]
            try:
                enc = tokenizer(
                    [prefix + bodies[i] for i in chunk],
                    max_length=max_input_len,
                    truncation=True,
                    padding=True,
                    return_tensors="pt",
                )
                sequences = model.generate(
                    input_ids=enc.input_ids,
                    attention_mask=enc.attention_mask,
                    num_beams=NUM_BEAMS,
                    max_length=MAX_LENGTH,
                )
                texts = tokenizer.batch_decode(sequences, skip_special_tokens=True)
            except Exception as exc:
                log.warning("decode failed for batch at %r: %s", chunk[0], exc)
                texts = [""] * len(chunk)
            for doc_id, text in zip(chunk, texts):
                keyphrases = parse_sequence(text)
                out.write(
                    json.dumps({"id": doc_id, "keyphrases": keyphrases}, ensure_ascii=False) + "\n"
                )
                raw_out.write(json.dumps({"id": doc_id, "raw": text}, ensure_ascii=False) + "\n")
                n_written += 1
    return n_written
