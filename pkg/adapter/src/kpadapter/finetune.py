"""Fine-tune a pretrained seq2seq summarization model on target sequences.

Plain AdamW loop (no scheduler, no warmup) with the run spec's hyperparameters.
The tokenized-input checksum is written before training starts, so two runs
of the same spec can be compared at the data-pipeline level even when
kernel nondeterminism makes the trained weights differ across hardware.
"""

from __future__ import annotations

import json
import logging
import random
import time
from pathlib import Path

import torch

from kpadapter.data import token_checksum, training_pairs
from kpadapter.spec import FinetuneSpec

log = logging.getLogger(__name__)

T5_PREFIX = "summarize: "


def input_prefix(model_id: str) -> str:
    return T5_PREFIX if model_id.startswith("t5") else ""


def _load_model_and_tokenizer(model_id: str):
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_id)
    model = AutoModelForSeq2SeqLM.from_pretrained(model_id)
    return model, tokenizer


def tokenize_pairs(spec: FinetuneSpec, tokenizer, pairs):
    """Token id sequences for checksum + training, in id-sorted order."""
    prefix = input_prefix(spec.model_id)
    inputs = tokenizer(
        [prefix + body for _, body, _ in pairs],
        max_length=spec.max_seq_len,
        truncation=True,
    ).input_ids
    labels = tokenizer(
        text_target=[target for _, _, target in pairs],
        max_length=spec.max_seq_len,
        truncation=True,
    ).input_ids
    return inputs, labels


def data_checksums(spec: FinetuneSpec, corpus_path, targets_path) -> dict:
    """Checksums of the tokenized pipeline without training anything."""
    from transformers import AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(spec.model_id)
    pairs = training_pairs(spec, corpus_path, targets_path)
    inputs, labels = tokenize_pairs(spec, tokenizer, pairs)
    return {
        "n_pairs": len(pairs),
        "inputs_sha256": token_checksum(inputs),
        "labels_sha256": token_checksum(labels),
    }


def _batches(n, batch_size, rng):
    order = list(range(n))
    rng.shuffle(order)
    for i in range(0, n, batch_size):
        yield order[i : i + batch_size]


def finetune(spec: FinetuneSpec, corpus_path, targets_path, out_dir) -> Path:
    """Train per the run spec and save the artifact directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    spec.write(out / "spec.json")

    pairs = training_pairs(spec, corpus_path, targets_path)
    model, tokenizer = _load_model_and_tokenizer(spec.model_id)
    inputs, labels = tokenize_pairs(spec, tokenizer, pairs)
    checksums = {
        "n_pairs": len(pairs),
        "inputs_sha256": token_checksum(inputs),
        "labels_sha256": token_checksum(labels),
    }
    (out / "checksums.json").write_text(json.dumps(checksums, indent=2) + "\n")
    log.info("tokenized %d pairs; inputs sha256 %s", len(pairs), checksums["inputs_sha256"][:16])

    torch.manual_seed(spec.seed)
    random.seed(spec.seed)
    rng = random.Random(spec.seed)
    pad_id = tokenizer.pad_token_id
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=spec.learning_rate)

    log_path = out / "training_log.jsonl"
    step = 0
    with open(log_path, "w", encoding="utf-8") as log_file:
        for epoch in range(spec.epochs):
            epoch_started = time.perf_counter()
            epoch_loss = 0.0
            n_batches = 0
            for batch in _batches(len(pairs), spec.batch_size, rng):
                batch_inputs = [inputs[i] for i in batch]
                batch_labels = [labels[i] for i in batch]
                max_in = max(len(s) for s in batch_inputs)
                max_lab = max(len(s) for s in batch_labels)
                input_ids = torch.full((len(batch), max_in), pad_id, dtype=torch.long)
                attention = torch.zeros((len(batch), max_in), dtype=torch.long)
                label_ids = torch.full((len(batch), max_lab), -100, dtype=torch.long)
                for row, (seq, lab) in enumerate(zip(batch_inputs, batch_labels)):
                    input_ids[row, : len(seq)] = torch.tensor(seq)
                    attention[row, : len(seq)] = 1
                    label_ids[row, : len(lab)] = torch.tensor(lab)
                optimizer.zero_grad()
                loss = model(
                    input_ids=input_ids, attention_mask=attention, labels=label_ids
                ).loss
                loss.backward()
                optimizer.step()
                epoch_loss += loss.item()
                n_batches += 1
                step += 1
            log_file.write(
                json.dumps(
                    {
                        "epoch": epoch,
                        "mean_loss": epoch_loss / max(n_batches, 1),
                        "steps": step,
                        "seconds": round(time.perf_counter() - epoch_started, 2),
                    }
                )
                + "\n"
            )
            log_file.flush()

    model_dir = out / "model"
    model.save_pretrained(model_dir)
    tokenizer.save_pretrained(model_dir)
    return out
