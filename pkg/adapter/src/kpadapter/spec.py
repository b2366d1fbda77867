"""Fine-tuning run specification with the reference hyperparameters.

Defaults are fixed: 3 epochs, batch size 8, maximum sequence length 256,
learning rate 4e-5. Every run writes its resolved spec as JSON next to the
artifacts so results stay attributable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

KNOWN_MODELS = ("t5-small", "facebook/bart-base")

DEFAULT_EPOCHS = 3
DEFAULT_BATCH_SIZE = 8
DEFAULT_MAX_SEQ_LEN = 256
DEFAULT_LEARNING_RATE = 4e-5


class SpecError(ValueError):
    """Invalid or unsafe run specification."""


@dataclass
class FinetuneSpec:
    model_id: str
    strategy: str
    seed: int
    train_ids: tuple[str, ...]
    eval_ids: tuple[str, ...]
    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH_SIZE
    max_seq_len: int = DEFAULT_MAX_SEQ_LEN
    learning_rate: float = DEFAULT_LEARNING_RATE
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model_id not in KNOWN_MODELS:
            raise SpecError(f"model_id must be one of {KNOWN_MODELS}, got {self.model_id!r}")
        if not self.train_ids:
            raise SpecError("train_ids must be non-empty")
        overlap = set(self.train_ids) & set(self.eval_ids)
        if overlap:
            raise SpecError(
                f"train and eval ids overlap ({len(overlap)} ids, e.g. {sorted(overlap)[:3]}); refusing"
            )
        if self.epochs < 1 or self.batch_size < 1 or self.max_seq_len < 8:
            raise SpecError("epochs/batch_size/max_seq_len out of range")

    def resolved(self) -> dict:
        return {
            "model_id": self.model_id,
            "strategy": self.strategy,
            "seed": self.seed,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "max_seq_len": self.max_seq_len,
            "learning_rate": self.learning_rate,
            "n_train": len(self.train_ids),
            "n_eval": len(self.eval_ids),
            "train_ids": sorted(self.train_ids),
            "eval_ids": sorted(self.eval_ids),
            "input": "title-prepended body",
            "decoding": {"num_beams": 4, "max_length": self.max_seq_len, "length_penalty": 1.0},
            "notes": self.notes,
        }

    def write(self, path: str | Path) -> None:
        Path(path).write_text(
            json.dumps(self.resolved(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
