"""Embedding server over the JSONL file protocol.

Backed by a small pretrained sentence encoder (384-dimensional MiniLM by
default). Sentence mode mean-pools the final hidden states over real
tokens and L2-normalizes. Tokens mode returns one vector per whitespace
token of the text, mean-pooled over that word's subtokens (unnormalized).
Identical texts within and across requests embed identically: results are
cached by exact string.
"""

from __future__ import annotations

import json

import torch

DEFAULT_MODEL = "sentence-transformers/all-MiniLM-L6-v2"

KIND_SENTENCE = "sentence"
KIND_TOKENS = "tokens"


class EmbeddingServer:
    def __init__(self, model_id: str = DEFAULT_MODEL):
        from transformers import AutoModel, AutoTokenizer

        self.tokenizer = AutoTokenizer.from_pretrained(model_id)
        self.model = AutoModel.from_pretrained(model_id)
        self.model.eval()
        self.dimension = int(self.model.config.hidden_size)
        self._sentence_cache: dict[str, list[float]] = {}
        self._tokens_cache: dict[str, list[dict]] = {}

    @torch.no_grad()
    def sentence_vector(self, text: str) -> list[float]:
        if text in self._sentence_cache:
            return self._sentence_cache[text]
        enc = self.tokenizer(text or " ", truncation=True, max_length=256, return_tensors="pt")
        hidden = self.model(**enc).last_hidden_state[0]
        mask = enc.attention_mask[0].unsqueeze(-1)
        pooled = (hidden * mask).sum(0) / mask.sum()
        pooled = pooled / pooled.norm()
        vec = [float(x) for x in pooled]
        self._sentence_cache[text] = vec
        return vec

    @torch.no_grad()
    def token_vectors(self, text: str) -> list[dict]:
        if text in self._tokens_cache:
            return self._tokens_cache[text]
        words = text.split()
        if not words:
            self._tokens_cache[text] = []
            return []
        enc = self.tokenizer(
            words, is_split_into_words=True, truncation=True, max_length=256, return_tensors="pt"
        )
        hidden = self.model(**enc).last_hidden_state[0]
        word_ids = enc.word_ids(0)
        out = []
        for w_idx, word in enumerate(words):
            rows = [i for i, w in enumerate(word_ids) if w == w_idx]
            if rows:
                vec = hidden[rows].mean(0)
            else:  # word truncated away; fall back to the pooled sentence
                vec = hidden.mean(0)
            out.append({"surface": word, "vector": [float(x) for x in vec]})
        self._tokens_cache[text] = out
        return out

    def serve_file(self, request_path, response_path) -> int:
        """Answer one protocol request file; returns records served."""
        n = 0
        with open(request_path, encoding="utf-8") as req, open(
            response_path, "w", encoding="utf-8"
        ) as resp:
            for line in req:
                if not line.strip():
                    continue
                rec = json.loads(line)
                kind = rec.get("kind")
                if kind == KIND_SENTENCE:
                    out = {"id": rec["id"], "vector": self.sentence_vector(rec["text"])}
                elif kind == KIND_TOKENS:
                    out = {"id": rec["id"], "tokens": self.token_vectors(rec["text"])}
                else:
                    out = {"id": rec.get("id"), "error": f"unknown kind {kind!r}"}
                resp.write(json.dumps(out) + "\n")
                n += 1
        return n
