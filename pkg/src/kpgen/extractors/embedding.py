"""Embedding-based candidate ranking and the provider file protocol.

A provider embeds whole texts, phrase lists, and whitespace tokens into
fixed-dimension vectors, deterministically. The file protocol shared with
external providers uses JSONL:

    request:  {"id": ..., "kind": "sentence" | "tokens", "text": ...}
    response: {"id": ..., "vector": [...]}                     (sentence)
              {"id": ..., "tokens": [{"surface", "vector"}]}   (tokens)

The built-in stub provider derives unit vectors from a hash of the input
string, so tests and full runs need no external model. An external
provider is invoked as a subprocess command containing {request} and
{response} placeholders.
"""

from __future__ import annotations

import hashlib
import json
import shlex
import subprocess
import tempfile
from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np

from kpgen.corpus import Document
from kpgen.errors import ProviderError
from kpgen.extractors.base import RankedPhrase, doc_candidates, rank_order

KIND_SENTENCE = "sentence"
KIND_TOKENS = "tokens"


class EmbeddingProvider(ABC):
    """Deterministic text/phrase/token embedder with a fixed dimension."""

    dimension: int

    @abstractmethod
    def embed_text(self, text: str) -> list[float]: ...

    @abstractmethod
    def embed_phrases(self, phrases: list[str]) -> list[list[float]]: ...

    @abstractmethod
    def embed_tokens(self, text: str) -> list[tuple[str, list[float]]]:
        """One vector per whitespace token of text."""


class StubProvider(EmbeddingProvider):
    """Hash-seeded unit vectors; identical strings get identical vectors."""

    def __init__(self, dimension: int = 64):
        self.dimension = dimension

    def _vector(self, key: str) -> list[float]:
        digest = hashlib.sha256(key.encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        v = rng.standard_normal(self.dimension)
        v /= np.linalg.norm(v)
        return v.tolist()

    def embed_text(self, text: str) -> list[float]:
        return self._vector(text)

    def embed_phrases(self, phrases: list[str]) -> list[list[float]]:
        return [self._vector(p) for p in phrases]

    def embed_tokens(self, text: str) -> list[tuple[str, list[float]]]:
        return [(tok, self._vector(tok)) for tok in text.split()]


def serve_request(provider: EmbeddingProvider, request_path, response_path) -> int:
    """Answer a protocol request file; returns the number of records served."""
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
                out = {"id": rec["id"], "vector": provider.embed_text(rec["text"])}
            elif kind == KIND_TOKENS:
                out = {
                    "id": rec["id"],
                    "tokens": [
                        {"surface": s, "vector": v}
                        for s, v in provider.embed_tokens(rec["text"])
                    ],
                }
            else:
                out = {"id": rec.get("id"), "error": f"unknown kind {kind!r}"}
            resp.write(json.dumps(out) + "\n")
            n += 1
    return n


class CommandProvider(EmbeddingProvider):
    """Bridges the file protocol to an external provider subprocess.

    The command template must contain {request} and {response} placeholders,
    e.g. "kpadapter embed-serve {request} {response}".
    """

    def __init__(self, command_template: str):
        if "{request}" not in command_template or "{response}" not in command_template:
            raise ProviderError(
                "provider command must contain {request} and {response} placeholders"
            )
        self._template = command_template
        self._cache: dict[tuple[str, str], object] = {}
        self.dimension = 0  # discovered from the first response

    def _roundtrip(self, items: list[dict]) -> dict:
        with tempfile.TemporaryDirectory(prefix="kpgen-provider-") as tmp:
            request_path = Path(tmp) / "request.jsonl"
            response_path = Path(tmp) / "response.jsonl"
            with open(request_path, "w", encoding="utf-8") as f:
                for item in items:
                    f.write(json.dumps(item) + "\n")
            argv = [
                part.format(request=str(request_path), response=str(response_path))
                for part in shlex.split(self._template)
            ]
            proc = subprocess.run(argv, capture_output=True, text=True)
            if proc.returncode != 0:
                raise ProviderError(
                    f"provider command failed (exit {proc.returncode}): {proc.stderr.strip()[-500:]}"
                )
            if not response_path.exists():
                raise ProviderError("provider wrote no response file")
            results = {}
            with open(response_path, encoding="utf-8") as f:
                for line in f:
                    if line.strip():
                        rec = json.loads(line)
                        if "error" in rec:
                            raise ProviderError(f"provider error record: {rec['error']}")
                        results[rec["id"]] = rec
            return results

    def _fetch(self, kind: str, texts: list[str]) -> list:
        missing = [t for t in texts if (kind, t) not in self._cache]
        if missing:
            items = [
                {"id": str(i), "kind": kind, "text": t} for i, t in enumerate(missing)
            ]
            results = self._roundtrip(items)
            for i, text in enumerate(missing):
                rec = results.get(str(i))
                if rec is None:
                    raise ProviderError(f"provider response missing id {i}")
                if kind == KIND_SENTENCE:
                    value = rec["vector"]
                    if self.dimension == 0:
                        self.dimension = len(value)
                else:
                    value = [(t["surface"], t["vector"]) for t in rec["tokens"]]
                    if self.dimension == 0 and value:
                        self.dimension = len(value[0][1])
                self._cache[(kind, text)] = value
        return [self._cache[(kind, t)] for t in texts]

    def embed_text(self, text: str) -> list[float]:
        return self._fetch(KIND_SENTENCE, [text])[0]

    def embed_phrases(self, phrases: list[str]) -> list[list[float]]:
        return self._fetch(KIND_SENTENCE, phrases)

    def embed_tokens(self, text: str) -> list[tuple[str, list[float]]]:
        return self._fetch(KIND_TOKENS, [text])[0]


def _cosine(a: list[float], b: list[float]) -> float:
    va, vb = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    na, nb = np.linalg.norm(va), np.linalg.norm(vb)
    if na == 0 or nb == 0:
        return 0.0
    return float(va @ vb / (na * nb))


def embed_rank(doc: Document, provider: EmbeddingProvider) -> list[RankedPhrase]:
    """score = cosine(document embedding, candidate embedding)."""
    candidates = doc_candidates(doc)
    try:
        doc_vec = provider.embed_text(doc.body)
        cand_vecs = provider.embed_phrases([c.surface for c in candidates])
    except ProviderError:
        raise
    except Exception as exc:
        raise ProviderError(f"embedding provider failed: {exc}") from exc
    scored = [(c, _cosine(doc_vec, v)) for c, v in zip(candidates, cand_vecs)]
    return rank_order(scored)
