"""Conformance checks for the embedding-provider protocol.

Both the built-in stub and any external provider (through its file-serving
entry point) must pass exactly these checks; the functions raise
AssertionError with a diagnostic on violation.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from kpgen.extractors.embedding import EmbeddingProvider

_SENTENCES = [
    "a",
    "neural networks",
    "Keyphrase generation as sequence production.",
]


def check_provider(provider: EmbeddingProvider) -> None:
    """Interface-level contract: dimension, determinism, token alignment."""
    v = provider.embed_text(_SENTENCES[0])
    dim = provider.dimension or len(v)
    assert dim > 0, "provider must declare a positive dimension"
    for text in _SENTENCES:
        vec = provider.embed_text(text)
        assert len(vec) == dim, f"sentence vector for {text!r} has length {len(vec)}, want {dim}"
        again = provider.embed_text(text)
        assert vec == again, f"sentence embedding for {text!r} is not deterministic"

    batch = provider.embed_phrases(_SENTENCES)
    assert len(batch) == len(_SENTENCES), "embed_phrases must align with its input"
    for vec in batch:
        assert len(vec) == dim

    tokens = provider.embed_tokens("neural networks")
    assert len(tokens) == 2, f"'neural networks' must yield 2 token records, got {len(tokens)}"
    assert [s for s, _ in tokens] == ["neural", "networks"], "token surfaces must echo whitespace tokens"
    for _, vec in tokens:
        assert len(vec) == dim
    assert provider.embed_tokens("neural networks") == tokens, "token embeddings must be deterministic"


def check_file_server(serve) -> None:
    """File-protocol contract for `serve(request_path, response_path)`."""
    request = [
        {"id": "s1", "kind": "sentence", "text": "graph coloring"},
        {"id": "s2", "kind": "sentence", "text": "graph coloring"},
        {"id": "t1", "kind": "tokens", "text": "neural networks"},
        {"id": "bad", "kind": "paragraph", "text": "x"},
    ]
    with tempfile.TemporaryDirectory(prefix="kpgen-contract-") as tmp:
        req = Path(tmp) / "request.jsonl"
        resp = Path(tmp) / "response.jsonl"
        with open(req, "w", encoding="utf-8") as f:
            for item in request:
                f.write(json.dumps(item) + "\n")
        serve(str(req), str(resp))
        records = {}
        with open(resp, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    rec = json.loads(line)
                    records[rec["id"]] = rec

    assert set(records) == {"s1", "s2", "t1", "bad"}, f"ids must be echoed, got {sorted(records)}"
    v1, v2 = records["s1"]["vector"], records["s2"]["vector"]
    assert v1 == v2, "identical sentence texts must produce identical vectors"
    dim = len(v1)
    assert dim > 0
    tokens = records["t1"]["tokens"]
    assert [t["surface"] for t in tokens] == ["neural", "networks"]
    assert all(len(t["vector"]) == dim for t in tokens), "token vectors must share the sentence dimension"
    assert "error" in records["bad"], "unknown kind must yield an error record"
