import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

# models are prefetched into the local HF cache; never touch the network
os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

ADAPTER_ROOT = Path(__file__).resolve().parent.parent
REPO_ROOT = ADAPTER_ROOT.parent
INSPEC = REPO_ROOT / "data" / "inspec.jsonl"


def model_cached(model_id: str) -> bool:
    from huggingface_hub import try_to_load_from_cache

    return isinstance(try_to_load_from_cache(model_id, "config.json"), str)


def require_model(model_id: str):
    if not model_cached(model_id):
        pytest.skip(f"{model_id} not in the local HF cache; prefetch it first (see README)")


def run_kpgen(args: list[str]) -> subprocess.CompletedProcess:
    """Invoke the evaluation toolkit CLI as an external process."""
    return subprocess.run(
        [sys.executable, "-m", "kpgen.cli", *args], capture_output=True, text=True
    )


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path
