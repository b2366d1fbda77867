import json
from pathlib import Path

import pytest

from kpgen.corpus import Document

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


def make_doc(body, gold, doc_id="d1", title=None):
    return Document(id=doc_id, title=title, body=body, gold_keyphrases=tuple(gold))


def write_corpus(path, records):
    with open(path, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
    return path


@pytest.fixture(scope="session")
def inspec_docs():
    from kpgen.corpus import load_documents

    path = DATA_DIR / "inspec.jsonl"
    if not path.exists():
        pytest.skip("data/inspec.jsonl not present (see scripts/convert_liaad.py)")
    return load_documents(path)
