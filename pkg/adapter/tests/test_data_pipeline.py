import pytest

from conftest import require_model, write_jsonl
from kpadapter.data import DataFormatError, read_corpus_bodies, read_targets, training_pairs
from kpadapter.finetune import data_checksums
from kpadapter.spec import FinetuneSpec


def toy_files(tmp_path):
    corpus = write_jsonl(
        tmp_path / "corpus.jsonl",
        [
            {"id": "d1", "title": "T", "text": "alpha beta", "keyphrases": ["alpha"]},
            {"id": "d2", "text": "gamma delta", "keyphrases": ["gamma"]},
            {"id": "d3", "text": "epsilon", "keyphrases": ["epsilon"]},
        ],
    )
    targets = write_jsonl(
        tmp_path / "targets.jsonl",
        [
            {"id": "d1", "strategy": "no-sort", "target": "alpha"},
            {"id": "d2", "strategy": "no-sort", "target": "gamma"},
            {"id": "d3", "strategy": "no-sort", "target": "epsilon"},
            {"id": "d1", "strategy": "alpha", "target": "alpha"},
        ],
    )
    return corpus, targets


class TestReaders:
    def test_title_prepended(self, tmp_path):
        corpus, _ = toy_files(tmp_path)
        bodies = read_corpus_bodies(corpus)
        assert bodies["d1"] == "T alpha beta"
        assert bodies["d2"] == "gamma delta"

    def test_targets_filtered_by_strategy(self, tmp_path):
        _, targets = toy_files(tmp_path)
        assert set(read_targets(targets, "no-sort")) == {"d1", "d2", "d3"}
        assert set(read_targets(targets, "alpha")) == {"d1"}

    def test_missing_train_id_rejected(self, tmp_path):
        corpus, targets = toy_files(tmp_path)
        spec = FinetuneSpec(
            model_id="t5-small", strategy="no-sort", seed=0,
            train_ids=("d1", "ghost"), eval_ids=(),
        )
        with pytest.raises(DataFormatError, match="ghost"):
            training_pairs(spec, corpus, targets)

    def test_duplicate_corpus_id_rejected(self, tmp_path):
        corpus = write_jsonl(
            tmp_path / "dup.jsonl",
            [
                {"id": "d1", "text": "x", "keyphrases": []},
                {"id": "d1", "text": "y", "keyphrases": []},
            ],
        )
        with pytest.raises(DataFormatError, match="duplicate"):
            read_corpus_bodies(corpus)


class TestChecksums:
    def test_same_spec_same_checksums(self, tmp_path):
        require_model("t5-small")
        corpus, targets = toy_files(tmp_path)
        spec = FinetuneSpec(
            model_id="t5-small", strategy="no-sort", seed=7,
            train_ids=("d1", "d2"), eval_ids=("d3",),
        )
        first = data_checksums(spec, corpus, targets)
        second = data_checksums(spec, corpus, targets)
        assert first == second
        assert first["n_pairs"] == 2
        assert len(first["inputs_sha256"]) == 64

    def test_different_strategy_changes_labels_only(self, tmp_path):
        require_model("t5-small")
        corpus, targets = toy_files(tmp_path)
        extra = write_jsonl(
            tmp_path / "targets2.jsonl",
            [
                {"id": "d1", "strategy": "no-sort", "target": "alpha"},
                {"id": "d1", "strategy": "length", "target": "alpha longer phrasing"},
            ],
        )
        base = FinetuneSpec(
            model_id="t5-small", strategy="no-sort", seed=0,
            train_ids=("d1",), eval_ids=(),
        )
        other = FinetuneSpec(
            model_id="t5-small", strategy="length", seed=0,
            train_ids=("d1",), eval_ids=(),
        )
        c1 = data_checksums(base, corpus, extra)
        c2 = data_checksums(other, corpus, extra)
        assert c1["inputs_sha256"] == c2["inputs_sha256"]
        assert c1["labels_sha256"] != c2["labels_sha256"]
