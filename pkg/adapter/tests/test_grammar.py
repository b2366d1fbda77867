import json

from conftest import run_kpgen, write_jsonl
from kpadapter.grammar import parse_sequence


class TestParseSequence:
    def test_plain(self):
        assert parse_sequence("alpha, beta gamma, delta") == ["alpha", "beta gamma", "delta"]

    def test_control_tokens_stripped(self):
        assert parse_sequence("<absent>, a1, <present>, p1") == ["a1", "p1"]

    def test_glued_control_token(self):
        assert parse_sequence("<present> alpha, beta") == ["alpha", "beta"]

    def test_empty(self):
        assert parse_sequence("") == []
        assert parse_sequence(", ,, ") == []

    def test_case_dedupe(self):
        assert parse_sequence("Alpha, alpha, ALPHA, beta") == ["Alpha", "beta"]


class TestRoundTripWithToolkitTargets:
    def test_targets_from_toolkit_parse_back(self, tmp_path):
        corpus = write_jsonl(
            tmp_path / "corpus.jsonl",
            [
                {"id": "d1", "text": "alpha beta appears early", "keyphrases": ["alpha beta", "ghost phrase"]},
                {"id": "d2", "text": "gamma delta text", "keyphrases": ["gamma delta"]},
            ],
        )
        targets_path = tmp_path / "targets.jsonl"
        proc = run_kpgen(
            ["targets", "--corpus", str(corpus), "--strategy", "all",
             "--seed", "3", "--out", str(targets_path)]
        )
        assert proc.returncode == 0, proc.stderr
        records = [json.loads(l) for l in targets_path.read_text().splitlines()]
        assert records
        by_id = {}
        for rec in records:
            parsed = parse_sequence(rec["target"])
            by_id.setdefault(rec["id"], []).append(parsed)
        for doc_id, parses in by_id.items():
            reference = {p.lower() for p in parses[0]}
            for parsed in parses[1:]:
                assert {p.lower() for p in parsed} == reference, doc_id
