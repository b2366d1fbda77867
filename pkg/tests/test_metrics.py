import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpgen.errors import DataError, UsageError
from kpgen.metrics import (
    BERTSCORE,
    FULLMATCH,
    ROUGE1,
    MetricReport,
    aggregate_folds,
    bertscore,
    full_match_f1,
    performance_growth,
    rouge1,
)
from kpgen.ordering import Strategy


class TestFullMatch:
    def test_identity(self):
        r = full_match_f1(["graph theory", "coloring"], ["graph theory", "coloring"])
        assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)

    def test_stemmed_partial(self):
        # "networks" and "network" share a stem; "optimisation" and
        # "optimization" do not (optimis vs optim under the 1980 rules)
        gold = ["neural networks", "optimization"]
        pred = ["neural network", "optimisation", "graphs"]
        r = full_match_f1(gold, pred)
        assert r.precision == pytest.approx(1 / 3)
        assert r.recall == pytest.approx(1 / 2)
        assert r.f1 == pytest.approx(0.4)

    def test_empty_pred(self):
        r = full_match_f1(["a b"], [])
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)

    def test_empty_gold_nonempty_pred(self):
        r = full_match_f1([], ["something"])
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)

    def test_duplicate_predictions_collapse(self):
        base = full_match_f1(["alpha"], ["alpha", "beta"])
        dup = full_match_f1(["alpha"], ["alpha", "alpha", "Alpha", "beta"])
        assert dup == base

    @given(
        st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta"]), min_size=1, max_size=4, unique=True),
        st.lists(st.sampled_from(["alpha", "beta", "epsilon"]), max_size=3, unique=True),
        st.sampled_from(["alpha", "beta", "gamma", "delta"]),
    )
    @settings(max_examples=100)
    def test_adding_correct_prediction_never_decreases_recall(self, gold, pred, extra):
        if extra in gold and extra not in pred:
            before = full_match_f1(gold, pred)
            after = full_match_f1(gold, pred + [extra])
            assert after.recall >= before.recall


class TestRouge1:
    def test_identity(self):
        r = rouge1(["graph theory"], ["graph theory"])
        assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)

    def test_hand_tally(self):
        # gold unigrams {a, b, c}, pred {a, c, d}: clipped match 2
        r = rouge1(["a", "b c"], ["a", "c d"])
        assert r.precision == pytest.approx(2 / 3)
        assert r.recall == pytest.approx(2 / 3)
        assert r.f1 == pytest.approx(2 / 3)

    def test_disjoint(self):
        r = rouge1(["alpha"], ["omega"])
        assert r.f1 == 0.0

    def test_no_stemming(self):
        # full-match would equate these; rouge1 must not
        r = rouge1(["networks"], ["network"])
        assert r.f1 == 0.0

    def test_clipping(self):
        # "a" appears twice in pred but once in gold: clipped to 1
        r = rouge1(["a"], ["a a"])
        assert r.precision == pytest.approx(1 / 2)
        assert r.recall == pytest.approx(1.0)

    def test_empty_pred(self):
        assert rouge1(["a"], []).f1 == 0.0

    @given(
        st.lists(st.sampled_from(["alpha", "beta b", "gamma", "delta d"]), min_size=1, max_size=4),
        st.lists(st.sampled_from(["alpha", "beta b", "omega"]), min_size=1, max_size=4),
        st.randoms(use_true_random=False),
    )
    @settings(max_examples=100)
    def test_permutation_invariant(self, gold, pred, rng):
        base = rouge1(gold, pred)
        gold2, pred2 = gold[:], pred[:]
        rng.shuffle(gold2)
        rng.shuffle(pred2)
        shuffled = rouge1(gold2, pred2)
        assert shuffled.precision == pytest.approx(base.precision)
        assert shuffled.recall == pytest.approx(base.recall)


def unit(*xs):
    n = math.sqrt(sum(x * x for x in xs))
    return [x / n for x in xs]


class TestBertscore:
    def test_identical_tokens(self):
        toks = [("a", [1.0, 0.0]), ("b", [0.0, 1.0])]
        r = bertscore(toks, toks)
        assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)

    def test_orthonormal_half_recall(self):
        gold = [("a", [1.0, 0.0]), ("b", [0.0, 1.0])]
        pred = [("a", [1.0, 0.0])]
        r = bertscore(gold, pred)
        assert r.precision == pytest.approx(1.0)
        assert r.recall == pytest.approx(0.5)
        assert r.f1 == pytest.approx(2 / 3)

    def test_empty_pred(self):
        r = bertscore([("a", [1.0])], [])
        assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)

    def test_dimension_mismatch(self):
        with pytest.raises(DataError, match="dimension"):
            bertscore([("a", [1.0])], [("b", [1.0, 0.0])])

    def test_zero_vector(self):
        with pytest.raises(DataError, match="zero"):
            bertscore([("a", [0.0, 0.0])], [("b", [1.0, 0.0])])

    @given(st.data())
    @settings(max_examples=100)
    def test_greedy_matches_bruteforce_oracle(self, data):
        dim = data.draw(st.integers(2, 4))
        vec = st.lists(
            st.floats(-1, 1, allow_nan=False).filter(lambda x: abs(x) > 1e-3),
            min_size=dim,
            max_size=dim,
        )
        gold = [("g", data.draw(vec)) for _ in range(data.draw(st.integers(1, 6)))]
        pred = [("p", data.draw(vec)) for _ in range(data.draw(st.integers(1, 6)))]
        r = bertscore(gold, pred)

        def cos(a, b):
            na = math.sqrt(sum(x * x for x in a))
            nb = math.sqrt(sum(x * x for x in b))
            return sum(x * y for x, y in zip(a, b)) / (na * nb)

        # independent max-per-token oracle
        recall = sum(max(cos(g, p) for _, p in pred) for _, g in gold) / len(gold)
        precision = sum(max(cos(p, g) for _, g in gold) for _, p in pred) / len(pred)
        assert r.recall == pytest.approx(recall, abs=1e-9)
        assert r.precision == pytest.approx(precision, abs=1e-9)

    def test_lower_bounds_fixed_assignment(self):
        rng = random.Random(5)
        gold = [(f"g{i}", unit(*(rng.gauss(0, 1) for _ in range(4)))) for i in range(5)]
        pred = [(f"p{i}", unit(*(rng.gauss(0, 1) for _ in range(4)))) for i in range(5)]
        r = bertscore(gold, pred)

        def cos(a, b):
            return sum(x * y for x, y in zip(a, b))

        identity = [cos(g, p) for (_, g), (_, p) in zip(gold, pred)]
        fixed = sum(identity) / len(identity)
        assert r.recall >= fixed - 1e-12
        assert r.precision >= fixed - 1e-12


class TestGrowth:
    def test_fixed_point(self):
        assert performance_growth(0.5, 0.5, Strategy.ALPHA).growth == 0.0

    def test_paper_values(self):
        g = performance_growth(14.55, 14.45, Strategy.APPEAR_PRE)
        assert g.growth == pytest.approx(0.0069, abs=1e-4)
        g = performance_growth(7.59, 9.19, Strategy.APPEAR_POST)
        assert g.growth == pytest.approx(-0.1741, abs=1e-4)

    def test_errors(self):
        with pytest.raises(UsageError):
            performance_growth(1.0, 0.0, Strategy.ALPHA)
        with pytest.raises(UsageError):
            performance_growth(1.0, 1.0, Strategy.NO_SORT)

    @given(st.floats(0.01, 10), st.floats(0.01, 10), st.floats(0.001, 1))
    @settings(max_examples=100)
    def test_strictly_increasing_in_strategy_score(self, r1, r_nosort, delta):
        lo = performance_growth(r1, r_nosort, Strategy.ALPHA).growth
        hi = performance_growth(r1 + delta, r_nosort, Strategy.ALPHA).growth
        assert hi > lo


class TestAggregate:
    def test_identical_reports(self):
        r = MetricReport(0.5, 0.25, 1 / 3, FULLMATCH, 5)
        agg = aggregate_folds([r, r, r])
        assert agg.mean == r

    def test_arithmetic(self):
        reports = [MetricReport(0.0, 0.0, f1, ROUGE1, None) for f1 in (0.1, 0.2, 0.3)]
        agg = aggregate_folds(reports)
        assert agg.mean.f1 == pytest.approx(0.2, abs=1e-12)

    def test_mixed_metric_names_rejected(self):
        with pytest.raises(UsageError):
            aggregate_folds(
                [MetricReport(0, 0, 0, FULLMATCH, 5), MetricReport(0, 0, 0, BERTSCORE, 5)]
            )

    def test_mixed_k_rejected(self):
        with pytest.raises(UsageError):
            aggregate_folds(
                [MetricReport(0, 0, 0, FULLMATCH, 5), MetricReport(0, 0, 0, FULLMATCH, 10)]
            )

    @given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=8))
    @settings(max_examples=100)
    def test_mean_matches_components(self, prs):
        reports = [
            MetricReport(p, r, 2 * p * r / (p + r) if p + r else 0.0, FULLMATCH, None)
            for p, r in prs
        ]
        agg = aggregate_folds(reports)
        n = len(reports)
        assert agg.mean.precision == pytest.approx(sum(r.precision for r in reports) / n, abs=1e-12)
        assert agg.mean.f1 == pytest.approx(sum(r.f1 for r in reports) / n, abs=1e-12)


class TestCrossMetricConventions:
    def test_identical_content_scores_one(self):
        gold = ["alpha beta", "gamma"]
        assert full_match_f1(gold, list(gold)).f1 == 1.0
        assert rouge1(gold, list(gold)).f1 == 1.0

    def test_disjoint_content_scores_zero(self):
        gold, pred = ["alpha"], ["omega"]
        assert full_match_f1(gold, pred).f1 == 0.0
        assert rouge1(gold, pred).f1 == 0.0
        r = bertscore([("a", [1.0, 0.0])], [("b", [0.0, 1.0])])
        assert r.f1 == 0.0
