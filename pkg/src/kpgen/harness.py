"""Experiment orchestration: folds, extractor runs, scoring, table emission.

Scores are macro-averaged: per-document reports are averaged within each
fold, and the headline number is the mean over folds. Wall-clock timings
are recorded per extractor but written to a separate file so result tables
stay byte-identical across reruns with the same seed.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from kpgen import corpus as corpus_mod
from kpgen import metrics as metrics_mod
from kpgen.corpus import Document, FoldAssignment
from kpgen.errors import DataError, ParseError, ProviderError, UsageError
from kpgen.extractors import (
    CommandProvider,
    EmbeddingProvider,
    StubProvider,
    build_df,
    embed_rank,
    kea_rank,
    kea_train,
    tfidf_rank,
    top_k,
    topicrank,
    yake,
)
from kpgen.metrics import FoldAggregate, MetricReport, aggregate_folds
from kpgen.ordering import Strategy

EXTRACTOR_NAMES = ("tfidf", "topicrank", "yake", "kea", "embedrank")
DEFAULT_K = (5, 10, 15)


@dataclass
class ExperimentConfig:
    corpus_path: str
    extractors: tuple[str, ...] = ("tfidf",)
    k_values: tuple[int, ...] = DEFAULT_K
    strategies: tuple[Strategy, ...] = tuple(Strategy)
    n_folds: int = 3
    seed: int = 0
    provider: str = "stub"
    out_dir: str = "runs/out"
    workers: int = 1
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if any(k < 1 for k in self.k_values):
            raise UsageError("k values must be positive")
        if self.n_folds < 2:
            raise UsageError("n_folds must be at least 2")
        unknown = [e for e in self.extractors if e not in EXTRACTOR_NAMES]
        if unknown:
            raise UsageError(f"unknown extractors: {unknown}; valid: {EXTRACTOR_NAMES}")

    def snapshot(self) -> dict:
        return {
            "corpus": self.corpus_path,
            "extractors": list(self.extractors),
            "k": list(self.k_values),
            "strategies": [s.value for s in self.strategies],
            "n_folds": self.n_folds,
            "seed": self.seed,
            "provider": self.provider,
            "workers": self.workers,
            "params": dict(sorted(self.params.items())),
            "df_source": "evaluation corpus",
        }


_CONFIG_KEYS = {
    "corpus", "extractors", "k", "strategies", "n_folds", "seed",
    "provider", "out", "workers",
}


def parse_config(path: str | Path) -> ExperimentConfig:
    """Read the flat key-value config format (key = value, # comments)."""
    values: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line_number, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError("expected 'key = value'", line_number)
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    unknown = {
        k for k in values
        if k not in _CONFIG_KEYS and not any(k.startswith(e + ".") for e in EXTRACTOR_NAMES)
    }
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if "corpus" not in values:
        raise UsageError("config must set 'corpus'")

    def split_list(key, default):
        if key not in values:
            return default
        return tuple(p.strip() for p in values[key].split(",") if p.strip())

    try:
        strategies = tuple(Strategy(s) for s in split_list("strategies", ()))
    except ValueError as exc:
        raise UsageError(f"bad strategy in config: {exc}") from None
    params = {
        k: float(v)
        for k, v in values.items()
        if any(k.startswith(e + ".") for e in EXTRACTOR_NAMES)
    }
    return ExperimentConfig(
        corpus_path=values["corpus"],
        extractors=split_list("extractors", ("tfidf",)),
        k_values=tuple(int(k) for k in split_list("k", DEFAULT_K)),
        strategies=strategies or tuple(Strategy),
        n_folds=int(values.get("n_folds", 3)),
        seed=int(values.get("seed", 0)),
        provider=values.get("provider", "stub"),
        out_dir=values.get("out", "runs/out"),
        workers=int(values.get("workers", 1)),
        params=params,
    )


def make_provider(spec: str) -> EmbeddingProvider:
    """'stub', 'stub:<dim>', or a command template with {request}/{response}."""
    if spec == "stub":
        return StubProvider()
    if spec.startswith("stub:"):
        return StubProvider(dimension=int(spec.split(":", 1)[1]))
    return CommandProvider(spec)


@dataclass
class RunRecord:
    config: dict
    fold_of: dict[str, int]
    predictions: dict[str, dict[str, list[str]]]  # name -> doc id -> phrases
    aggregates: dict[str, dict[str, dict[int | None, FoldAggregate]]]
    timings: dict[str, float]
    warnings: list[str] = field(default_factory=list)
    doc_scores: dict[str, dict[str, list[MetricReport]]] = field(default_factory=dict)


def _mean_report(reports: list[MetricReport]) -> MetricReport:
    n = len(reports)
    return MetricReport(
        precision=sum(r.precision for r in reports) / n,
        recall=sum(r.recall for r in reports) / n,
        f1=sum(r.f1 for r in reports) / n,
        metric_name=reports[0].metric_name,
        k=reports[0].k,
    )


def _score_doc(doc, pred, k, provider, gold_token_cache):
    """All three metrics for one (gold, prediction-at-k) pair."""
    gold = list(doc.gold_keyphrases)
    out = [
        metrics_mod.full_match_f1(gold, pred, k),
        metrics_mod.rouge1(gold, pred, k),
    ]
    if doc.id not in gold_token_cache:
        gold_token_cache[doc.id] = provider.embed_tokens(
            metrics_mod.JOIN_SEPARATOR.join(gold)
        )
    pred_tokens = provider.embed_tokens(metrics_mod.JOIN_SEPARATOR.join(pred))
    out.append(metrics_mod.bertscore(gold_token_cache[doc.id], pred_tokens, k))
    return out


def _aggregate(per_doc_reports, fold_of, n_folds):
    """per_doc_reports: doc id -> list[MetricReport] -> nested FoldAggregates."""
    grouped: dict[tuple, dict[int, list[MetricReport]]] = {}
    for doc_id, reports in per_doc_reports.items():
        for r in reports:
            grouped.setdefault((r.metric_name, r.k), {}).setdefault(
                fold_of[doc_id], []
            ).append(r)
    out: dict[str, dict[int | None, FoldAggregate]] = {}
    for (metric_name, k), folds in grouped.items():
        fold_means = [
            _mean_report(folds[f]) for f in range(n_folds) if f in folds
        ]
        out.setdefault(metric_name, {})[k] = aggregate_folds(fold_means)
    return out


def kea_fold_models(docs, fold_assignment: FoldAssignment, df, n_bins: int):
    """One model per fold, trained on every document outside that fold.

    Returns {fold: (model, train_ids)}; the train id sets are kept so fold
    hygiene is auditable.
    """
    out = {}
    for f in range(fold_assignment.n_folds):
        train = [d for d in docs if fold_assignment.assignment[d.id] != f]
        out[f] = (kea_train(train, df, n_bins), frozenset(d.id for d in train))
    return out


def _rank_documents(name, docs, fold_assignment, df, provider, config):
    """Ranked lists per document for one extractor, honoring KEA's folds."""
    params = config.params

    def p(key, default):
        return params.get(f"{name}.{key}", default)

    if name == "kea":
        by_fold = kea_fold_models(docs, fold_assignment, df, int(p("n_bins", 5)))
        return {
            d.id: kea_rank(by_fold[fold_assignment.assignment[d.id]][0], d, df)
            for d in docs
        }

    if name == "tfidf":
        rank = lambda d: tfidf_rank(d, df)
    elif name == "topicrank":
        rank = lambda d: topicrank(
            d, damping=p("damping", 0.85), cluster_threshold=p("cluster_threshold", 0.25)
        )
    elif name == "yake":
        rank = lambda d: yake(d, window=int(p("window", 1)))
    elif name == "embedrank":
        rank = lambda d: embed_rank(d, provider)
    else:
        raise UsageError(f"unknown extractor {name!r}")

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            ranked = list(pool.map(rank, docs))
        return {d.id: r for d, r in zip(docs, ranked)}
    return {d.id: rank(d) for d in docs}


def extract_baselines(config: ExperimentConfig) -> RunRecord:
    """Run the configured extractors; predictions hold the top max(k) phrases.

    top_k's dedupe order makes smaller cutoffs prefixes of larger ones, so
    scoring later slices these lists.
    """
    docs = corpus_mod.load_documents(config.corpus_path)
    if not docs:
        raise DataError(f"corpus {config.corpus_path} is empty")
    fold_assignment = corpus_mod.make_folds(docs, config.n_folds, config.seed)
    df = build_df(docs)
    provider = make_provider(config.provider)
    max_k = max(config.k_values)

    predictions: dict[str, dict[str, list[str]]] = {}
    timings = {}
    completed = []
    for name in config.extractors:
        started = time.perf_counter()
        try:
            ranked_by_id = _rank_documents(name, docs, fold_assignment, df, provider, config)
        except ProviderError as exc:
            raise ProviderError(
                f"extractor {name!r} failed: {exc}; completed extractors: {completed}"
            ) from exc
        predictions[name] = {d.id: top_k(ranked_by_id[d.id], max_k) for d in docs}
        timings[name] = time.perf_counter() - started
        completed.append(name)

    return RunRecord(
        config=config.snapshot(),
        fold_of=dict(fold_assignment.assignment),
        predictions=predictions,
        aggregates={},
        timings=timings,
    )


def score_extraction(config: ExperimentConfig, record: RunRecord) -> RunRecord:
    """Score stored extractor predictions at every configured k."""
    docs = corpus_mod.load_documents(config.corpus_path)
    by_id = {d.id: d for d in docs}
    provider = make_provider(config.provider)
    for name, preds in record.predictions.items():
        missing = sorted(set(preds) - set(by_id))
        if missing:
            raise DataError(f"prediction ids not in corpus: {missing[:5]}")
        gold_token_cache: dict[str, list] = {}
        per_doc: dict[str, list[MetricReport]] = {}
        for doc_id, phrases in preds.items():
            doc = by_id[doc_id]
            reports = []
            for k in config.k_values:
                reports.extend(_score_doc(doc, phrases[:k], k, provider, gold_token_cache))
            per_doc[doc_id] = reports
        record.doc_scores[name] = per_doc
        record.aggregates[name] = _aggregate(per_doc, record.fold_of, config.n_folds)
    return record


def run_baselines(config: ExperimentConfig) -> RunRecord:
    """Extract with every configured baseline and score at every k."""
    return score_extraction(config, extract_baselines(config))


def load_predictions(path: str | Path) -> dict[str, list[str]]:
    """Read {id, keyphrases} records."""
    out = {}
    with open(path, encoding="utf-8") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                rec = json.loads(line)
                doc_id = rec["id"]
                phrases = rec["keyphrases"]
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ParseError(f"bad prediction record ({exc})", line_number) from None
            if not isinstance(phrases, list) or any(not isinstance(p, str) for p in phrases):
                raise ParseError("keyphrases must be a list of strings", line_number)
            if doc_id in out:
                raise ParseError(f"duplicate prediction id {doc_id!r}", line_number)
            out[doc_id] = phrases
    return out


def run_generation_eval(config: ExperimentConfig, predictions_path: str | Path,
                        name: str = "generation") -> RunRecord:
    """Score a generated predictions file over the full set (no k cutoff)."""
    docs = corpus_mod.load_documents(config.corpus_path)
    if not docs:
        raise DataError(f"corpus {config.corpus_path} is empty")
    preds = load_predictions(predictions_path)
    known = {d.id for d in docs}
    unknown = sorted(set(preds) - known)
    if unknown:
        raise DataError(f"prediction ids not in corpus: {unknown[:5]}")
    warnings = []
    missing = [d.id for d in docs if d.id not in preds]
    for doc_id in missing:
        warnings.append(f"no prediction for document {doc_id!r}; scored as empty")

    fold_assignment = corpus_mod.make_folds(docs, config.n_folds, config.seed)
    provider = make_provider(config.provider)
    gold_token_cache: dict[str, list] = {}
    per_doc = {}
    predictions = {}
    for doc in docs:
        pred = preds.get(doc.id, [])
        predictions[doc.id] = pred
        per_doc[doc.id] = _score_doc(doc, pred, None, provider, gold_token_cache)
    aggregates = {name: _aggregate(per_doc, fold_assignment.assignment, config.n_folds)}
    return RunRecord(
        config=config.snapshot(),
        fold_of=dict(fold_assignment.assignment),
        predictions={name: predictions},
        aggregates=aggregates,
        timings={},
        warnings=warnings,
        doc_scores={name: per_doc},
    )


def corpus_has_absent(docs: list[Document]) -> bool:
    return any(
        corpus_mod.absent_fraction(d) > 0 for d in docs if d.gold_keyphrases
    )


def applicable_strategies(docs: list[Document], strategies) -> tuple[list, list]:
    """Split strategies into (applicable, auto-disabled) for this corpus.

    Appear-Post and the control-code strategies are skipped, not errored,
    when the corpus has no absent keyphrases.
    """
    if corpus_has_absent(docs):
        return list(strategies), []
    skip = {Strategy.APPEAR_POST, Strategy.APPEAR_PRE_CC, Strategy.APPEAR_POST_CC}
    return [s for s in strategies if s not in skip], [s for s in strategies if s in skip]


# ---------------------------------------------------------------------------
# emission

_TABLE_HEADER = f"{'name':<12} {'metric':<10} {'k':>4} {'precision':>10} {'recall':>10} {'f1':>10}"


def format_tables(record: RunRecord) -> str:
    """Fixed-column text table of the fold-mean scores."""
    lines = [_TABLE_HEADER, "-" * len(_TABLE_HEADER)]
    for name in sorted(record.aggregates):
        by_metric = record.aggregates[name]
        for metric_name in metrics_mod.METRIC_NAMES:
            if metric_name not in by_metric:
                continue
            for k in sorted(by_metric[metric_name], key=lambda x: (x is None, x)):
                agg = by_metric[metric_name][k]
                m = agg.mean
                k_str = "-" if k is None else str(k)
                lines.append(
                    f"{name:<12} {metric_name:<10} {k_str:>4} "
                    f"{m.precision:>10.6f} {m.recall:>10.6f} {m.f1:>10.6f}"
                )
    return "\n".join(lines) + "\n"


def result_records(record: RunRecord) -> list[dict]:
    """Machine-readable rows: one per fold plus one mean row per metric/k."""
    rows = []
    for name in sorted(record.aggregates):
        for metric_name in metrics_mod.METRIC_NAMES:
            if metric_name not in record.aggregates[name]:
                continue
            for k in sorted(record.aggregates[name][metric_name], key=lambda x: (x is None, x)):
                agg = record.aggregates[name][metric_name][k]
                for fold, r in enumerate(agg.per_fold):
                    rows.append(
                        {"name": name, "metric": metric_name, "k": k, "fold": fold,
                         "precision": r.precision, "recall": r.recall, "f1": r.f1}
                    )
                m = agg.mean
                rows.append(
                    {"name": name, "metric": metric_name, "k": k, "fold": "mean",
                     "precision": m.precision, "recall": m.recall, "f1": m.f1}
                )
    return rows


def emit_tables(record: RunRecord, out_dir: str | Path) -> list[Path]:
    """Write tables.txt, records.jsonl, predictions.jsonl, config.json, timings.jsonl."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    tables = out / "tables.txt"
    tables.write_text(format_tables(record), encoding="utf-8")
    written.append(tables)

    records_path = out / "records.jsonl"
    with open(records_path, "w", encoding="utf-8") as f:
        for row in result_records(record):
            f.write(json.dumps(row, sort_keys=True) + "\n")
    written.append(records_path)

    pred_path = out / "predictions.jsonl"
    with open(pred_path, "w", encoding="utf-8") as f:
        for name in sorted(record.predictions):
            for doc_id in sorted(record.predictions[name]):
                f.write(
                    json.dumps(
                        {"id": doc_id, "name": name,
                         "keyphrases": record.predictions[name][doc_id]},
                        sort_keys=True, ensure_ascii=False,
                    )
                    + "\n"
                )
    written.append(pred_path)

    if record.doc_scores:
        scores_path = out / "scores.jsonl"
        with open(scores_path, "w", encoding="utf-8") as f:
            for name in sorted(record.doc_scores):
                for doc_id in sorted(record.doc_scores[name]):
                    for r in record.doc_scores[name][doc_id]:
                        f.write(
                            json.dumps(
                                {"id": doc_id, "name": name, "metric": r.metric_name,
                                 "k": r.k, "precision": r.precision,
                                 "recall": r.recall, "f1": r.f1},
                                sort_keys=True,
                            )
                            + "\n"
                        )
        written.append(scores_path)

    config_path = out / "config.json"
    config_path.write_text(
        json.dumps(record.config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(config_path)

    if record.warnings:
        warn_path = out / "warnings.txt"
        warn_path.write_text("\n".join(record.warnings) + "\n", encoding="utf-8")
        written.append(warn_path)

    growth_rows = _strategy_rows(record)
    if growth_rows is not None:
        growth_path = out / "growth.txt"
        growth_path.write_text(format_growth(growth_rows), encoding="utf-8")
        written.append(growth_path)

    # timing is environment-dependent; kept out of the deterministic files
    timings_path = out / "timings.jsonl"
    with open(timings_path, "w", encoding="utf-8") as f:
        for name in sorted(record.timings):
            f.write(json.dumps({"name": name, "seconds": record.timings[name]}) + "\n")
    written.append(timings_path)
    return written


def _strategy_rows(record: RunRecord) -> list[dict] | None:
    """Per-strategy fullmatch scores when the record holds strategy runs.

    Systems scored under strategy names (via eval-gen --name) yield a
    growth table against the no-sort row; anything else yields none.
    """
    values = {s.value for s in Strategy}
    rows = []
    for name, by_metric in record.aggregates.items():
        if name in values and metrics_mod.FULLMATCH in by_metric:
            by_k = by_metric[metrics_mod.FULLMATCH]
            k = None if None in by_k else sorted(by_k, key=str)[0]
            rows.append({"strategy": name, "score": by_k[k].mean.f1})
    if len(rows) >= 2 and any(r["strategy"] == Strategy.NO_SORT.value for r in rows):
        return sorted(rows, key=lambda r: r["strategy"])
    return None


def format_growth(rows: list[dict], disabled: list[str] = ()) -> str:
    """Growth table versus the no-sort baseline.

    rows: {strategy, score} records, one of them no-sort; strategies in
    `disabled` are listed as not applicable.
    """
    by_strategy = {}
    for row in rows:
        try:
            strategy = Strategy(row["strategy"])
        except (KeyError, ValueError) as exc:
            raise DataError(f"bad growth record {row!r}: {exc}") from None
        if "score" not in row:
            raise DataError(f"growth record missing score: {row!r}")
        by_strategy[strategy] = float(row["score"])
    if Strategy.NO_SORT not in by_strategy:
        raise DataError("growth needs a no-sort baseline row")
    r_nosort = by_strategy[Strategy.NO_SORT]
    header = f"{'strategy':<16} {'score':>10} {'no-sort':>10} {'growth':>10}"
    lines = [header, "-" * len(header)]
    disabled_set = {Strategy(s) for s in disabled}
    for strategy in Strategy:
        if strategy is Strategy.NO_SORT:
            continue
        if strategy in disabled_set or strategy not in by_strategy:
            mark = "n/a (no absent keyphrases)" if strategy in disabled_set else "n/a"
            lines.append(f"{strategy.value:<16} {mark:>10} {r_nosort:>10.6f} {'n/a':>10}")
            continue
        g = metrics_mod.performance_growth(by_strategy[strategy], r_nosort, strategy)
        lines.append(
            f"{strategy.value:<16} {g.r_strategy:>10.6f} {g.r_nosort:>10.6f} "
            f"{g.growth:>+10.4%}"
        )
    return "\n".join(lines) + "\n"
