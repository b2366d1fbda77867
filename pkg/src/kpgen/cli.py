"""Command-line surface.

Exit codes: 0 success, 1 usage error, 2 data error, 3 provider error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from kpgen import corpus as corpus_mod
from kpgen import harness, textproc
from kpgen.errors import DataError, KpgenError, ProviderError, UsageError
from kpgen.ordering import Strategy, build_target

_STRATEGY_CHOICES = [s.value for s in Strategy] + ["all"]


def _config_from_options(corpus, config, seed, k, provider, out, extractors=None):
    if config:
        cfg = harness.parse_config(config)
        if corpus:
            cfg.corpus_path = corpus
        if seed is not None:
            cfg.seed = seed
        if k:
            cfg.k_values = tuple(k)
        if provider:
            cfg.provider = provider
        if out:
            cfg.out_dir = out
        if extractors:
            cfg.extractors = tuple(extractors)
        return cfg
    if not corpus:
        raise UsageError("either --corpus or --config is required")
    return harness.ExperimentConfig(
        corpus_path=corpus,
        extractors=tuple(extractors) if extractors else ("tfidf",),
        k_values=tuple(k) if k else harness.DEFAULT_K,
        seed=seed if seed is not None else 0,
        provider=provider or "stub",
        out_dir=out or "runs/out",
    )


@click.group()
def cli():
    """Keyphrase extraction, target ordering and generation scoring."""


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(), help="also write machine-readable records here")
def stats(corpus, out):
    """Print dataset statistics as a fixed-column table."""
    docs = corpus_mod.load_documents(corpus)
    s = corpus_mod.compute_stats(docs)
    rows = [
        ("size", s.size, None),
        ("avg_symbols", s.avg_symbols, s.std_symbols),
        ("avg_tokens", s.avg_tokens, s.std_tokens),
        ("avg_keyphrases", s.avg_keyphrases, s.std_keyphrases),
        ("absent_pct", s.absent_pct, s.std_absent_pct),
    ]
    click.echo(f"{'field':<16} {'value':>12} {'std':>12}")
    for name, value, std in rows:
        value_str = f"{value:.4f}" if isinstance(value, float) else str(value)
        std_str = f"{std:.4f}" if std is not None else "-"
        click.echo(f"{name:<16} {value_str:>12} {std_str:>12}")
    if out:
        rec = {name: value for name, value, _ in rows}
        rec.update({f"std_{n}": s for n, _, s in rows if s is not None})
        Path(out).write_text(json.dumps(rec, sort_keys=True) + "\n", encoding="utf-8")


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--n-folds", default=3, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path())
def folds(corpus, n_folds, seed, out):
    """Assign documents to cross-validation folds."""
    docs = corpus_mod.load_documents(corpus)
    assignment = corpus_mod.make_folds(docs, n_folds, seed)
    lines = [
        json.dumps({"id": doc_id, "fold": fold})
        for doc_id, fold in sorted(assignment.assignment.items())
    ]
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command()
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
@click.option("--extractor", "extractors", multiple=True,
              type=click.Choice(harness.EXTRACTOR_NAMES))
@click.option("--seed", type=int)
@click.option("--k", multiple=True, type=int)
@click.option("--provider")
@click.option("--out", type=click.Path())
def extract(corpus, config, extractors, seed, k, provider, out):
    """Run extractors, storing per-document predictions and timings."""
    cfg = _config_from_options(corpus, config, seed, k, provider, out, extractors)
    record = harness.extract_baselines(cfg)
    written = harness.emit_tables(record, cfg.out_dir)
    click.echo(f"wrote {len(written)} files to {cfg.out_dir}")


@cli.command(name="eval-extract")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions", required=True, type=click.Path(exists=True, dir_okay=False),
              help="predictions.jsonl written by extract")
@click.option("--seed", type=int)
@click.option("--k", multiple=True, type=int)
@click.option("--provider")
@click.option("--out", type=click.Path())
def eval_extract(corpus, config, predictions, seed, k, provider, out):
    """Score stored extractor predictions at each k."""
    cfg = _config_from_options(corpus, config, seed, k, provider, out)
    docs = corpus_mod.load_documents(cfg.corpus_path)
    fold_assignment = corpus_mod.make_folds(docs, cfg.n_folds, cfg.seed)
    preds: dict[str, dict[str, list[str]]] = {}
    with open(predictions, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                rec = json.loads(line)
                preds.setdefault(rec["name"], {})[rec["id"]] = rec["keyphrases"]
    record = harness.RunRecord(
        config=cfg.snapshot(),
        fold_of=dict(fold_assignment.assignment),
        predictions=preds,
        aggregates={},
        timings={},
    )
    harness.score_extraction(cfg, record)
    harness.emit_tables(record, cfg.out_dir)
    click.echo(harness.format_tables(record), nl=False)


@cli.command()
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", type=click.Choice(_STRATEGY_CHOICES), default="all",
              show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path())
def targets(corpus, strategy, seed, out):
    """Emit training-target sequences for the chosen strategies."""
    docs = corpus_mod.load_documents(corpus)
    wanted = list(Strategy) if strategy == "all" else [Strategy(strategy)]
    applicable, disabled = harness.applicable_strategies(docs, wanted)
    for s in disabled:
        click.echo(f"note: {s.value} skipped (corpus has no absent keyphrases)", err=True)
    lines = []
    for s in applicable:
        for doc in docs:
            if not doc.gold_keyphrases:
                continue
            target = build_target(doc, s, seed)
            lines.append(json.dumps(
                {"id": doc.id, "strategy": s.value, "target": target.text},
                ensure_ascii=False,
            ))
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@cli.command(name="eval-gen")
@click.option("--corpus", type=click.Path(exists=True, dir_okay=False))
@click.option("--config", type=click.Path(exists=True, dir_okay=False))
@click.option("--predictions", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--name", default="generation", show_default=True,
              help="label for the scored system (e.g. t5-no-sort)")
@click.option("--seed", type=int)
@click.option("--provider")
@click.option("--out", type=click.Path())
def eval_gen(corpus, config, predictions, name, seed, provider, out):
    """Score generated keyphrase lists over the full set (no k cutoff)."""
    cfg = _config_from_options(corpus, config, seed, None, provider, out)
    record = harness.run_generation_eval(cfg, predictions, name=name)
    harness.emit_tables(record, cfg.out_dir)
    for w in record.warnings:
        click.echo(f"warning: {w}", err=True)
    click.echo(harness.format_tables(record), nl=False)


@cli.command()
@click.option("--records", required=True, type=click.Path(exists=True, dir_okay=False),
              help="JSONL of {strategy, score} rows including no-sort")
@click.option("--disabled", multiple=True, type=click.Choice([s.value for s in Strategy]),
              help="strategies to mark not-applicable")
@click.option("--out", type=click.Path())
def growth(records, disabled, out):
    """Growth of each strategy's score versus the no-sort baseline."""
    rows = []
    with open(records, encoding="utf-8") as f:
        for line in f:
            if line.strip():
                rows.append(json.loads(line))
    table = harness.format_growth(rows, list(disabled))
    if out:
        Path(out).write_text(table, encoding="utf-8")
    click.echo(table, nl=False)


@cli.command()
@click.argument("phrase")
def normalize(phrase):
    """Print the normalized (lowercased, stemmed) form of a phrase."""
    click.echo(textproc.normalize_phrase(phrase))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, UsageError) as exc:
        click.echo(f"usage error: {exc.format_message() if hasattr(exc, 'format_message') else exc}",
                   err=True)
        return 1
    except ProviderError as exc:
        click.echo(f"provider error: {exc}", err=True)
        return 3
    except (DataError, KpgenError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
