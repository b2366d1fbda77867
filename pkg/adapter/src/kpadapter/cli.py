"""Adapter command line: finetune, generate, embed-serve."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from kpadapter.data import DataFormatError
from kpadapter.spec import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_EPOCHS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MAX_SEQ_LEN,
    FinetuneSpec,
    SpecError,
)


def _read_ids(path):
    return tuple(
        line.strip() for line in Path(path).read_text(encoding="utf-8").splitlines() if line.strip()
    )


@click.group()
def cli():
    """Seq2seq fine-tuning, generation and embedding provider."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@cli.command()
@click.option("--model", "model_id", default="t5-small", show_default=True)
@click.option("--strategy", required=True, help="target strategy name, e.g. no-sort")
@click.option("--seed", default=0, show_default=True)
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--targets", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--train-ids", required=True, type=click.Path(exists=True, dir_okay=False),
              help="file with one training document id per line")
@click.option("--eval-ids", required=True, type=click.Path(exists=True, dir_okay=False),
              help="file with one held-out document id per line")
@click.option("--epochs", default=DEFAULT_EPOCHS, show_default=True)
@click.option("--batch-size", default=DEFAULT_BATCH_SIZE, show_default=True)
@click.option("--max-seq-len", default=DEFAULT_MAX_SEQ_LEN, show_default=True)
@click.option("--learning-rate", default=DEFAULT_LEARNING_RATE, show_default=True)
@click.option("--out", required=True, type=click.Path())
def finetune(model_id, strategy, seed, corpus, targets, train_ids, eval_ids,
             epochs, batch_size, max_seq_len, learning_rate, out):
    """Fine-tune a pretrained summarization model on target sequences."""
    from kpadapter.finetune import finetune as run

    spec = FinetuneSpec(
        model_id=model_id,
        strategy=strategy,
        seed=seed,
        train_ids=_read_ids(train_ids),
        eval_ids=_read_ids(eval_ids),
        epochs=epochs,
        batch_size=batch_size,
        max_seq_len=max_seq_len,
        learning_rate=learning_rate,
    )
    artifact = run(spec, corpus, targets, out)
    click.echo(f"artifact written to {artifact}")


@cli.command()
@click.option("--artifact", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--corpus", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path())
@click.option("--batch-size", default=8, show_default=True)
def generate(artifact, corpus, out, batch_size):
    """Generate keyphrase predictions for every corpus document."""
    from kpadapter.generate import generate as run

    n = run(artifact, corpus, out, batch_size=batch_size)
    click.echo(f"wrote {n} prediction records to {out}")


@cli.command(name="embed-serve")
@click.argument("request", type=click.Path(exists=True, dir_okay=False))
@click.argument("response", type=click.Path())
@click.option("--model", "model_id", default=None, help="encoder model id")
def embed_serve(request, response, model_id):
    """Serve one embedding-protocol request file."""
    from kpadapter.embed import DEFAULT_MODEL, EmbeddingServer

    server = EmbeddingServer(model_id or DEFAULT_MODEL)
    n = server.serve_file(request, response)
    click.echo(f"served {n} records", err=True)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, SpecError) as exc:
        message = exc.format_message() if hasattr(exc, "format_message") else str(exc)
        click.echo(f"usage error: {message}", err=True)
        return 1
    except (DataFormatError, OSError) as exc:
        click.echo(f"data error: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
