"""Seq2seq fine-tuning, generation and embedding provider for kpgen file formats."""

__version__ = "0.1.0"
