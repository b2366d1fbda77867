"""Keyphrase extraction baselines, ordering strategies and generation metrics."""

__version__ = "0.1.0"
