"""Datasets, metrics and the experiment runner."""
from ..retrieval import Chunk, retrieve_chunks
from .dataset import Dataset, EvalTask, FormatError, load_dataset
from .metrics import (
    codebleu,
    dataflow_match,
    exact_match,
    ngram_bleu,
    syntax_match,
    weighted_ngram_bleu,
)

__all__ = [
    "Chunk", "Dataset", "EvalTask", "FormatError", "MetricsReport", "codebleu", "dataflow_match",
    "exact_match", "load_dataset", "ngram_bleu", "retrieve_chunks", "run_eval", "syntax_match",
    "weighted_ngram_bleu",
]


def __getattr__(name):
    # the runner depends on the config module, which itself needs the metrics
    if name in ("MetricsReport", "run_eval"):
        from . import runner

        return getattr(runner, name)
    raise AttributeError(name)
