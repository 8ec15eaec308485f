"""scikit-learn style wrapper: fit on a repository, predict function bodies."""
from __future__ import annotations

from dataclasses import replace
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .config import Config
from .context import CrossFileContext, prepare_point
from .evaluation.metrics import codebleu, exact_match
from .index import DEFAULT_IGNORE, RepoIndex, build_repo_index
from .llm import BackendConfig, make_backend
from .pipeline import build_context, complete_function
from .prompt import Budget, Strategy, build_prompt


def check_targets(targets) -> list[tuple[str, str]]:
    """Normalize targets to ``(module, function)`` pairs.

    Accepts pairs or ``"module:function"`` strings.
    """
    if isinstance(targets, (str, tuple)):
        targets = [targets]
    out = []
    for t in targets:
        if isinstance(t, str):
            module, sep, function = t.partition(":")
            if not sep or not module or not function:
                raise ValueError(f"target {t!r} must look like 'package.module:function'")
        else:
            try:
                module, function = t
            except (TypeError, ValueError):
                raise ValueError(f"target {t!r} must be a (module, function) pair") from None
            if not isinstance(module, str) or not isinstance(function, str):
                raise ValueError(f"target {t!r} must hold two strings")
        out.append((module, function))
    if not out:
        raise ValueError("no targets given")
    return out


class RepoCompleter(BaseEstimator):
    """Complete function bodies of one repository.

    ``fit`` indexes the repository; ``transform`` returns prompts;
    ``predict`` returns completions; ``score`` is mean CodeBLEU.
    """

    def __init__(self, strategy="ide_context", backend=None, max_chars=16000, reserved_for_prefix=2000,
                 max_refine_iters=2, rag_k=3, rag_chunk_lines=12, max_class_members=10,
                 ignore=DEFAULT_IGNORE):
        self.strategy = strategy
        self.backend = backend
        self.max_chars = max_chars
        self.reserved_for_prefix = reserved_for_prefix
        self.max_refine_iters = max_refine_iters
        self.rag_k = rag_k
        self.rag_chunk_lines = rag_chunk_lines
        self.max_class_members = max_class_members
        self.ignore = ignore

    def _make_config(self) -> Config:
        Strategy(self.strategy)
        if self.max_refine_iters < 0:
            raise ValueError("max_refine_iters must be >= 0")
        config = Config(budget=Budget(self.max_chars, self.reserved_for_prefix),
                        max_refine_iters=self.max_refine_iters, rag_k=self.rag_k,
                        rag_chunk_lines=self.rag_chunk_lines,
                        max_class_members=self.max_class_members, ignore=tuple(self.ignore))
        if isinstance(self.backend, BackendConfig):
            config = replace(config, backend=self.backend)
        return config

    def fit(self, X, y=None):
        """*X* is a repository root path or an already built RepoIndex."""
        self.config_ = self._make_config()
        if isinstance(X, RepoIndex):
            self.index_ = X
        else:
            self.index_ = build_repo_index(Path(X), self.config_.ignore)
        if self.backend is None or isinstance(self.backend, BackendConfig):
            self.backend_ = make_backend(self.config_.backend)
        else:
            self.backend_ = self.backend
        self.n_modules_ = len(self.index_.modules)
        return self

    def transform(self, X) -> list[str]:
        check_is_fitted(self, "index_")
        prompts = []
        for module, function in check_targets(X):
            if Strategy(self.strategy) is Strategy.IDE_CONTEXT:
                masked, ctx = build_context(self.index_, module, function, self.config_)
            else:
                masked, point = prepare_point(self.index_, module, function)
                ctx = CrossFileContext(point)
            plan = build_prompt(ctx, self.strategy, self.config_.budget, masked,
                                self.config_.rag_k, self.config_.rag_chunk_lines)
            prompts.append(plan.realized)
        return prompts

    def predict(self, X) -> list[str]:
        check_is_fitted(self, "index_")
        return [
            complete_function(self.index_, module, function, self.strategy, self.backend_,
                              self.config_).completion
            for module, function in check_targets(X)
        ]

    def score(self, X, y) -> float:
        """Mean CodeBLEU of the predictions against gold bodies *y*."""
        preds = self.predict(X)
        if len(preds) != len(y):
            raise ValueError(f"got {len(preds)} targets but {len(y)} gold bodies")
        return float(np.mean([codebleu(p, g) for p, g in zip(preds, y)]))

    def exact_match_rate(self, X, y) -> float:
        preds = self.predict(X)
        if len(preds) != len(y):
            raise ValueError(f"got {len(preds)} targets but {len(y)} gold bodies")
        return float(np.mean([exact_match(p, g) for p, g in zip(preds, y)]))
