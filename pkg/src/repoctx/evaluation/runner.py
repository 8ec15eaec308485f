"""Run a completion strategy over a dataset and aggregate the metrics."""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from ..config import Config
from ..context import PointError, function_body_text
from ..index import RepoIndex, RepoIOError, build_repo_index
from ..llm import BackendConfig, BackendError, make_backend
from ..pipeline import complete_function
from ..prompt import Budget, BudgetError, Strategy
from ..syntax import LexError, ParseError
from .dataset import EvalTask
from .metrics import codebleu, exact_match, syntax_match

log = logging.getLogger(__name__)

TASK_ERRORS = (BackendError, PointError, BudgetError, RepoIOError, LexError, ParseError)


@dataclass(frozen=True)
class TaskResult:
    task: int
    module: str
    function: str
    em: float
    codebleu: float
    syntax_match: float
    error: str | None = None


@dataclass(frozen=True)
class MetricsReport:
    strategy: str
    task_count: int
    em_percent: float
    codebleu_percent: float
    syntax_match_percent: float
    errors: int = 0
    rows: tuple[TaskResult, ...] = ()

    def to_json(self) -> dict:
        return {"strategy": self.strategy, "n": self.task_count, "em": self.em_percent,
                "codebleu": self.codebleu_percent, "syntax_match": self.syntax_match_percent,
                "errors": self.errors}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"


def _run_task(n: int, task: EvalTask, strategy: Strategy, backend, config: Config,
              indexes: dict[Path, RepoIndex]) -> tuple[TaskResult, dict]:
    trace = {"task": n, "repo": str(task.repo), "module": task.module, "function": task.function,
             "strategy": strategy.value, "prompt": None, "completions": [], "diagnostics": [],
             "final": None, "scores": None, "error": None}
    try:
        index = indexes[Path(task.repo).resolve()]
        if isinstance(index, Exception):
            raise index
        result = complete_function(index, task.module, task.function, strategy, backend, config)
    except TASK_ERRORS as exc:
        where = f" (iteration {exc.iteration})" if getattr(exc, "iteration", None) is not None else ""
        msg = f"{type(exc).__name__}: {exc}{where}"
        log.warning("task %d (%s.%s) failed: %s", n, task.module, task.function, msg)
        trace["error"] = msg
        trace["scores"] = {"em": 0.0, "codebleu": 0.0, "syntax_match": 0.0}
        return TaskResult(n, task.module, task.function, 0.0, 0.0, 0.0, msg), trace
    pred = result.completion
    gold = task.gold_body
    scores = {"em": float(exact_match(pred, gold)), "codebleu": codebleu(pred, gold, config.codebleu_weights),
              "syntax_match": syntax_match(pred, gold)}
    trace["prompt"] = result.plan.realized
    trace["completions"] = result.completions
    if result.trace is not None:
        trace["diagnostics"] = [[d.render() for d in it.diagnostics] for it in result.trace.iterations]
        trace["refine_prompts"] = [it.prompt_used for it in result.trace.iterations]
    trace["final"] = pred
    trace["scores"] = scores
    return TaskResult(n, task.module, task.function, scores["em"], scores["codebleu"],
                      scores["syntax_match"]), trace


def run_eval(dataset, strategy, backend=None, budget: Budget | None = None,
             max_iters: int | None = None, config: Config | None = None,
             trace_path=None, workers: int | None = None) -> MetricsReport:
    """Complete every task with *strategy* and average EM, CodeBLEU and syntax match.

    *backend* may be a BackendConfig or any object with ``complete(prompt)``.
    Failed tasks score 0 and are counted in ``errors``; the per-task trace is
    written as JSONL to *trace_path* in task order.
    """
    tasks = list(dataset)
    if not tasks:
        raise ValueError("no tasks")
    strategy = Strategy(strategy)
    config = config or Config()
    if isinstance(backend, BackendConfig):
        config = replace(config, backend=backend)
        backend = None
    if budget is not None:
        config = replace(config, budget=budget)
    if max_iters is not None:
        config = replace(config, max_refine_iters=max_iters)
    backend = backend if backend is not None else make_backend(config.backend)

    indexes: dict[Path, RepoIndex | Exception] = {}
    for task in tasks:
        key = Path(task.repo).resolve()
        if key not in indexes:
            try:
                indexes[key] = build_repo_index(key, config.ignore)
            except RepoIOError as exc:
                indexes[key] = exc

    n_workers = max(1, workers if workers is not None else config.workers)
    if n_workers == 1:
        outcomes = [_run_task(n, t, strategy, backend, config, indexes) for n, t in enumerate(tasks)]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            outcomes = list(pool.map(lambda nt: _run_task(nt[0], nt[1], strategy, backend, config, indexes),
                                     enumerate(tasks)))

    rows = tuple(r for r, _ in outcomes)
    if trace_path is not None:
        with Path(trace_path).open("w", encoding="utf-8") as fh:
            fh.writelines(json.dumps(trace) + "\n" for _, trace in outcomes)
    count = len(rows)
    return MetricsReport(
        strategy=strategy.value,
        task_count=count,
        em_percent=100.0 * sum(r.em for r in rows) / count,
        codebleu_percent=100.0 * sum(r.codebleu for r in rows) / count,
        syntax_match_percent=100.0 * sum(r.syntax_match for r in rows) / count,
        errors=sum(r.error is not None for r in rows),
        rows=rows,
    )


def gold_body_from_repo(index: RepoIndex, module: str, function: str) -> str:
    """The current body text of a function, used when building datasets from a repo."""
    fn = index.function(module, function)
    if fn is None:
        raise PointError(f"no function {function!r} in module {module!r}")
    return function_body_text(index.sources[module], fn)
