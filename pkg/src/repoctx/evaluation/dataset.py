"""JSONL task datasets for function-body completion."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from ..context import normalize_body

log = logging.getLogger(__name__)

MAX_BODY_LINES = 15  # exclusive bound


class FormatError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class EvalTask:
    repo: Path
    module: str
    function: str
    gold_body: str
    metadata: dict = field(default_factory=dict, compare=False)

    @property
    def body_lines(self) -> int:
        return len(normalize_body(self.gold_body).split("\n"))

    def to_json(self) -> dict:
        return {"repo": str(self.repo), "module": self.module, "function": self.function,
                "gold_body": self.gold_body}


@dataclass(frozen=True)
class Dataset:
    tasks: tuple[EvalTask, ...]
    warnings: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self):
        return iter(self.tasks)

    def __getitem__(self, i):
        return self.tasks[i]


_REQUIRED = ("repo", "module", "function", "gold_body")


def parse_task(data, line: int, base: Path | None = None) -> EvalTask:
    if not isinstance(data, dict):
        raise FormatError(line, "expected a JSON object")
    for key in _REQUIRED:
        if not isinstance(data.get(key), str):
            raise FormatError(line, f"field {key!r} must be a string")
    repo = Path(data["repo"])
    if base is not None and not repo.is_absolute():
        repo = base / repo
    meta = {k: v for k, v in data.items() if k not in _REQUIRED}
    return EvalTask(repo, data["module"], data["function"], data["gold_body"], meta)


def load_dataset(path) -> Dataset:
    """Read tasks from JSONL; relative repo paths resolve against the file's directory.

    Gold bodies of 15 or more lines are skipped with a warning.
    """
    path = Path(path)
    tasks: list[EvalTask] = []
    warnings: list[str] = []
    with path.open(encoding="utf-8") as fh:
        for n, raw in enumerate(fh, start=1):
            if not raw.strip():
                continue
            try:
                data = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise FormatError(n, f"malformed JSON: {exc.msg}") from exc
            task = parse_task(data, n, path.parent)
            if task.body_lines >= MAX_BODY_LINES:
                msg = f"line {n}: {task.module}.{task.function} has {task.body_lines} body lines (limit {MAX_BODY_LINES - 1})"
                log.warning("rejected task %s", msg)
                warnings.append(msg)
                continue
            tasks.append(task)
    return Dataset(tuple(tasks), tuple(warnings))


def write_dataset(path, tasks, relative_to: Path | None = None) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for task in tasks:
            row = task.to_json()
            if relative_to is not None:
                try:
                    row["repo"] = str(Path(task.repo).relative_to(relative_to))
                except ValueError:
                    pass
            fh.write(json.dumps(row) + "\n")
