"""Generated repositories for the strategy-ordering experiment and stress tests.

Every ordering task asks for a function whose correct body calls one method
of a class defined in another file. The accompanying mock backend only
answers correctly when the prompt shows that method's exact signature, so
the score of a strategy measures whether its prompt carried the signature.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from ..llm import MockRule, MockScript
from .dataset import EvalTask, write_dataset

VERBS = ("compute", "load", "merge", "render", "update", "resolve", "encode", "fetch", "apply",
         "score", "split", "flush", "pack", "probe", "scan")
NOUNS = ("total", "state", "record", "weights", "index", "batch", "token", "window", "shape",
         "budget", "ledger", "cursor", "bucket", "signal", "frame")
ROLES = ("Store", "Engine", "Registry", "Client", "Planner", "Buffer")
TYPES = ("int", "str", "float", "bool", "list")
# Repositories alternate between a single task and four sibling tasks. Sibling
# modules look alike, which is what lexical retrieval latches onto.
REPO_SIZES = (1, 4)
METHODS_PER_CLASS = 5


@dataclass(frozen=True)
class OrderingCorpus:
    root: Path
    dataset_path: Path
    script_path: Path
    config_path: Path
    tasks: tuple[EvalTask, ...]
    script: MockScript


@dataclass(frozen=True)
class _Method:
    name: str
    params: tuple[tuple[str, str], ...]
    returns: str

    @property
    def signature(self) -> str:
        params = ", ".join(["self"] + [f"{n}: {t}" for n, t in self.params])
        return f"def {self.name}({params}) -> {self.returns}"


def _method_source(m: _Method) -> list[str]:
    first = m.params[0][0]
    return [
        f"    {m.signature}:",
        f'        """{m.name.replace("_", " ").capitalize()} for the given {first}."""',
        f"        result = self._apply({first})",
        "        return result",
        "",
    ]


def _class_source(cls_name: str, methods: list[_Method]) -> str:
    lines = [f'"""{cls_name} component."""', "", "", f"class {cls_name}:",
             f'    """Holds {cls_name.lower()} data."""', "",
             "    def __init__(self, name: str):", "        self.name = name", "",
             "    def _apply(self, value):", "        return value", ""]
    for m in methods:
        lines.extend(_method_source(m))
    return "\n".join(lines).rstrip() + "\n"


def write_ordering_corpus(root, n_tasks: int = 30, seed: int = 0) -> OrderingCorpus:
    """Write repositories, a JSONL dataset, a mock script and a config under *root*."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    pairs = [(v, n) for v in VERBS for n in NOUNS]
    rng.shuffle(pairs)
    pair_iter = iter(pairs)
    tasks: list[EvalTask] = []
    rules: list[MockRule] = []
    made = 0
    r = -1
    while made < n_tasks:
        r += 1
        size = REPO_SIZES[r % len(REPO_SIZES)]
        repo = root / f"repo_{r:02d}"
        pkg = repo / "proj"
        pkg.mkdir(parents=True, exist_ok=True)
        (pkg / "__init__.py").write_text('"""Generated project."""\n', encoding="utf-8")
        (repo / "requirements.txt").write_text("requests==2.31.0\n", encoding="utf-8")
        for j in range(size):
            if made >= n_tasks:
                break
            noun = NOUNS[made % len(NOUNS)]
            cls_name = f"{noun.capitalize()}{ROLES[j % len(ROLES)]}"
            methods = []
            for _ in range(METHODS_PER_CLASS):
                verb, obj = next(pair_iter)
                n_params = rng.randint(1, 3)
                params = tuple((f"{p}_{k}", rng.choice(TYPES))
                               for k, p in enumerate(rng.sample(["value", "limit", "key", "flag", "size"],
                                                                n_params)))
                methods.append(_Method(f"{verb}_{obj}", params, rng.choice(TYPES)))
            target = methods[made % METHODS_PER_CLASS]
            model_mod = f"models_{j}"
            (pkg / f"{model_mod}.py").write_text(_class_source(cls_name, methods), encoding="utf-8")

            fn_name = f"run_{target.name}_{r}{j}"
            args = ", ".join(n for n, _ in target.params)
            fn_params = ", ".join(f"{n}: {t}" for n, t in target.params)
            gold = f"return store.{target.name}({args})"
            ops_src = "\n".join([
                f'"""Operations over {cls_name}."""',
                "import requests",
                "",
                f"from proj.{model_mod} import {cls_name}",
                "",
                "",
                f"def describe_{r}{j}(store: {cls_name}) -> str:",
                "    return store.name",
                "",
                "",
                f"def {fn_name}(store: {cls_name}, {fn_params}):",
                f"    {gold}",
                "",
            ])
            (pkg / f"ops_{j}.py").write_text(ops_src, encoding="utf-8")
            module = f"proj.ops_{j}"
            tasks.append(EvalTask(repo, module, fn_name, gold, {"method": target.signature}))
            rules.append(MockRule((f"def {fn_name}(", target.signature), gold))
            made += 1

    script = MockScript(tuple(rules), "pass")
    dataset_path = root / "dataset.jsonl"
    script_path = root / "mock.json"
    config_path = root / "config.json"
    write_dataset(dataset_path, tasks, relative_to=root)
    script_path.write_text(json.dumps(script.to_json(), indent=2) + "\n", encoding="utf-8")
    config = {"backend": {"kind": "mock", "mock_script": script_path.name},
              "budget": {"max_chars": 16000, "reserved_for_prefix": 2000}}
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    return OrderingCorpus(root, dataset_path, script_path, config_path, tuple(tasks), script)


def write_large_repo(root, n_files: int = 50, lines_per_file: int = 100, seed: int = 0) -> Path:
    """A repository of *n_files* modules with about *lines_per_file* lines each."""
    root = Path(root)
    rng = random.Random(seed)
    pkg = root / "big"
    pkg.mkdir(parents=True, exist_ok=True)
    (pkg / "__init__.py").write_text("", encoding="utf-8")
    for i in range(n_files):
        lines = [f'"""Module {i}."""', "import os", ""]
        if i:
            lines.insert(2, f"from big.mod_{i - 1:03d} import Model{i - 1}")
        base = f"(Model{i - 1})" if i else ""
        lines += ["", f"class Model{i}{base}:", f'    """Model number {i}."""', ""]
        k = 0
        while len(lines) < lines_per_file - 6:
            lines += [
                f"    def method_{k}(self, x: int, y: int = {rng.randint(0, 9)}) -> int:",
                f'        """Combine x and y ({k})."""',
                f"        total = x + y * {rng.randint(1, 9)}",
                "        if total > 10:",
                "            total -= 1",
                "        return total",
                "",
            ]
            k += 1
        lines += ["", f"def helper_{i}(m: Model{i}) -> int:", "    value = m.method_0(1)",
                  "    return value", ""]
        (pkg / f"mod_{i:03d}.py").write_text("\n".join(lines), encoding="utf-8")
    return root
