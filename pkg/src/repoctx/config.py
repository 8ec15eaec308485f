"""JSON run configuration with strict key checking."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .context import RelevanceWeights
from .evaluation.metrics import CodeBleuWeights
from .index import DEFAULT_IGNORE
from .llm import DEFAULT_API_KEY_ENV, BackendConfig, MockScript
from .prompt import Budget


class ConfigError(ValueError):
    """Invalid or unknown configuration entry."""


@dataclass(frozen=True)
class Config:
    backend: BackendConfig = field(default_factory=BackendConfig)
    budget: Budget = field(default_factory=lambda: Budget(16000, 2000))
    chars_per_token: float = 4.0
    max_refine_iters: int = 2
    relevance_weights: RelevanceWeights = field(default_factory=RelevanceWeights)
    max_class_members: int = 10
    rag_k: int = 3
    rag_chunk_lines: int = 12
    codebleu_weights: CodeBleuWeights = field(default_factory=CodeBleuWeights)
    ignore: tuple[str, ...] = DEFAULT_IGNORE
    workers: int = 1


_TOP_KEYS = {"backend", "budget", "max_refine_iters", "relevance_weights", "max_class_members",
             "rag", "codebleu_weights", "ignore", "workers"}
_BACKEND_KEYS = {"kind", "endpoint", "model", "temperature", "timeout", "api_key_env", "mock_script"}
_BUDGET_KEYS = {"max_chars", "max_tokens", "reserved_for_prefix", "chars_per_token"}
_WEIGHT_KEYS = {"target", "user_defined", "file"}
_RAG_KEYS = {"k", "chunk_lines"}
_CB_KEYS = {"ngram", "weighted_ngram", "syntax", "dataflow"}


def _check_keys(section: str, data, allowed: set[str]) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected an object")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{section}: unknown key(s) {', '.join(unknown)}")
    return data


def _number(section: str, key: str, value, positive: bool = True, integer: bool = False):
    ok = isinstance(value, int) if integer else isinstance(value, (int, float))
    if not ok or isinstance(value, bool):
        raise ConfigError(f"{section}.{key}: expected {'an integer' if integer else 'a number'}")
    if positive and value <= 0:
        raise ConfigError(f"{section}.{key}: must be positive")
    if value < 0:
        raise ConfigError(f"{section}.{key}: must be non-negative")
    return value


def _backend(data, base_dir: Path) -> BackendConfig:
    data = _check_keys("backend", data, _BACKEND_KEYS)
    kwargs: dict = {}
    if "kind" in data:
        kwargs["kind"] = data["kind"]
    for key in ("endpoint", "model"):
        if key in data:
            if not isinstance(data[key], str):
                raise ConfigError(f"backend.{key}: expected a string")
            kwargs[key] = data[key]
    if "temperature" in data:
        kwargs["temperature"] = float(_number("backend", "temperature", data["temperature"], positive=False))
    if "timeout" in data:
        kwargs["timeout"] = float(_number("backend", "timeout", data["timeout"]))
    if "api_key_env" in data:
        env = data["api_key_env"]
        if env is not None and not isinstance(env, str):
            raise ConfigError("backend.api_key_env: expected a string or null")
        kwargs["api_key_env"] = env
    if "mock_script" in data:
        script = data["mock_script"]
        try:
            if isinstance(script, str):
                path = Path(script)
                kwargs["mock_script"] = MockScript.load(path if path.is_absolute() else base_dir / path)
            else:
                kwargs["mock_script"] = MockScript.from_json(script)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"backend.mock_script: {exc}") from exc
    try:
        return BackendConfig(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"backend: {exc}") from exc


def config_from_json(data, base_dir=".") -> Config:
    """Build a Config from parsed JSON; relative paths resolve against *base_dir*."""
    base_dir = Path(base_dir)
    data = _check_keys("config", data, _TOP_KEYS)
    kwargs: dict = {}
    if "backend" in data:
        kwargs["backend"] = _backend(data["backend"], base_dir)
    if "budget" in data:
        b = _check_keys("budget", data["budget"], _BUDGET_KEYS)
        cpt = float(_number("budget", "chars_per_token", b.get("chars_per_token", 4.0)))
        if "max_chars" in b and "max_tokens" in b:
            raise ConfigError("budget: give max_chars or max_tokens, not both")
        if "max_tokens" in b:
            max_chars = int(_number("budget", "max_tokens", b["max_tokens"], integer=True) * cpt)
        else:
            max_chars = _number("budget", "max_chars", b.get("max_chars", 16000), integer=True)
        reserved = _number("budget", "reserved_for_prefix", b.get("reserved_for_prefix", 2000),
                           positive=False, integer=True)
        try:
            kwargs["budget"] = Budget(max_chars, reserved)
        except ValueError as exc:
            raise ConfigError(f"budget: {exc}") from exc
        kwargs["chars_per_token"] = cpt
    if "max_refine_iters" in data:
        kwargs["max_refine_iters"] = _number("config", "max_refine_iters", data["max_refine_iters"],
                                             positive=False, integer=True)
    if "relevance_weights" in data:
        w = _check_keys("relevance_weights", data["relevance_weights"], _WEIGHT_KEYS)
        kwargs["relevance_weights"] = RelevanceWeights(
            **{k: float(_number("relevance_weights", k, v, positive=False)) for k, v in w.items()})
    if "max_class_members" in data:
        kwargs["max_class_members"] = _number("config", "max_class_members", data["max_class_members"],
                                              integer=True)
    if "rag" in data:
        r = _check_keys("rag", data["rag"], _RAG_KEYS)
        if "k" in r:
            kwargs["rag_k"] = _number("rag", "k", r["k"], integer=True)
        if "chunk_lines" in r:
            kwargs["rag_chunk_lines"] = _number("rag", "chunk_lines", r["chunk_lines"], integer=True)
    if "codebleu_weights" in data:
        c = _check_keys("codebleu_weights", data["codebleu_weights"], _CB_KEYS)
        try:
            kwargs["codebleu_weights"] = CodeBleuWeights(
                **{k: float(_number("codebleu_weights", k, v, positive=False)) for k, v in c.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"codebleu_weights: {exc}") from exc
    if "ignore" in data:
        ig = data["ignore"]
        if not isinstance(ig, list) or not all(isinstance(x, str) for x in ig):
            raise ConfigError("ignore: expected a list of glob strings")
        kwargs["ignore"] = tuple(ig)
    if "workers" in data:
        kwargs["workers"] = _number("config", "workers", data["workers"], integer=True)
    return Config(**kwargs)


def load_config(path=None) -> Config:
    if path is None:
        return Config()
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON at line {exc.lineno}: {exc.msg}") from exc
    return config_from_json(data, path.parent)


__all__ = ["DEFAULT_API_KEY_ENV", "Config", "ConfigError", "config_from_json", "load_config"]
