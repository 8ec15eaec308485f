"""Completion backends: a chat-completion HTTP client and a scripted mock."""
from __future__ import annotations

import json
import logging
import os
import re
import textwrap
from dataclasses import dataclass, field
from pathlib import Path

import httpx

log = logging.getLogger(__name__)

DEFAULT_API_KEY_ENV = "REPOCTX_API_KEY"


class BackendError(Exception):
    """Base class for completion failures."""

    iteration: int | None = None


class TransportError(BackendError):
    """Network failure, timeout, or server-side error."""


class ProtocolError(BackendError):
    """The server answered with something that is not a completion."""


class AuthError(BackendError):
    """The API key is missing or was rejected."""


@dataclass(frozen=True)
class MockRule:
    require: tuple[str, ...]
    completion: str


@dataclass(frozen=True)
class MockScript:
    rules: tuple[MockRule, ...] = ()
    fallback: str = "pass"

    def respond(self, prompt: str) -> str:
        for rule in self.rules:
            if all(s in prompt for s in rule.require):
                return rule.completion
        return self.fallback

    @classmethod
    def from_json(cls, data: dict) -> MockScript:
        if not isinstance(data, dict):
            raise ValueError("mock script must be a JSON object")
        rules = []
        for n, r in enumerate(data.get("rules", [])):
            req = r.get("require") if isinstance(r, dict) else None
            comp = r.get("completion") if isinstance(r, dict) else None
            if not isinstance(req, list) or not all(isinstance(s, str) for s in req) \
                    or not isinstance(comp, str):
                raise ValueError(f"mock rule {n} needs 'require' (list of str) and 'completion' (str)")
            rules.append(MockRule(tuple(req), comp))
        fallback = data.get("fallback", "pass")
        if not isinstance(fallback, str):
            raise ValueError("mock 'fallback' must be a string")
        return cls(tuple(rules), fallback)

    @classmethod
    def load(cls, path) -> MockScript:
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_json(self) -> dict:
        return {"rules": [{"require": list(r.require), "completion": r.completion} for r in self.rules],
                "fallback": self.fallback}


@dataclass(frozen=True)
class BackendConfig:
    kind: str = "mock"
    endpoint: str | None = None
    model: str | None = None
    temperature: float = 0.0
    timeout: float = 60.0
    api_key_env: str | None = DEFAULT_API_KEY_ENV
    mock_script: MockScript = field(default_factory=MockScript)

    def __post_init__(self):
        if self.kind not in ("http", "mock"):
            raise ValueError(f"unknown backend kind {self.kind!r}")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.kind == "http" and not (self.endpoint and self.model):
            raise ValueError("http backend requires endpoint and model")


class MockBackend:
    def __init__(self, script: MockScript):
        self.script = script

    def complete(self, prompt: str) -> str:
        return self.script.respond(prompt)


class HttpBackend:
    """Single-message chat completion over HTTP, retried once on transport errors."""

    def __init__(self, config: BackendConfig, transport: httpx.BaseTransport | None = None):
        self.config = config
        self.transport = transport

    def request_body(self, prompt: str) -> dict:
        return {
            "model": self.config.model,
            "messages": [{"role": "user", "content": prompt}],
            "temperature": self.config.temperature,
        }

    def _headers(self) -> dict:
        headers = {"Content-Type": "application/json"}
        env = self.config.api_key_env
        if env:
            key = os.environ.get(env)
            if not key:
                raise AuthError(f"environment variable {env} is not set")
            headers["Authorization"] = f"Bearer {key}"
        return headers

    def _post_once(self, body: dict, headers: dict) -> str:
        try:
            with httpx.Client(timeout=self.config.timeout, transport=self.transport) as client:
                resp = client.post(self.config.endpoint, json=body, headers=headers)
        except httpx.TransportError as exc:
            raise TransportError(f"{type(exc).__name__}: {exc}") from exc
        if resp.status_code in (401, 403):
            raise AuthError(f"server rejected credentials ({resp.status_code})")
        if resp.status_code >= 500:
            raise TransportError(f"server error {resp.status_code}")
        if resp.status_code >= 400:
            raise ProtocolError(f"request failed with status {resp.status_code}")
        try:
            content = resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise ProtocolError(f"malformed completion response: {exc!r}") from exc
        if not isinstance(content, str):
            raise ProtocolError("completion content is not a string")
        return content

    def complete(self, prompt: str) -> str:
        body = self.request_body(prompt)
        headers = self._headers()
        try:
            return self._post_once(body, headers)
        except TransportError as exc:
            log.warning("transport error, retrying once: %s", exc)
            return self._post_once(body, headers)


def make_backend(config: BackendConfig, transport: httpx.BaseTransport | None = None):
    if config.kind == "mock":
        return MockBackend(config.mock_script)
    return HttpBackend(config, transport)


def complete(prompt: str, config: BackendConfig) -> str:
    return make_backend(config).complete(prompt)


_FENCE = re.compile(r"```[^\n]*\n(.*?)(?:```|\Z)", re.DOTALL)


def clean_completion(text: str) -> str:
    """Strip a surrounding markdown fence and common indentation."""
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    m = _FENCE.search(text)
    if m:
        text = m.group(1)
    lines = [ln.rstrip() for ln in text.split("\n")]
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop()
    return textwrap.dedent("\n".join(lines))
