"""Lexical chunk retrieval used by the similarity-retrieval baseline."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .index import RepoIndex
from .syntax import KEYWORDS, normalize_newlines

_IDENT = re.compile(r"[^\W\d]\w*")


def identifier_set(text: str) -> frozenset[str]:
    return frozenset(t for t in _IDENT.findall(text) if t not in KEYWORDS)


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 0.0
    return len(a & b) / len(a | b)


@dataclass(frozen=True)
class Chunk:
    module: str
    path: str
    start_line: int
    end_line: int
    text: str
    score: float = 0.0

    @property
    def header(self) -> str:
        return f"# {self.path}:{self.start_line}-{self.end_line}"


def chunk_source(module: str, path: str, source: str, chunk_lines: int = 12) -> list[Chunk]:
    """Overlapping windows of *chunk_lines* lines with stride ceil(chunk_lines / 2)."""
    if chunk_lines < 1:
        raise ValueError("chunk_lines must be >= 1")
    lines = normalize_newlines(source).split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    stride = math.ceil(chunk_lines / 2)
    out = []
    start = 0
    while start < len(lines):
        end = min(start + chunk_lines, len(lines))
        text = "\n".join(lines[start:end])
        if text.strip():
            out.append(Chunk(module, path, start + 1, end, text))
        if end == len(lines):
            break
        start += stride
    return out


def retrieve_chunks(query: str, index: RepoIndex, exclude_module: str | None = None,
                    k: int = 3, chunk_lines: int = 12) -> list[Chunk]:
    """Top-*k* chunks from other files by identifier Jaccard similarity to *query*."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = identifier_set(query)
    scored = []
    for module in sorted(index.sources):
        if module == exclude_module:
            continue
        path = index.modules[module].path
        for chunk in chunk_source(module, path, index.sources[module], chunk_lines):
            score = jaccard(q, identifier_set(chunk.text))
            scored.append(Chunk(chunk.module, chunk.path, chunk.start_line,
                                chunk.end_line, chunk.text, score))
    scored.sort(key=lambda c: (-c.score, c.path, c.start_line))
    return scored[:k]
