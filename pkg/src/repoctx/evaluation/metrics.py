"""Exact match, n-gram BLEU, syntax match, dataflow match and their CodeBLEU mix."""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

from ..syntax import (
    IDENTIFIER,
    KEYWORD,
    KEYWORDS,
    LAYOUT_KINDS,
    OPERATOR,
    PUNCT,
    LexError,
    ParseError,
    Stmt,
    _depth0,
    normalize_newlines,
    parse_block,
    tokenize,
)

KEYWORD_WEIGHT = 4.0
_FALLBACK_TOKEN = re.compile(r"\w+|[^\w\s]")


@dataclass(frozen=True)
class CodeBleuWeights:
    ngram: float = 0.25
    weighted_ngram: float = 0.25
    syntax: float = 0.25
    dataflow: float = 0.25

    def __post_init__(self):
        parts = (self.ngram, self.weighted_ngram, self.syntax, self.dataflow)
        if any(w < 0 for w in parts) or not math.isclose(sum(parts), 1.0):
            raise ValueError("CodeBLEU weights must be non-negative and sum to 1")


# ---------------------------------------------------------------------------
# Exact match


def normalize_code(text: str) -> str:
    lines = [ln.rstrip() for ln in normalize_newlines(text).split("\n")]
    while lines and not lines[0]:
        lines.pop(0)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines)


def exact_match(pred: str, gold: str) -> int:
    return int(normalize_code(pred) == normalize_code(gold))


# ---------------------------------------------------------------------------
# N-gram BLEU


def code_tokens(text: str) -> list[str]:
    """Token texts without comments or layout; regex split when lexing fails."""
    try:
        return [t.text for t in tokenize(text) if t.kind not in LAYOUT_KINDS]
    except LexError:
        return _FALLBACK_TOKEN.findall(text)


def _ngrams(tokens, n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _brevity(pred_len: int, gold_len: int) -> float:
    if pred_len == 0:
        return 0.0
    return min(1.0, math.exp(1 - gold_len / pred_len))


def _smoothed(matched: float, total: float) -> float:
    if matched == 0:
        return 1.0 / (total + 1.0)
    return matched / total


def ngram_bleu(pred, gold, max_n: int = 4, weights=None) -> float:
    """BLEU with add-one smoothing on zero match counts.

    *weights* optionally maps a token text to its unigram weight.
    """
    pred = list(pred)
    gold = list(gold)
    if not pred:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        p_counts = _ngrams(pred, n)
        g_counts = _ngrams(gold, n)
        if n == 1 and weights is not None:
            total = sum(c * weights(g[0]) for g, c in p_counts.items())
            matched = sum(min(c, g_counts[g]) * weights(g[0]) for g, c in p_counts.items())
        else:
            total = sum(p_counts.values())
            matched = sum(min(c, g_counts[g]) for g, c in p_counts.items())
        log_sum += math.log(_smoothed(matched, total))
    return _brevity(len(pred), len(gold)) * math.exp(log_sum / max_n)


def keyword_weight(token: str) -> float:
    return KEYWORD_WEIGHT if token in KEYWORDS else 1.0


def weighted_ngram_bleu(pred, gold, max_n: int = 4) -> float:
    return ngram_bleu(pred, gold, max_n, weights=keyword_weight)


# ---------------------------------------------------------------------------
# Syntax match


@dataclass(frozen=True)
class Node:
    label: str
    children: tuple[Node, ...] = ()

    def sexp(self) -> str:
        if not self.children:
            return repr(self.label)
        return f"({self.label} {' '.join(c.sexp() for c in self.children)})"


def _leaves(tokens) -> list[Node]:
    toks = [t for t in tokens if t.kind not in LAYOUT_KINDS]
    out = []
    i = 0
    while i < len(toks):
        tok = toks[i]
        if tok.kind == IDENTIFIER:
            parts = [tok.text]
            j = i + 1
            while j + 1 < len(toks) and toks[j].text == "." and toks[j + 1].kind == IDENTIFIER:
                parts.append(toks[j + 1].text)
                j += 2
            out.append(Node(".".join(parts)))
            i = j
        else:
            out.append(Node(tok.text))
            i += 1
    return out


def _stmt_node(stmt: Stmt) -> Node:
    return Node(stmt.kind, tuple(_leaves(stmt.tokens)) + tuple(_stmt_node(s) for s in stmt.body))


def body_tree(text: str) -> Node | None:
    """Statement-level tree of a function body, or None when it does not parse."""
    if not normalize_code(text):
        return None
    try:
        stmts = parse_block(tokenize(text))
    except (LexError, ParseError):
        return None
    return Node("body", tuple(_stmt_node(s) for s in stmts))


def subtrees(node: Node) -> list[Node]:
    out = [node]
    for child in node.children:
        out.extend(subtrees(child))
    return out


def syntax_match(pred: str, gold: str) -> float:
    """Fraction of gold subtrees (leaves included) that occur anywhere in pred."""
    gold_tree = body_tree(gold)
    if gold_tree is None:
        return 1.0 if body_tree(pred) is None else 0.0
    pred_tree = body_tree(pred)
    if pred_tree is None:
        return 0.0
    present = {n.sexp() for n in subtrees(pred_tree)}
    gold_nodes = subtrees(gold_tree)
    return sum(n.sexp() in present for n in gold_nodes) / len(gold_nodes)


# ---------------------------------------------------------------------------
# Dataflow match


def _def_use(stmt: Stmt, defs: list, uses: list) -> None:
    """Collect (name, line, col) definitions and uses of one statement header."""
    toks = [t for t in stmt.tokens if t.kind not in LAYOUT_KINDS]
    kind = stmt.kind
    if kind in ("import", "from", "global", "nonlocal"):
        return
    if not toks:
        return
    store_ranges: list[tuple[int, int]] = []
    both_ranges: list[tuple[int, int]] = []
    skip: set[int] = set()
    walrus: set[int] = set()
    top = _depth0(toks)
    if kind == "assign":
        eqs = [i for i, t in top if t.kind == OPERATOR and t.text == "="]
        start = 0
        for e in eqs:
            store_ranges.append((start, e))
            start = e + 1
    elif kind == "annassign":
        colon = next(i for i, t in top if t.text == ":")
        store_ranges.append((0, colon))
    elif kind == "augassign":
        op = next(i for i, t in top if t.kind == OPERATOR and t.text.endswith("="))
        both_ranges.append((0, op))
    elif kind == "for":
        first = 2 if toks[0].text == "async" else 1
        in_idx = next((i for i, t in top if t.text == "in"), None)
        if in_idx is not None:
            store_ranges.append((first, in_idx))
    elif kind in ("def", "class"):
        head = 2 if toks[0].text == "async" else 1
        skip.add(head)
        if kind == "def":
            _skip_params(toks, head + 1, skip)
    elif kind == "except":
        for i, t in top:
            if t.text == "as" and i + 1 < len(toks):
                skip.add(i + 1)
    # expression-level stores: with/comprehension targets, walrus, lambda params
    _expression_stores(toks, store_ranges, skip, walrus)

    def in_ranges(i, ranges):
        return any(a <= i < b for a, b in ranges)

    stack: list[str] = []
    for i, t in enumerate(toks):
        if t.kind == PUNCT and t.text in "([{":
            prev = toks[i - 1] if i else None
            sub = prev is not None and (prev.kind in (IDENTIFIER, "string") or prev.text in (")", "]", "}"))
            stack.append("sub" if sub else "group")
            continue
        if t.kind == PUNCT and t.text in ")]}":
            if stack:
                stack.pop()
            continue
        if t.kind != IDENTIFIER or i in skip:
            continue
        prev = toks[i - 1] if i else None
        if prev is not None and prev.text == ".":
            continue
        nxt = toks[i + 1] if i + 1 < len(toks) else None
        if nxt is not None and nxt.kind == OPERATOR and nxt.text == "=" and stack and stack[-1] == "sub" \
                and prev is not None and prev.text in ("(", ","):
            continue  # keyword argument name
        plain = "sub" not in stack and not (nxt is not None and nxt.text in (".", "[", "("))
        rec = (t.text, t.line, t.col)
        if i in walrus:
            defs.append(rec)
            continue
        if plain and kind == "del":
            continue
        if plain and in_ranges(i, store_ranges):
            defs.append(rec)
        elif plain and in_ranges(i, both_ranges):
            uses.append(rec)
            defs.append(rec)
        else:
            uses.append(rec)


def _skip_params(toks, open_idx: int, skip: set[int]) -> None:
    depth = 0
    expect = True
    for i in range(open_idx, len(toks)):
        t = toks[i]
        if t.kind == PUNCT and t.text in "([{":
            depth += 1
            if depth == 1:
                continue
        elif t.kind == PUNCT and t.text in ")]}":
            depth -= 1
            if depth == 0:
                return
        if depth != 1:
            continue
        if t.text == ",":
            expect = True
        elif t.kind == IDENTIFIER and expect:
            skip.add(i)
            expect = False
        elif t.text not in ("*", "**", "/"):
            expect = False


def _expression_stores(toks, store_ranges, skip, walrus) -> None:
    n = len(toks)
    for i, t in enumerate(toks):
        if t.kind == KEYWORD and t.text == "for" and i > 0:
            # comprehension targets are scoped to the comprehension
            j = i + 1
            while j < n and toks[j].text != "in":
                if toks[j].kind == IDENTIFIER:
                    skip.add(j)
                j += 1
        elif t.kind == KEYWORD and t.text == "as" and toks[0].text in ("with", "async"):
            j = i + 1
            depth = 0
            while j < n:
                x = toks[j]
                if x.text in "([{" and x.kind == PUNCT:
                    depth += 1
                elif x.text in ")]}" and x.kind == PUNCT:
                    depth -= 1
                elif depth == 0 and x.text in (",", ":"):
                    break
                j += 1
            store_ranges.append((i + 1, j))
        elif t.kind == OPERATOR and t.text == ":=" and i > 0:
            walrus.add(i - 1)
        elif t.kind == KEYWORD and t.text == "lambda":
            j = i + 1
            depth = 0
            expect = True
            while j < n and not (depth == 0 and toks[j].text == ":"):
                x = toks[j]
                if x.kind == PUNCT and x.text in "([{":
                    depth += 1
                elif x.kind == PUNCT and x.text in ")]}":
                    depth -= 1
                elif depth == 0 and x.text == ",":
                    expect = True
                elif depth == 0 and x.kind == IDENTIFIER and expect:
                    skip.add(j)
                    expect = False
                elif depth == 0 and x.text == "=":
                    expect = False
                j += 1


def dataflow_edges(text: str) -> set[tuple[str, int, int]] | None:
    """Def-use edges ``(normalized name, def line, use line)``; None if unparseable.

    A use on line j links to the latest definition of the same name on a line
    before j. Names are renamed var_0, var_1, ... in first-definition order.
    """
    try:
        stmts = parse_block(tokenize(text))
    except (LexError, ParseError):
        return None
    defs: list = []
    uses: list = []
    for stmt in stmts:
        for node in stmt.walk():
            _def_use(node, defs, uses)
    order: dict[str, str] = {}
    for name, _, _ in sorted(defs, key=lambda d: (d[1], d[2])):
        order.setdefault(name, f"var_{len(order)}")
    def_lines: dict[str, list[int]] = {}
    for name, line, _ in defs:
        def_lines.setdefault(name, []).append(line)
    edges = set()
    for name, line, _ in uses:
        earlier = [d for d in def_lines.get(name, ()) if d < line]
        if earlier:
            edges.add((order[name], max(earlier), line))
    return edges


def dataflow_match(pred: str, gold: str) -> float:
    gold_edges = dataflow_edges(gold) or set()
    if not gold_edges:
        return 1.0
    pred_edges = dataflow_edges(pred) or set()
    return len(gold_edges & pred_edges) / len(gold_edges)


# ---------------------------------------------------------------------------
# CodeBLEU


@dataclass(frozen=True)
class CodeBleuScore:
    ngram: float
    weighted_ngram: float
    syntax: float
    dataflow: float
    total: float


def codebleu_components(pred: str, gold: str, weights: CodeBleuWeights | None = None) -> CodeBleuScore:
    w = weights or CodeBleuWeights()
    p_tokens = code_tokens(pred)
    g_tokens = code_tokens(gold)
    parts = (
        ngram_bleu(p_tokens, g_tokens),
        weighted_ngram_bleu(p_tokens, g_tokens),
        syntax_match(pred, gold),
        dataflow_match(pred, gold),
    )
    total = w.ngram * parts[0] + w.weighted_ngram * parts[1] + w.syntax * parts[2] + w.dataflow * parts[3]
    return CodeBleuScore(*parts, total)


def codebleu(pred: str, gold: str, weights: CodeBleuWeights | None = None) -> float:
    return codebleu_components(pred, gold, weights).total
