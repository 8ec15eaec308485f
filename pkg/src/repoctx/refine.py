"""Index-backed linting of completions, import repair, and the refine loop."""
from __future__ import annotations

import builtins
import json
import logging
from dataclasses import dataclass, field

from .context import CompletionPoint, splice_body
from .index import (
    _MISSING,
    CycleError,
    RepoIndex,
    Scope,
    class_of,
    lookup_member,
    lookup_name,
    walk_chain,
)
from .llm import BackendError, clean_completion
from .syntax import (
    IDENTIFIER,
    LAYOUT_KINDS,
    OPERATOR,
    PUNCT,
    FunctionDecl,
    LexError,
    ParseError,
    _split_commas,
    bound_names,
    normalize_newlines,
    parse_block,
    parse_module,
    tokenize,
)

log = logging.getLogger(__name__)

SYNTAX_ERROR = "SyntaxError"
UNDEFINED_NAME = "UndefinedName"
UNIMPORTED_USAGE = "UnimportedUsage"
ARITY_MISMATCH = "ArityMismatch"
UNKNOWN_ATTRIBUTE = "UnknownAttribute"

BUILTIN_NAMES = frozenset(dir(builtins)) | {"__name__", "__file__", "__doc__", "__class__",
                                            "__package__", "__spec__"}
LINT_HEADER = "## Linter found these issues:"
PREVIOUS_HEADER = "## Your previous answer:"
RETURN_HEADER = "## Return the corrected function body:"


@dataclass(frozen=True)
class Diagnostic:
    kind: str
    span: tuple[int, int, int, int]  # line, col, end_line, end_col (end exclusive)
    message: str
    suggested_fix: str | None = None

    @property
    def line(self) -> int:
        return self.span[0]

    @property
    def col(self) -> int:
        return self.span[1]

    def render(self) -> str:
        return f"{self.kind} at {self.line}:{self.col}: {self.message}"

    def to_json(self) -> dict:
        return {"kind": self.kind, "span": list(self.span), "message": self.message,
                "suggested_fix": self.suggested_fix}


@dataclass(frozen=True)
class ImportEdit:
    after_line: int  # 0 inserts at the top of the file
    text: str


@dataclass(frozen=True)
class Iteration:
    completion: str
    diagnostics: tuple[Diagnostic, ...]
    prompt_used: str
    import_edits: tuple[ImportEdit, ...] = ()


@dataclass(frozen=True)
class RefineTrace:
    iterations: tuple[Iteration, ...]
    final: str
    converged: bool
    best_iteration: int = 0
    import_edits: tuple[ImportEdit, ...] = field(default=())

    @property
    def final_diagnostics(self) -> tuple[Diagnostic, ...]:
        return self.iterations[self.best_iteration].diagnostics

    def to_json(self) -> dict:
        return {
            "iterations": [
                {"completion": it.completion,
                 "diagnostics": [d.to_json() for d in it.diagnostics],
                 "prompt": it.prompt_used,
                 "import_edits": [e.text for e in it.import_edits]}
                for it in self.iterations
            ],
            "final": self.final,
            "converged": self.converged,
            "best_iteration": self.best_iteration,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=False)


# ---------------------------------------------------------------------------
# Linting


class _Frame:
    """Maps body coordinates (dedented, trimmed) back to the raw completion."""

    def __init__(self, completion: str):
        raw = normalize_newlines(completion).split("\n")
        lead = 0
        while lead < len(raw) and not raw[lead].strip():
            lead += 1
        rest = [ln.rstrip() for ln in raw[lead:]]
        while rest and not rest[-1].strip():
            rest.pop()
        widths = [len(ln) - len(ln.lstrip()) for ln in rest if ln.strip()]
        self.indent = min(widths) if widths else 0
        self.lead = lead
        self.body = "\n".join(ln[self.indent:] for ln in rest) if rest else "pass"
        self.raw = raw

    def to_raw(self, line: int, col: int) -> tuple[int, int]:
        n_body = len(self.body.split("\n"))
        line = min(max(line, 1), n_body)
        raw_line = line + self.lead
        text = self.raw[raw_line - 1] if raw_line - 1 < len(self.raw) else ""
        col = min(max(col, 1) + self.indent, len(text) + 1)
        return raw_line, col

    def span(self, line: int, col: int, length: int) -> tuple[int, int, int, int]:
        rl, rc = self.to_raw(line, col)
        text = self.raw[rl - 1] if rl - 1 < len(self.raw) else ""
        return rl, rc, rl, min(rc + max(length, 1), len(text) + 1)


def _target_fn(point: CompletionPoint, index: RepoIndex) -> FunctionDecl:
    fn = index.function(point.module, point.function)
    if fn is None:
        from .context import PointError

        raise PointError(f"no function {point.function!r} in module {point.module!r}")
    return fn


def _tokens_by_pos(tokens) -> dict[tuple[int, int], int]:
    return {t.pos: i for i, t in enumerate(tokens)}


def _element_positions(tokens, start: int, length: int) -> list[tuple[int, int]]:
    return [tokens[start + 2 * k].pos for k in range(length)]


def _check_arity(fn: FunctionDecl, n_pos: int, keywords: list[str], skip_first: bool,
                 name: str | None = None) -> str | None:
    name = name or fn.name
    positional: list = []
    pos_only: set[str] = set()
    kw_only: list = []
    var_pos = var_kw = False
    seen_star = False
    for p in fn.params:
        if p.is_marker:
            if p.star == "/":
                pos_only.update(q.name for q in positional)
            else:
                seen_star = True
            continue
        if p.star == "*":
            var_pos = True
            seen_star = True
        elif p.star == "**":
            var_kw = True
        elif seen_star:
            kw_only.append(p)
        else:
            positional.append(p)
    if skip_first and positional:
        first = positional.pop(0)
        pos_only.discard(first.name)
    if n_pos > len(positional) and not var_pos:
        return f"{name}() takes {len(positional)} positional argument(s) but {n_pos} were given"
    kw_set = set(keywords)
    accepted = {p.name for p in positional if p.name not in pos_only} | {p.name for p in kw_only}
    for kw in keywords:
        if kw not in accepted and not var_kw:
            return f"{name}() got an unexpected keyword argument '{kw}'"
    for p in positional[n_pos:]:
        if p.default is None and (p.name in pos_only or p.name not in kw_set):
            return f"{name}() missing required argument '{p.name}'"
    for p in kw_only:
        if p.default is None and p.name not in kw_set:
            return f"{name}() missing required keyword argument '{p.name}'"
    return None


def _count_args(tokens, open_idx: int):
    """(positional count, keyword names, close index) or None when not countable."""
    depth = 0
    close = None
    for k in range(open_idx, len(tokens)):
        t = tokens[k]
        if t.kind == PUNCT and t.text in "([{":
            depth += 1
        elif t.kind == PUNCT and t.text in ")]}":
            depth -= 1
            if depth == 0:
                close = k
                break
    if close is None:
        return None
    n_pos = 0
    keywords: list[str] = []
    parts = _split_commas(tokens[open_idx + 1:close])
    for k, part in enumerate(parts):
        if not part:
            if k == len(parts) - 1:
                continue
            return None
        if part[0].text in ("*", "**"):
            return None
        if len(part) >= 2 and part[0].kind == IDENTIFIER and part[1].kind == OPERATOR \
                and part[1].text == "=":
            keywords.append(part[0].text)
        elif keywords:
            return None  # positional after keyword: not countable
        else:
            n_pos += 1
    return n_pos, keywords, close


def _callable_decl(steps, index: RepoIndex):
    """(FunctionDecl, skip_first, display name) for the callee of a resolved chain, if checkable."""
    target = steps[-1]
    if target is None:
        return None
    prev = steps[-2] if len(steps) > 1 else None
    if target.kind in ("function", "method"):
        decl = target.decl
        if not isinstance(decl, FunctionDecl):
            return None
        if any(d not in ("staticmethod", "classmethod") for d in decl.decorators):
            return None
        if target.kind == "function":
            return decl, False, None
        if decl.is_static:
            return decl, False, None
        if decl.is_classmethod:
            return decl, True, None
        # method: bound when reached through an instance
        bound = prev is not None and prev.kind == "variable"
        return decl, bound, None
    if target.kind == "class":
        if not index.is_closed_class(target.qualified_name):
            return None
        cls_decl = target.decl
        if cls_decl is not None and getattr(cls_decl, "decorators", ()):
            return None
        try:
            init = lookup_member(target, "__init__", index)
        except (CycleError, ValueError):
            return None
        if init is None or not isinstance(init.decl, FunctionDecl):
            return None
        if init.decl.decorators:
            return None
        return init.decl, True, target.name
    return None


def lint_completion(completion: str, point: CompletionPoint, index: RepoIndex) -> list[Diagnostic]:
    """Diagnostics for *completion* spliced in as the body of the target function."""
    frame = _Frame(completion)
    fn = _target_fn(point, index)
    splice = splice_body(index.sources[point.module], fn, frame.body)
    try:
        new_index = index.replace_module(point.module, splice.source)
    except (LexError, ParseError) as exc:
        line = exc.pos[0] - splice.first_line + 1
        col = exc.pos[1] - splice.indent
        msg = f"expected {exc.expected}" if isinstance(exc, ParseError) else exc.reason
        return [Diagnostic(SYNTAX_ERROR, frame.span(line, col, 1), msg)]

    new_fn = new_index.function(point.module, point.function)
    scope = Scope(point.module, new_fn.qualname)
    try:
        body_tokens = [t for t in tokenize(frame.body) if t.kind not in LAYOUT_KINDS]
        body_ast = parse_module(frame.body, "<completion>")
        nested = bound_names(parse_block(tokenize(frame.body)))
    except (LexError, ParseError) as exc:  # pragma: no cover - splice parsed already
        return [Diagnostic(SYNTAX_ERROR, frame.span(exc.pos[0], exc.pos[1], 1), str(exc))]

    own = {p.name for p in new_fn.params if not p.is_marker} | {b.name for b in new_fn.locals}
    own |= {b for d in new_fn.imports for b, _, _ in d.bindings()}
    shadowed = nested - own
    by_pos = _tokens_by_pos(body_tokens)

    names: list[Diagnostic] = []
    arity: list[Diagnostic] = []
    attrs: list[Diagnostic] = []
    for occ in body_ast.occurrences:
        head = occ.chain[0]
        if head in shadowed:
            continue
        start = by_pos.get(occ.pos)
        binding = lookup_name(head, scope, new_index)
        if binding is _MISSING:
            if head in BUILTIN_NAMES:
                continue
            candidates = sorted(
                sym.module for qn, sym in new_index.symbols.items()
                if sym.kind in ("class", "function", "variable") and sym.module != point.module
                and qn == f"{sym.module}.{head}"
            )
            span = frame.span(occ.pos[0], occ.pos[1], len(head))
            if candidates:
                fix = f"from {candidates[0]} import {head}"
                names.append(Diagnostic(UNIMPORTED_USAGE, span,
                                        f"'{head}' is defined in {candidates[0]} but not imported", fix))
            else:
                names.append(Diagnostic(UNDEFINED_NAME, span, f"undefined name '{head}'"))
            continue
        steps = walk_chain(occ.chain, scope, new_index)
        positions = _element_positions(body_tokens, start, len(occ.chain)) if start is not None else None
        for i in range(1, len(steps)):
            prev = steps[i - 1]
            if prev is None:
                break
            if prev.kind == "variable" and steps[i] is None:
                cls = class_of(prev, new_index)
                if cls is not None and new_index.is_closed_class(cls.qualified_name):
                    member = occ.chain[i]
                    pos = positions[i] if positions else occ.pos
                    attrs.append(Diagnostic(
                        UNKNOWN_ATTRIBUTE, frame.span(pos[0], pos[1], len(member)),
                        f"'{cls.name}' has no attribute '{member}'"))
                break
        if start is None:
            continue
        after = start + 2 * len(occ.chain) - 1
        if after < len(body_tokens) and body_tokens[after].kind == PUNCT and body_tokens[after].text == "(":
            counted = _count_args(body_tokens, after)
            callee = _callable_decl(steps, new_index)
            if counted is None or callee is None:
                continue
            n_pos, keywords, close = counted
            problem = _check_arity(callee[0], n_pos, keywords, callee[1], callee[2])
            if problem:
                end = body_tokens[close]
                length = end.pos[1] + 1 - occ.pos[1] if end.pos[0] == occ.pos[0] else len(head)
                arity.append(Diagnostic(ARITY_MISMATCH, frame.span(occ.pos[0], occ.pos[1], length),
                                        problem))
    key = lambda d: d.span
    return sorted(names, key=key) + sorted(arity, key=key) + sorted(attrs, key=key)


# ---------------------------------------------------------------------------
# Import management


def _import_anchor(index: RepoIndex, module: str) -> int:
    ast_ = index.modules[module]
    if ast_.imports:
        return max(d.end_line or d.pos[0] for d in ast_.imports)
    if ast_.module_docstring is not None:
        # the docstring is the first statement; find where it ends
        src = normalize_newlines(index.sources[module])
        stmts = parse_block(tokenize(src))
        return stmts[0].last_line if stmts else 0
    return 0


def auto_import(completion: str, diagnostics, point: CompletionPoint, index: RepoIndex):
    """Turn UnimportedUsage diagnostics into import edits.

    Returns ``(edits, remaining)``; each distinct import line is emitted once
    and is placed after the file's last import.
    """
    diagnostics = list(diagnostics)
    anchor = _import_anchor(index, point.module)
    existing = {ln.strip() for ln in normalize_newlines(index.sources[point.module]).split("\n")}
    edits: list[ImportEdit] = []
    seen: set[str] = set()
    for d in diagnostics:
        if d.kind != UNIMPORTED_USAGE or not d.suggested_fix:
            continue
        if d.suggested_fix in seen or d.suggested_fix in existing:
            continue
        seen.add(d.suggested_fix)
        edits.append(ImportEdit(anchor, d.suggested_fix))
    remaining = [d for d in diagnostics if not (d.kind == UNIMPORTED_USAGE and d.suggested_fix)]
    return edits, remaining


def apply_import_edits(source: str, edits) -> str:
    lines = normalize_newlines(source).split("\n")
    for anchor in sorted({e.after_line for e in edits}, reverse=True):
        lines[anchor:anchor] = [e.text for e in edits if e.after_line == anchor]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Refine loop


def refine_prompt(base_prompt: str, previous: str, diagnostics) -> str:
    issues = "\n".join(d.render() for d in diagnostics)
    return (f"{base_prompt}\n\n{PREVIOUS_HEADER}\n{previous}\n\n"
            f"{LINT_HEADER}\n{issues}\n\n{RETURN_HEADER}")


def refine_loop(point: CompletionPoint, plan, backend, index: RepoIndex,
                max_iters: int = 2, auto_imports: bool = True) -> RefineTrace:
    """Complete, lint, and resend diagnostics up to *max_iters* extra times.

    The final answer is the iteration with the fewest diagnostics, earliest
    on ties.
    """
    if max_iters < 0:
        raise ValueError("max_iters must be >= 0")
    base = plan.realized if hasattr(plan, "realized") else str(plan)
    working = index
    iterations: list[Iteration] = []
    all_edits: list[ImportEdit] = []
    prompt = base
    for i in range(max_iters + 1):
        try:
            raw = backend.complete(prompt)
        except BackendError as exc:
            exc.iteration = i
            raise
        completion = clean_completion(raw)
        diags = lint_completion(completion, point, working)
        edits: list[ImportEdit] = []
        if auto_imports and any(d.kind == UNIMPORTED_USAGE for d in diags):
            edits, _ = auto_import(completion, diags, point, working)
            if edits:
                patched = apply_import_edits(working.sources[point.module], edits)
                working = working.replace_module(point.module, patched)
                all_edits.extend(edits)
                diags = lint_completion(completion, point, working)
        iterations.append(Iteration(completion, tuple(diags), prompt, tuple(edits)))
        log.debug("refine iteration %d: %d diagnostic(s)", i, len(diags))
        if not diags:
            break
        prompt = refine_prompt(base, completion, diags)
    best = min(range(len(iterations)), key=lambda k: (len(iterations[k].diagnostics), k))
    return RefineTrace(tuple(iterations), iterations[best].completion,
                       not iterations[best].diagnostics, best, tuple(all_edits))
