"""Cross-file context for a completion point: collection, rendering and ranking."""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .index import (
    RepoIndex,
    Scope,
    Symbol,
    ThirdParty,
    UserDefined,
    class_of,
    import_modules,
    resolve_import,
    walk_chain,
)
from .syntax import FunctionDecl, ModuleAst, normalize_newlines

FILE_ROLE = "file_role"
MODULE_DEPENDENCY = "module_dependency"
USER_SYMBOL = "user_symbol"
LOCAL_TYPE = "local_type"
THIRD_PARTY = "third_party"
ITEM_KINDS = (FILE_ROLE, MODULE_DEPENDENCY, THIRD_PARTY, USER_SYMBOL, LOCAL_TYPE)


class PointError(LookupError):
    """The completion point does not name an indexed function."""


@dataclass(frozen=True)
class RelevanceWeights:
    target: float = 3.0
    user_defined: float = 2.0
    file: float = 1.0


@dataclass(frozen=True)
class CompletionPoint:
    module: str
    function: str
    cursor: tuple[int, int]
    prefix: str

    def to_json(self) -> dict:
        return {"module": self.module, "function": self.function,
                "line": self.cursor[0], "col": self.cursor[1]}


@dataclass(frozen=True)
class ContextItem:
    kind: str
    payload: str
    source_symbol: str | None = None
    relevance: float = 0.0

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload,
                "symbol": self.source_symbol, "score": self.relevance}


@dataclass(frozen=True)
class CrossFileContext:
    point: CompletionPoint
    items: tuple[ContextItem, ...] = ()

    def of_kind(self, kind: str) -> list[ContextItem]:
        return [item for item in self.items if item.kind == kind]

    def to_json(self) -> dict:
        return {"point": self.point.to_json(), "items": [i.to_json() for i in self.items]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


# ---------------------------------------------------------------------------
# Completion points and body splicing


def normalize_body(text: str) -> str:
    """Body text dedented by its first line's indent, without leading/trailing blank lines.

    Lines that do not carry that indent (string continuations) are left as-is.
    Returns ``pass`` for an empty body.
    """
    lines = [ln.rstrip() for ln in normalize_newlines(text).split("\n")]
    while lines and not lines[0].strip():
        lines.pop(0)
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        return "pass"
    first = lines[0]
    indent = first[:len(first) - len(first.lstrip())]
    return "\n".join(ln.removeprefix(indent) for ln in lines)


@dataclass(frozen=True)
class Splice:
    source: str
    first_line: int
    last_line: int
    indent: int


def splice_body(source: str, fn: FunctionDecl, body: str) -> Splice:
    """Replace *fn*'s body in *source* with *body* (dedented text)."""
    lines = normalize_newlines(source).split("\n")
    hl, hc = fn.header_end
    head = lines[: hl - 1] + [lines[hl - 1][: hc - 1].rstrip()]
    if fn.body_indent is not None:
        indent = fn.body_indent - 1
    else:
        def_line = lines[fn.def_line - 1]
        indent = len(def_line) - len(def_line.lstrip()) + 4
    pad = " " * indent
    body_lines = [pad + ln if ln.strip() else "" for ln in body.split("\n")]
    tail = lines[fn.body_span[1]:]
    text = "\n".join(head + body_lines + tail)
    first = hl + 1
    return Splice(text, first, first + len(body_lines) - 1, indent)


def completion_prefix(source: str, fn: FunctionDecl) -> str:
    lines = normalize_newlines(source).split("\n")
    hl, hc = fn.header_end
    return "\n".join(lines[: hl - 1] + [lines[hl - 1][: hc - 1].rstrip()]) + "\n"


def function_body_text(source: str, fn: FunctionDecl) -> str:
    """The (dedented) body text of *fn* as it appears in *source*."""
    lines = normalize_newlines(source).split("\n")
    first, last = fn.body_span
    hl, hc = fn.header_end
    if first == hl:
        chunk = [lines[hl - 1][hc - 1:].strip()]
    else:
        chunk = lines[first - 1:last]
    return normalize_body("\n".join(chunk))


def prepare_point(index: RepoIndex, module: str, function: str,
                  mask: bool = True) -> tuple[RepoIndex, CompletionPoint]:
    """Build the completion point for *function* and (by default) blank its body.

    The returned index has the target body replaced by ``pass`` so that the
    code being completed cannot leak into the context.
    """
    fn = index.function(module, function)
    if fn is None:
        raise PointError(f"no function {function!r} in module {module!r}")
    source = index.sources[module]
    if mask:
        index = index.replace_module(module, splice_body(source, fn, "pass").source)
        fn = index.function(module, function)
        source = index.sources[module]
    point = CompletionPoint(module, function, (fn.header_end[0] + 1, 1),
                            completion_prefix(source, fn))
    return index, point


def _target(point: CompletionPoint, index: RepoIndex) -> tuple[ModuleAst, FunctionDecl]:
    ast_ = index.modules.get(point.module)
    fn = ast_.find_function(point.function) if ast_ is not None else None
    if fn is None:
        raise PointError(f"no function {point.function!r} in module {point.module!r}")
    return ast_, fn


# ---------------------------------------------------------------------------
# Collection


def summarize_file_role(module: ModuleAst) -> str:
    if module.module_docstring:
        return module.module_docstring
    names = [c.name for c in module.classes] + [f.name for f in module.functions]
    order = {}
    for decl in (*module.classes, *module.functions):
        order[decl.name] = decl.span[0]
    names = sorted(set(names), key=lambda n: order[n])
    return f"Defines: {', '.join(names) if names else '(nothing)'}"


def infer_local_types(function: FunctionDecl, module: ModuleAst, index: RepoIndex) -> dict[str, str]:
    """Annotated parameters plus ``x = ClassName(...)`` locals (last binding wins)."""
    module_path = _module_path(module, index)
    types: dict[str, str] = {}
    events: list[tuple[int, int, str, str | None]] = []
    seq = 0
    for p in function.params:
        if p.is_marker:
            continue
        events.append((function.def_line, seq, p.name, p.annotation))
        seq += 1
    for b in function.locals:
        text = b.annotation
        if text is None and b.call is not None:
            target = walk_chain(tuple(b.call.split(".")), Scope(module_path, function.qualname), index)[-1] \
                if module_path else None
            if target is not None and target.kind == "class":
                text = b.call
        events.append((b.line, seq, b.name, text))
        seq += 1
    for _, _, name, text in sorted(events):
        if text is None:
            types.pop(name, None)
        else:
            types[name] = text
    return types


def _module_path(module: ModuleAst, index: RepoIndex) -> str | None:
    for path, ast_ in index.modules.items():
        if ast_ is module or ast_.path == module.path:
            return path
    return None


def _first_line(text: str | None) -> str | None:
    if not text:
        return None
    return text.strip().split("\n", 1)[0].strip()


def _indent_doc(doc: str, pad: str) -> list[str]:
    lines = doc.split("\n")
    if len(lines) == 1:
        return [f'{pad}"""{doc}"""']
    return [f'{pad}"""{lines[0]}'] + [f"{pad}{ln}" if ln else "" for ln in lines[1:]] + [f'{pad}"""']


def render_symbol(sym: Symbol, index: RepoIndex, max_members: int = 10) -> str:
    """Signature + docstring stub for a user-defined class or function."""
    lines = [f"# from {sym.module}"]
    if sym.kind == "class":
        lines.append(f"{sym.signature_text}:")
        if sym.docstring:
            lines.extend(_indent_doc(sym.docstring, "    "))
        members = []
        prefix = sym.qualified_name + "."
        for qn, member in index.symbols.items():
            if not qn.startswith(prefix) or "." in qn[len(prefix):]:
                continue
            name = member.name
            if name.startswith("_") and name not in ("__init__", "__call__"):
                continue
            if member.kind in ("method", "variable", "class"):
                members.append(member)
        members.sort(key=lambda m: m.name)
        for member in members[:max_members]:
            if member.kind == "variable":
                lines.append(f"    {member.signature_text or member.name}")
            elif member.kind == "class":
                lines.append(f"    {member.signature_text}: ...")
            else:
                doc = _first_line(member.docstring)
                if doc:
                    lines.append(f"    {member.signature_text}:")
                    lines.append(f'        """{doc}"""')
                else:
                    lines.append(f"    {member.signature_text}: ...")
        if len(lines) == 2:
            lines.append("    ...")
        return "\n".join(lines)
    if sym.docstring:
        lines.append(f"{sym.signature_text}:")
        lines.extend(_indent_doc(sym.docstring, "    "))
    else:
        lines.append(f"{sym.signature_text}: ...")
    return "\n".join(lines)


def _innermost_scope(ast_: ModuleAst, module: str, line: int) -> Scope:
    best = None
    for fn in ast_.iter_functions():
        if fn.span[0] <= line <= fn.span[1]:
            if best is None or fn.span[1] - fn.span[0] < best.span[1] - best.span[0]:
                best = fn
    if best is not None:
        return Scope(module, best.qualname)
    best_cls = None
    for cls in ast_.iter_classes():
        if cls.span[0] <= line <= cls.span[1]:
            if best_cls is None or cls.span[1] - cls.span[0] < best_cls.span[1] - best_cls.span[0]:
                best_cls = cls
    return Scope(module, best_cls.qualname if best_cls else None)


def _touch(steps, index: RepoIndex, acc: set[str]) -> None:
    for sym in steps:
        if sym is None:
            continue
        acc.add(sym.qualified_name)
        if sym.kind in ("method", "variable") and "." in sym.qualified_name:
            acc.add(sym.qualified_name.rsplit(".", 1)[0])
        cls = class_of(sym, index)
        if cls is not None:
            acc.add(cls.qualified_name)


@dataclass
class _References:
    target: set[str] = field(default_factory=set)
    other: set[str] = field(default_factory=set)
    target_heads: set[str] = field(default_factory=set)
    other_heads: set[str] = field(default_factory=set)


def _references(point: CompletionPoint, index: RepoIndex) -> _References:
    ast_, fn = _target(point, index)
    refs = _References()
    scope = Scope(point.module, fn.qualname)
    first, last = fn.span
    for occ in ast_.occurrences:
        inside = first <= occ.pos[0] <= last
        occ_scope = scope if inside else _innermost_scope(ast_, point.module, occ.pos[0])
        steps = walk_chain(occ.chain, occ_scope, index)
        if inside:
            _touch(steps, index, refs.target)
            refs.target_heads.add(occ.chain[0])
        else:
            _touch(steps, index, refs.other)
            refs.other_heads.add(occ.chain[0])
    return refs


def _top_level(sym: Symbol, index: RepoIndex) -> Symbol | None:
    """The module-level class/function that contains *sym*."""
    if sym.kind == "module" or sym.module is None:
        return None
    rest = sym.qualified_name[len(sym.module) + 1:]
    top = index.symbols.get(f"{sym.module}.{rest.split('.')[0]}")
    if top is None or top.kind not in ("class", "function"):
        return None
    return top


def identify_context(point: CompletionPoint, index: RepoIndex,
                     weights: RelevanceWeights | None = None,
                     max_members: int = 10) -> CrossFileContext:
    """Collect and rank the cross-file context items for *point*."""
    ast_, fn = _target(point, index)
    items: list[ContextItem] = [ContextItem(FILE_ROLE, summarize_file_role(ast_))]

    seen_deps: set[str] = set()
    seen_pkgs: set[str] = set()
    for decl in ast_.imports:
        res = resolve_import(decl, point.module, index)
        if isinstance(res, UserDefined):
            for dep in import_modules(decl, point.module, index) or [res.module]:
                if dep in seen_deps or dep == point.module:
                    continue
                seen_deps.add(dep)
                doc = _first_line(index.modules[dep].module_docstring)
                payload = f"{dep}: {doc}" if doc else dep
                items.append(ContextItem(MODULE_DEPENDENCY, payload, dep))
        elif isinstance(res, ThirdParty):
            if res.package in seen_pkgs:
                continue
            seen_pkgs.add(res.package)
            payload = f"{res.package}=={res.version}" if res.version else res.package
            items.append(ContextItem(THIRD_PARTY, payload, res.package))

    candidates: dict[str, Symbol] = {}
    scope = Scope(point.module, None)
    for decl in ast_.imports:
        if decl.form != "from":
            continue
        for bound, _, _ in decl.bindings():
            sym = walk_chain((bound,), scope, index)[-1]
            if sym is not None and sym.kind in ("class", "function"):
                candidates[sym.qualified_name] = sym
    refs = _references(point, index)
    for qn in sorted(refs.target | refs.other):
        sym = index.symbols.get(qn)
        if sym is None:
            continue
        top = _top_level(sym, index)
        if top is not None:
            candidates[top.qualified_name] = top
    for qn in sorted(candidates):
        sym = candidates[qn]
        if sym.module == point.module:
            continue
        items.append(ContextItem(USER_SYMBOL, render_symbol(sym, index, max_members), qn))

    fn_scope = Scope(point.module, fn.qualname)
    for name, text in infer_local_types(fn, ast_, index).items():
        from .index import _type_chain

        chain = _type_chain(text)
        target = walk_chain(chain, fn_scope, index)[-1] if chain else None
        source = target.qualified_name if target is not None and target.kind == "class" else None
        items.append(ContextItem(LOCAL_TYPE, f"{name}: {text}", source))

    ranked = rank_relevance(items, point, index, weights)
    return CrossFileContext(point, tuple(ranked))


def _sort_key(item: ContextItem):
    return (-item.relevance, item.source_symbol or "", ITEM_KINDS.index(item.kind), item.payload)


def rank_relevance(items, point: CompletionPoint, index: RepoIndex,
                   weights: RelevanceWeights | None = None) -> list[ContextItem]:
    """Score items and sort them by (score desc, qualified name asc).

    score = target·[referenced in the target function] + user·[user-defined]
    + file·[referenced elsewhere in the file]; third-party items cap at 1.
    """
    items = list(items)
    if not items:
        return []
    w = weights or RelevanceWeights()
    refs = _references(point, index)
    ast_ = index.modules[point.module]
    scored = []
    for item in items:
        in_target = in_file = False
        user = False
        qn = item.source_symbol
        if item.kind in (USER_SYMBOL, LOCAL_TYPE, MODULE_DEPENDENCY) and qn is not None:
            user = item.kind != LOCAL_TYPE or qn in index.symbols
            if item.kind == MODULE_DEPENDENCY:
                in_target = any(t == qn or t.startswith(qn + ".") for t in refs.target)
                in_file = any(t == qn or t.startswith(qn + ".") for t in refs.other)
            else:
                in_target = qn in refs.target
                in_file = qn in refs.other
        elif item.kind == THIRD_PARTY and qn is not None:
            names = _bound_names_for_package(ast_, qn)
            in_target = bool(names & refs.target_heads)
            in_file = bool(names & refs.other_heads)
        score = 0.0
        if item.kind != FILE_ROLE:
            score = w.target * in_target + w.user_defined * user + w.file * in_file
        if item.kind == THIRD_PARTY:
            score = min(score, 1.0)
        scored.append(replace(item, relevance=float(score)))
    scored.sort(key=_sort_key)
    return scored


def _bound_names_for_package(ast_: ModuleAst, package: str) -> set[str]:
    names = set()
    for decl in ast_.imports:
        if decl.level == 0 and decl.module_path.split(".")[0] == package:
            names.update(bound for bound, _, _ in decl.bindings())
    return names
