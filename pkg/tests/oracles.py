"""Independent reference implementations used to cross-check the package.

Everything here is built on the standard library (``ast``, plain loops)
rather than on the package's own tokenizer, parser or index.
"""
from __future__ import annotations

import ast
import io
import math
import random
import re
import textwrap
import tokenize
from dataclasses import dataclass

# ---------------------------------------------------------------------------
# BLEU by explicit counting

_LAYOUT = {tokenize.NEWLINE, tokenize.NL, tokenize.INDENT, tokenize.DEDENT, tokenize.COMMENT,
           tokenize.ENDMARKER}


def std_tokens(text):
    """Code tokens from the standard tokenizer, without comments or layout."""
    toks = tokenize.generate_tokens(io.StringIO(textwrap.dedent(text) + "\n").readline)
    return [t.string for t in toks if t.type not in _LAYOUT]


def _ngrams(tokens, n):
    return [tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1)]


def _count(seq, item):
    c = 0
    for x in seq:
        if x == item:
            c += 1
    return c


def naive_bleu(pred, gold, max_n=4, weight_of=None):
    """Clipped n-gram precision with add-one smoothing and brevity penalty.

    *weight_of* maps a unigram token to its weight (default 1).
    """
    if not pred:
        return 0.0
    log_sum = 0.0
    for n in range(1, max_n + 1):
        p_grams = _ngrams(pred, n)
        g_grams = _ngrams(gold, n)
        matched = 0.0
        total = 0.0
        seen = []
        for gram in p_grams:
            if gram in seen:
                continue
            seen.append(gram)
            w = weight_of(gram[0]) if (n == 1 and weight_of) else 1.0
            in_pred = _count(p_grams, gram)
            in_gold = _count(g_grams, gram)
            matched += w * min(in_pred, in_gold)
            total += w * in_pred
        if matched == 0:
            p = 1.0 / (total + 1.0)
        else:
            p = matched / total
        log_sum += math.log(p) / max_n
    bp = 1.0 if len(pred) >= len(gold) else math.exp(1 - len(gold) / len(pred))
    return bp * math.exp(log_sum)


# ---------------------------------------------------------------------------
# Syntax match by brute-force structural comparison


def _all_nodes(root):
    out = []
    stack = [root]
    while stack:
        node = stack.pop()
        out.append(node)
        stack.extend(node.children)
    return out


def _same(a, b):
    if a.label != b.label or len(a.children) != len(b.children):
        return False
    return all(_same(x, y) for x, y in zip(a.children, b.children))


def brute_syntax_match(pred_tree, gold_tree):
    gold_nodes = _all_nodes(gold_tree)
    pred_nodes = _all_nodes(pred_tree)
    hit = sum(1 for g in gold_nodes if any(_same(g, p) for p in pred_nodes))
    return hit / len(gold_nodes)


# ---------------------------------------------------------------------------
# Dataflow from the standard ``ast`` module


class _DefUse(ast.NodeVisitor):
    def __init__(self):
        self.events = []  # (line, col, name, is_def)

    def visit_JoinedStr(self, node):
        pass  # names inside f-strings are not tracked

    def visit_Name(self, node):
        if isinstance(node.ctx, ast.Load):
            self.events.append((node.lineno, node.col_offset, node.id, False))
        elif isinstance(node.ctx, ast.Store):
            self.events.append((node.lineno, node.col_offset, node.id, True))

    def visit_AugAssign(self, node):
        if isinstance(node.target, ast.Name):
            t = node.target
            self.events.append((t.lineno, t.col_offset, t.id, False))
            self.events.append((t.lineno, t.col_offset, t.id, True))
        else:
            self.visit(node.target)
        self.visit(node.value)

    def visit_comprehension(self, node):
        # comprehension targets are scoped to the comprehension, not the body
        self.visit(node.iter)
        for cond in node.ifs:
            self.visit(cond)

    def visit_Delete(self, node):
        for t in node.targets:
            if not isinstance(t, ast.Name):
                self.visit(t)


def ast_dataflow_edges(body: str):
    """(var_k, def line, use line) edges of a dedented function body."""
    src = "def __wrapper__():\n" + textwrap.indent(textwrap.dedent(body), "    ")
    tree = ast.parse(src)
    v = _DefUse()
    for stmt in tree.body[0].body:
        v.visit(stmt)
    events = [(line - 1, col, name, d) for line, col, name, d in v.events]
    defs = {}
    order = []
    for line, col, name, d in sorted(events, key=lambda e: (e[0], e[1])):
        if d:
            defs.setdefault(name, []).append(line)
            if name not in order:
                order.append(name)
    canon = {name: f"var_{i}" for i, name in enumerate(order)}
    edges = set()
    for line, _, name, d in events:
        if d or name not in defs:
            continue
        earlier = [x for x in defs[name] if x < line]
        if earlier:
            edges.add((canon[name], max(earlier), line))
    return edges


def ast_dataflow_match(pred: str, gold: str) -> float:
    g = ast_dataflow_edges(gold)
    if not g:
        return 1.0
    try:
        p = ast_dataflow_edges(pred)
    except SyntaxError:
        p = set()
    return len(g & p) / len(g)


# ---------------------------------------------------------------------------
# Name resolution by walking the standard ``ast``


@dataclass(frozen=True)
class Sym:
    qualname: str
    kind: str
    module: str | None = None
    ann: object = None  # ast expression
    call: tuple | None = None
    owner: str | None = None

    @property
    def key(self):
        return (self.qualname, self.kind)


def _chain(expr):
    parts = []
    while isinstance(expr, ast.Attribute):
        parts.append(expr.attr)
        expr = expr.value
    if isinstance(expr, ast.Name):
        parts.append(expr.id)
        return tuple(reversed(parts))
    return None


def _ann_chain(expr):
    if expr is None:
        return None
    if isinstance(expr, ast.Constant) and isinstance(expr.value, str):
        try:
            expr = ast.parse(expr.value, mode="eval").body
        except SyntaxError:
            return None
    if isinstance(expr, ast.Subscript) and _chain(expr.value) in (("Optional",), ("typing", "Optional")):
        return _ann_chain(expr.slice)
    if isinstance(expr, ast.BinOp) and isinstance(expr.op, ast.BitOr):
        sides = [s for s in (expr.left, expr.right)
                 if not (isinstance(s, ast.Constant) and s.value is None)]
        return _ann_chain(sides[0]) if len(sides) == 1 else None
    return _chain(expr)


def _call_chain(value):
    if isinstance(value, ast.Call):
        return _chain(value.func)
    return None


class _Cycle(Exception):
    pass


class ResolutionOracle:
    """Resolve identifier chains over ``{relpath: source}`` using ``ast``."""

    def __init__(self, files: dict[str, str]):
        self.trees = {}
        self.is_pkg = set()
        for rel, text in files.items():
            if not rel.endswith(".py"):
                continue
            parts = rel[:-3].split("/")
            if parts[-1] == "__init__":
                parts = parts[:-1]
                self.is_pkg.add(".".join(parts))
            self.trees[".".join(parts)] = ast.parse(text)
        self.packages = {".".join(m.split(".")[:i]) for m in self.trees for i in range(1, m.count(".") + 1)}
        self.top = {m: self._top(m, t) for m, t in self.trees.items()}
        self.classes = {}  # qualname -> (module, ClassDef)
        for m, t in self.trees.items():
            self._collect_classes(m, t.body, m)
        self.members = {qn: self._members(qn) for qn in self.classes}

    # -- tables --------------------------------------------------------------

    def _top(self, module, tree):
        entries = []
        for i, node in enumerate(tree.body):
            if isinstance(node, (ast.FunctionDef, ast.AsyncFunctionDef)):
                entries.append((node.lineno, i, node.name, Sym(f"{module}.{node.name}", "function", module)))
            elif isinstance(node, ast.ClassDef):
                entries.append((node.lineno, i, node.name, Sym(f"{module}.{node.name}", "class", module)))
            else:
                for name, ann, call in _assigned(node):
                    entries.append((node.lineno, i, name,
                                    Sym(f"{module}.{name}", "variable", module, ann, call)))
        table = {}
        for _, _, name, sym in sorted(entries, key=lambda e: (e[0], e[1])):
            table[name] = sym
        return table

    def _collect_classes(self, module, body, prefix):
        for node in body:
            if isinstance(node, ast.ClassDef):
                qn = f"{prefix}.{node.name}"
                self.classes[qn] = (module, node)
                self._collect_classes(module, node.body, qn)

    def _members(self, qn):
        module, node = self.classes[qn]
        entries = []
        for i, child in enumerate(node.body):
            if isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef)):
                entries.append((child.lineno, i, child.name, Sym(f"{qn}.{child.name}", "method", module)))
            elif isinstance(child, ast.ClassDef):
                entries.append((child.lineno, i, child.name, Sym(f"{qn}.{child.name}", "class", module)))
            else:
                for name, ann, call in _assigned(child):
                    entries.append((child.lineno, i, name, Sym(f"{qn}.{name}", "variable", module, ann, call)))
        table = {}
        for _, _, name, sym in sorted(entries, key=lambda e: (e[0], e[1])):
            table[name] = sym
        for child in node.body:
            if not isinstance(child, (ast.FunctionDef, ast.AsyncFunctionDef)):
                continue
            if _decorated(child, "staticmethod") or _decorated(child, "classmethod"):
                continue
            args = child.args.posonlyargs + child.args.args
            if not args:
                continue
            me = args[0].arg
            for stmt in _own_statements(child.body):
                for target, ann, value in _attr_targets(stmt):
                    if (isinstance(target, ast.Attribute) and isinstance(target.value, ast.Name)
                            and target.value.id == me and target.attr not in table):
                        table[target.attr] = Sym(f"{qn}.{target.attr}", "variable", module, ann,
                                                 _call_chain(value))
        return table

    def bases(self, qn):
        module, node = self.classes[qn]
        out = []
        for b in node.bases:
            chain = _chain(b)
            if chain is None:
                continue
            target = self.resolve(chain, (module, None))
            if target is not None and target.kind == "class":
                out.append(target.qualname)
        return out

    def mro(self, qn):
        order, active = [], set()

        def visit(c):
            if c in active:
                raise _Cycle(c)
            if c in order:
                return
            order.append(c)
            active.add(c)
            for b in self.bases(c):
                visit(b)
            active.discard(c)

        visit(qn)
        return order

    # -- lookups ---------------------------------------------------------------

    def module_sym(self, m):
        if m in self.trees or m in self.packages:
            return Sym(m, "module", m)
        return None

    def _package(self, module):
        if module in self.is_pkg:
            return module
        return module.rsplit(".", 1)[0] if "." in module else ""

    def _base(self, node, module):
        if node.level == 0:
            return node.module
        parts = self._package(module).split(".") if self._package(module) else []
        up = node.level - 1
        if up > len(parts):
            return None
        parts = parts[:len(parts) - up]
        if node.module:
            parts += node.module.split(".")
        return ".".join(parts)

    def module_member(self, module, name, seen=frozenset()):
        if (module, name) in seen:
            return None
        seen = seen | {(module, name)}
        if module in self.top and name in self.top[module]:
            return self.top[module][name]
        sub = f"{module}.{name}"
        if sub in self.trees or sub in self.packages:
            return self.module_sym(sub)
        if module not in self.trees:
            return None
        found = self._via_imports(module, [n for n in self.trees[module].body
                                           if isinstance(n, (ast.Import, ast.ImportFrom))], name, seen)
        return None if found is _UNBOUND else found

    def _via_imports(self, module, imports, name, seen=frozenset()):
        result = _UNBOUND
        for node in imports:
            if isinstance(node, ast.Import):
                for a in node.names:
                    bound = a.asname or a.name.split(".")[0]
                    if bound == name:
                        result = self.module_sym(a.name if a.asname else a.name.split(".")[0])
            else:
                for a in node.names:
                    if a.name == "*" or (a.asname or a.name) != name:
                        continue
                    base = self._base(node, module)
                    if base is None:
                        result = None
                    elif not base:
                        result = self.module_sym(a.name)
                    else:
                        result = self.module_member(base, a.name, seen)
        if result is not _UNBOUND:
            return result
        for node in imports:
            if isinstance(node, ast.ImportFrom) and any(a.name == "*" for a in node.names):
                base = self._base(node, module)
                if base and base in self.trees:
                    found = self.module_member(base, name, seen)
                    if found is not None and not name.startswith("_"):
                        return found
        return _UNBOUND

    def _function(self, module, qualname):
        body = self.trees[module].body
        node = None
        for part in qualname.split("."):
            node = next((n for n in body if isinstance(n, (ast.FunctionDef, ast.AsyncFunctionDef,
                                                            ast.ClassDef)) and n.name == part), None)
            if node is None:
                return None
            body = node.body
        return node

    def _owner(self, module, qualname):
        if qualname is None:
            return None
        if f"{module}.{qualname}" in self.classes:
            return f"{module}.{qualname}"
        if "." in qualname and f"{module}.{qualname.rsplit('.', 1)[0]}" in self.classes:
            return f"{module}.{qualname.rsplit('.', 1)[0]}"
        return None

    def _local(self, module, qualname, fn, name):
        qual = f"{module}.{qualname}.{name}"
        owner = self._owner(module, qualname)
        static = _decorated(fn, "staticmethod")
        cands = []  # (line, order, value)
        a = fn.args
        positional = a.posonlyargs + a.args
        every = [(p, False) for p in positional]
        if a.vararg:
            every.append((a.vararg, True))
        every += [(p, False) for p in a.kwonlyargs]
        if a.kwarg:
            every.append((a.kwarg, True))
        for i, (p, star) in enumerate(every):
            if p.arg != name:
                continue
            typed = None
            if i == 0 and owner and not static and not star and p.annotation is None and positional:
                typed = owner
            if typed and _decorated(fn, "classmethod"):
                val = Sym(owner, "class", module)
            else:
                val = Sym(qual, "variable", module, None if star else p.annotation, owner=typed)
            cands.append((fn.lineno, len(cands), val))
        for stmt in _own_statements(fn.body):
            if isinstance(stmt, (ast.Import, ast.ImportFrom)):
                bound = [(al.asname or al.name.split(".")[0]) if isinstance(stmt, ast.Import)
                         else (al.asname or al.name) for al in stmt.names]
                if name in bound:
                    v = self._via_imports(module, [stmt], name)
                    cands.append((stmt.lineno, len(cands), None if v is _UNBOUND else v))
                continue
            if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
                if stmt.name == name:
                    cands.append((stmt.lineno, len(cands), Sym(qual, "variable", module)))
                continue
            for bound, ann, call in _assigned(stmt):
                if bound == name:
                    cands.append((stmt.lineno, len(cands), Sym(qual, "variable", module, ann, call)))
            for bound in _other_bindings(stmt):
                if bound == name:
                    cands.append((stmt.lineno, len(cands), Sym(qual, "variable", module)))
        if not cands:
            return _UNBOUND
        return max(cands, key=lambda c: (c[0], c[1]))[2]

    def lookup(self, name, scope):
        module, qualname = scope
        if qualname:
            fn = self._function(module, qualname)
            if isinstance(fn, (ast.FunctionDef, ast.AsyncFunctionDef)):
                local = self._local(module, qualname, fn, name)
                if local is not _UNBOUND:
                    return local
        owner = self._owner(module, qualname)
        if owner:
            try:
                found = self.lookup_member(owner, name)
            except _Cycle:
                found = None
            if found is not None:
                return found
        if name in self.top[module]:
            return self.top[module][name]
        imports = [n for n in self.trees[module].body if isinstance(n, (ast.Import, ast.ImportFrom))]
        return self._via_imports(module, imports, name)

    def lookup_member(self, class_qn, name):
        for c in self.mro(class_qn):
            if name in self.members[c]:
                return self.members[c][name]
        return None

    def class_of(self, sym):
        if sym is None or sym.kind != "variable":
            return None
        if sym.owner is not None:
            return Sym(sym.owner, "class", sym.module) if sym.owner in self.classes else None
        chain = _ann_chain(sym.ann)
        if sym.ann is not None:
            if chain is None:
                return None
            target = self.resolve(chain, (sym.module, None))
            return target if target is not None and target.kind == "class" else None
        if sym.call:
            target = self.resolve(sym.call, (sym.module, None))
            return target if target is not None and target.kind == "class" else None
        return None

    def member(self, sym, name):
        try:
            if sym.kind == "module":
                return self.module_member(sym.qualname, name)
            if sym.kind == "class":
                return self.lookup_member(sym.qualname, name)
            if sym.kind == "variable":
                cls = self.class_of(sym)
                return self.lookup_member(cls.qualname, name) if cls is not None else None
        except _Cycle:
            return None
        return None

    def resolve(self, chain, scope):
        if scope[0] not in self.trees or not chain:
            return None
        cur = self.lookup(chain[0], scope)
        if cur is _UNBOUND:
            cur = None
        for name in chain[1:]:
            if cur is None:
                return None
            cur = self.member(cur, name)
        return cur

    def member_names(self, sym):
        """Names that could follow *sym* in a chain (for query generation)."""
        if sym is None:
            return []
        try:
            if sym.kind == "module":
                names = set(self.top.get(sym.qualname, {}))
                names |= {m.rsplit(".", 1)[1] for m in self.trees if m.startswith(sym.qualname + ".")}
                return sorted(names)
            cls = sym if sym.kind == "class" else self.class_of(sym)
            if cls is None:
                return []
            return sorted({n for c in self.mro(cls.qualname) for n in self.members[c]})
        except _Cycle:
            return []


_UNBOUND = object()


def _decorated(fn, name):
    return any(_chain(d) == (name,) for d in fn.decorator_list)


def _assigned(stmt):
    """(name, annotation, call chain) for plain-name assignment targets."""
    out = []
    if isinstance(stmt, ast.Assign):
        call = _call_chain(stmt.value)
        for t in stmt.targets:
            if isinstance(t, ast.Name):
                out.append((t.id, None, call))
            elif isinstance(t, (ast.Tuple, ast.List)):
                for e in t.elts:
                    e = e.value if isinstance(e, ast.Starred) else e
                    if isinstance(e, ast.Name):
                        out.append((e.id, None, None))
    elif isinstance(stmt, ast.AnnAssign) and isinstance(stmt.target, ast.Name):
        out.append((stmt.target.id, stmt.annotation, _call_chain(stmt.value) if stmt.value else None))
    elif isinstance(stmt, ast.AugAssign) and isinstance(stmt.target, ast.Name):
        out.append((stmt.target.id, None, None))
    return out


def _attr_targets(stmt):
    if isinstance(stmt, ast.Assign):
        return [(t, None, stmt.value) for t in stmt.targets]
    if isinstance(stmt, ast.AnnAssign):
        return [(stmt.target, stmt.annotation, stmt.value)]
    return []


def _own_statements(body):
    """Statements of a function body, nested blocks included, nested scopes excluded."""
    for stmt in body:
        yield stmt
        if isinstance(stmt, (ast.FunctionDef, ast.AsyncFunctionDef, ast.ClassDef)):
            continue
        for field in ("body", "orelse", "finalbody"):
            yield from _own_statements(getattr(stmt, field, []) or [])
        for h in getattr(stmt, "handlers", []) or []:
            yield from _own_statements(h.body)


def _other_bindings(stmt):
    names = []
    if isinstance(stmt, (ast.For, ast.AsyncFor)):
        for n in ast.walk(stmt.target):
            if isinstance(n, ast.Name):
                names.append(n.id)
    if isinstance(stmt, (ast.With, ast.AsyncWith)):
        for item in stmt.items:
            if isinstance(item.optional_vars, ast.Name):
                names.append(item.optional_vars.id)
    return names


# ---------------------------------------------------------------------------
# Random repositories for resolution queries

_METHOD_NAMES = ("run", "get", "load", "save", "step")


def random_repo(rng: random.Random) -> dict[str, str]:
    """A small package with imports, inheritance (diamonds included) and typed locals."""
    files = {"pkg/__init__.py": '"""Package."""\n'}
    exported = []  # (module index, name)
    for i in range(rng.randint(2, 4)):
        lines = [f'"""Module {i}."""']
        visible = []
        for j, name in rng.sample(exported, min(len(exported), rng.randint(1, 3))):
            style = rng.randrange(5)
            if style == 0:
                lines.append(f"from pkg.m{j} import {name}")
                visible.append(name)
            elif style == 1:
                lines.append(f"from pkg.m{j} import {name} as {name}Alias")
                visible.append(f"{name}Alias")
            elif style == 2:
                lines.append(f"from .m{j} import {name}")
                visible.append(name)
            elif style == 3:
                lines.append(f"from . import m{j}")
                visible.append(f"m{j}.{name}")
            else:
                lines.append(f"import pkg.m{j}")
                visible.append(f"pkg.m{j}.{name}")
        if rng.random() < 0.5:
            lines.append("import requests")
        lines.append("")
        for k in range(rng.randint(1, 3)):
            cname = f"C{i}{k}"
            n_bases = min(len(visible), rng.choice((0, 1, 1, 2)))
            bases = rng.sample(visible, n_bases)
            lines.append(f"class {cname}({', '.join(bases)}):" if bases else f"class {cname}:")
            lines.append(f'    """Class {cname}."""')
            if visible and rng.random() < 0.5:
                lines.append(f"    slot: {rng.choice(visible)}")
            lines.append("    def __init__(self, name):")
            lines.append("        self.name = name")
            if visible and rng.random() < 0.7:
                lines.append(f"        self.part = {rng.choice(visible)}()")
            for m in rng.sample(_METHOD_NAMES, rng.randint(1, 3)):
                deco = rng.random()
                if deco < 0.15:
                    lines.append("    @staticmethod")
                    lines.append(f"    def {m}(x):")
                elif deco < 0.3:
                    lines.append("    @classmethod")
                    lines.append(f"    def {m}(cls, x):")
                else:
                    ann = f": {rng.choice(visible)}" if visible and rng.random() < 0.6 else ""
                    lines.append(f"    def {m}(self, x{ann}):")
                lines.extend("        " + s for s in _body_lines(rng, visible + [cname]))
            lines.append("")
            visible.append(cname)
            exported.append((i, cname))
        for k in range(rng.randint(1, 2)):
            fname = f"f{i}{k}"
            params = ", ".join(f"p{q}: {rng.choice(visible)}" if rng.random() < 0.7 else f"p{q}"
                               for q in range(rng.randint(0, 2)))
            lines.append(f"def {fname}({params}):")
            lines.extend("    " + s for s in _body_lines(rng, visible))
            lines.append("")
            exported.append((i, fname))
        lines.append(f"inst{i} = {rng.choice(visible)}()")
        if rng.random() < 0.3:
            lines.append(f"inst{i} = 3")
        if rng.random() < 0.3:
            lines.append(f"def inst{i}():\n    return None")
        files[f"pkg/m{i}.py"] = "\n".join(lines) + "\n"
    return files


def _body_lines(rng, visible):
    out = []
    for _ in range(rng.randint(1, 3)):
        r = rng.random()
        cls = rng.choice(visible)
        if r < 0.4:
            out.append(f"local = {cls}()")
        elif r < 0.6:
            out.append(f"typed: {cls} = make()")
        elif r < 0.75:
            out.append("local = 1")
        elif r < 0.9:
            out.append("for item in range(3):\n            pass")
        else:
            out.append("tmp = other = 0")
    out.append("return None")
    return out


def random_queries(oracle: ResolutionOracle, files: dict[str, str], rng: random.Random, n: int):
    """(chain, scope) pairs drawn from the identifiers of the repository."""
    vocab = sorted(set(re.findall(r"[A-Za-z_]\w*", "\n".join(files.values()))) | {"missing"})
    scopes = []
    for module, tree in oracle.trees.items():
        scopes.append((module, None))
        for node in tree.body:
            if isinstance(node, (ast.FunctionDef, ast.ClassDef)):
                scopes.append((module, node.name))
            if isinstance(node, ast.ClassDef):
                for child in node.body:
                    if isinstance(child, ast.FunctionDef):
                        scopes.append((module, f"{node.name}.{child.name}"))
    local_vocab = {}
    for rel, text in files.items():
        module = rel[:-3].replace("/", ".").removesuffix(".__init__")
        local_vocab[module] = sorted(set(re.findall(r"[A-Za-z_]\w*", text)))
    out = []
    for _ in range(n):
        scope = rng.choice(scopes)
        heads = local_vocab.get(scope[0]) or vocab
        chain = [rng.choice(heads) if rng.random() < 0.85 else rng.choice(vocab)]
        for _ in range(rng.choice((0, 1, 1, 2))):
            cur = oracle.resolve(tuple(chain), scope)
            names = oracle.member_names(cur)
            chain.append(rng.choice(names) if names and rng.random() < 0.8 else rng.choice(vocab))
        out.append((tuple(chain), scope))
    return out
