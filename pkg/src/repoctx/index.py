"""Repository-wide symbol index, import classification and name resolution."""
from __future__ import annotations

import fnmatch
import json
import logging
import os
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import NamedTuple, Union
from collections.abc import Mapping

from .syntax import (
    ClassDecl,
    FunctionDecl,
    ImportDecl,
    LexError,
    ModuleAst,
    ParseError,
    parse_module,
)

log = logging.getLogger(__name__)

DEFAULT_IGNORE = (".git", "__pycache__", "venv", ".venv")


class RepoIOError(OSError):
    def __init__(self, path, reason: str = "unreadable repository root"):
        super().__init__(f"{reason}: {path}")
        self.path = str(path)


class CycleError(ValueError):
    """A class hierarchy contains a base cycle."""

    def __init__(self, qualname: str):
        super().__init__(f"inheritance cycle through {qualname}")
        self.qualname = qualname


@dataclass(frozen=True)
class Symbol:
    qualified_name: str
    kind: str  # class | function | method | variable | module
    module: str | None
    span: tuple[int, int] | None = None
    signature_text: str | None = None
    docstring: str | None = None
    annotation: str | None = None
    call: str | None = None
    type_qualname: str | None = None
    decl: FunctionDecl | ClassDecl | None = field(default=None, compare=False, repr=False)

    @property
    def name(self) -> str:
        return self.qualified_name.rsplit(".", 1)[-1]

    @property
    def declaration(self) -> tuple[str | None, tuple[int, int] | None]:
        return (self.module, self.span)


@dataclass(frozen=True)
class UserDefined:
    module: str


@dataclass(frozen=True)
class ThirdParty:
    package: str
    version: str | None = None


@dataclass(frozen=True)
class Unresolved:
    pass


UNRESOLVED = Unresolved()
ImportResolution = Union[UserDefined, ThirdParty, Unresolved]


class Scope(NamedTuple):
    """Module path plus the module-relative qualname of the enclosing function or class."""

    module: str
    qualname: str | None = None


_REQ_LINE = re.compile(r"^\s*([A-Za-z0-9][A-Za-z0-9._-]*)\s*(?:\[[^\]]*\])?\s*==\s*([^\s;#,]+)")


def normalize_package(name: str) -> str:
    return re.sub(r"[-_.]+", "_", name.strip()).lower()


def third_party_versions(root) -> dict[str, str]:
    """Pinned ``name==version`` lines from ``requirements.txt`` under *root*."""
    path = Path(root) / "requirements.txt"
    try:
        text = path.read_text(encoding="utf-8")
    except OSError:
        return {}
    out: dict[str, str] = {}
    for line in text.splitlines():
        m = _REQ_LINE.match(line)
        if m:
            out[m.group(1)] = m.group(2)
    return out


def module_path_for(relpath: str) -> str | None:
    parts = relpath.replace("\\", "/")[: -len(".py")].split("/")
    if parts[-1] == "__init__":
        parts = parts[:-1]
    if not parts or not all(p.isidentifier() for p in parts):
        return None
    return ".".join(parts)


def _ignored(name: str, rel: str, ignore) -> bool:
    return any(fnmatch.fnmatch(name, pat) or fnmatch.fnmatch(rel, pat) for pat in ignore)


def build_repo_index(root, ignore=DEFAULT_IGNORE) -> RepoIndex:
    """Parse every ``.py`` file under *root* and assemble the index.

    Files that fail to lex or parse are listed in ``RepoIndex.errors`` and
    skipped; only an unreadable root is fatal.
    """
    root = Path(root)
    if not root.is_dir():
        raise RepoIOError(root)
    ignore = tuple(ignore)
    entries: list[tuple[str, str]] = []
    for dirpath, dirnames, filenames in os.walk(root):
        rel_dir = os.path.relpath(dirpath, root)
        rel_dir = "" if rel_dir == "." else rel_dir.replace(os.sep, "/")
        dirnames[:] = sorted(
            d for d in dirnames
            if not _ignored(d, f"{rel_dir}/{d}".lstrip("/"), ignore)
        )
        for fname in sorted(filenames):
            rel = f"{rel_dir}/{fname}".lstrip("/")
            if fname.endswith(".py") and not _ignored(fname, rel, ignore):
                entries.append((rel, os.path.join(dirpath, fname)))

    sources: dict[str, tuple[str, str]] = {}
    errors: list[tuple[str, str]] = []
    for rel, full in entries:
        module = module_path_for(rel)
        if module is None:
            errors.append((rel, "file name is not an importable module path"))
            continue
        try:
            with open(full, encoding="utf-8", newline="") as fh:
                sources[module] = (rel, fh.read())
        except (OSError, UnicodeDecodeError) as exc:
            errors.append((rel, f"unreadable: {exc}"))
    return RepoIndex.from_sources(root, sources, third_party_versions(root), errors)


@dataclass(frozen=True)
class RepoIndex:
    root: Path
    modules: Mapping[str, ModuleAst]
    sources: Mapping[str, str]
    symbols: Mapping[str, Symbol]
    hierarchy: Mapping[str, tuple[str, ...]]
    third_party: Mapping[str, str]
    errors: tuple[tuple[str, str], ...] = ()
    direct_bases: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    cyclic: frozenset = frozenset()
    open_classes: frozenset = frozenset()
    packages: frozenset = frozenset()

    # -- construction ------------------------------------------------------

    @classmethod
    def from_sources(cls, root, sources: Mapping[str, tuple[str, str]],
                     third_party: Mapping[str, str] | None = None,
                     errors=()) -> RepoIndex:
        """Index from ``{module: (relative path, source text)}``."""
        modules: dict[str, ModuleAst] = {}
        texts: dict[str, str] = {}
        errs = list(errors)
        for module in sorted(sources):
            rel, text = sources[module]
            try:
                modules[module] = parse_module(text, rel)
            except (LexError, ParseError) as exc:
                errs.append((rel, f"{type(exc).__name__}: {exc}"))
                log.warning("skipping %s: %s", rel, exc)
                continue
            texts[module] = text
        return cls._assemble(Path(root), modules, texts, dict(third_party or {}), tuple(errs))

    @classmethod
    def _assemble(cls, root, modules, texts, third_party, errors) -> RepoIndex:
        symbols: dict[str, Symbol] = {}
        for module in sorted(modules):
            ast_ = modules[module]
            entries: list[tuple[int, str, Symbol]] = []
            for fn in ast_.functions:
                entries.append((fn.span[0], fn.name, _function_symbol(module, fn)))
            for klass in ast_.classes:
                entries.append((klass.span[0], klass.name, _class_symbol(module, klass)))
            for var in ast_.variables:
                entries.append((var.line, var.name, _variable_symbol(module, module, var)))
            for _, _, sym in sorted(entries, key=lambda e: e[0]):
                symbols[sym.qualified_name] = sym
            for klass in ast_.classes:
                _add_members(symbols, module, klass)

        packages = set()
        for module in modules:
            parts = module.split(".")
            for i in range(1, len(parts)):
                packages.add(".".join(parts[:i]))

        partial = cls(
            root=root,
            modules=MappingProxyType(dict(modules)),
            sources=MappingProxyType(dict(texts)),
            symbols=MappingProxyType(symbols),
            hierarchy=MappingProxyType({}),
            third_party=MappingProxyType(dict(third_party)),
            errors=tuple(errors),
            packages=frozenset(packages),
        )
        direct: dict[str, tuple[str, ...]] = {}
        open_classes: set[str] = set()
        for qn, sym in symbols.items():
            if sym.kind != "class":
                continue
            decl: ClassDecl = sym.decl
            resolved = []
            if decl.has_unparsed_bases:
                open_classes.add(qn)
            for base in decl.bases:
                target = walk_chain(tuple(base.split(".")), Scope(sym.module, None), partial)[-1]
                if target is not None and target.kind == "class":
                    resolved.append(target.qualified_name)
                elif base not in ("object", "typing.Generic", "Generic", "ABC", "abc.ABC"):
                    open_classes.add(qn)
            if any(m.name in ("__getattr__", "__getattribute__") for m in decl.methods):
                open_classes.add(qn)
            direct[qn] = tuple(resolved)

        hierarchy: dict[str, tuple[str, ...]] = {}
        cyclic: set[str] = set()
        for qn in direct:
            try:
                hierarchy[qn] = tuple(linearize(qn, direct)[1:])
            except CycleError:
                cyclic.add(qn)
        errs = list(errors)
        for qn in sorted(cyclic):
            errs.append((qn, "inheritance cycle"))
        return replace(
            partial,
            hierarchy=MappingProxyType(hierarchy),
            direct_bases=MappingProxyType(direct),
            cyclic=frozenset(cyclic),
            open_classes=frozenset(open_classes),
            errors=tuple(errs),
        )

    def replace_module(self, module: str, source: str) -> RepoIndex:
        """A new index with *module*'s source replaced (the receiver is untouched)."""
        rel = self.modules[module].path if module in self.modules else module.replace(".", "/") + ".py"
        modules = dict(self.modules)
        texts = dict(self.sources)
        modules[module] = parse_module(source, rel)
        texts[module] = source
        return type(self)._assemble(self.root, modules, texts, dict(self.third_party),
                                    tuple(e for e in self.errors if e[1] != "inheritance cycle"))

    # -- queries -------------------------------------------------------------

    def module_symbol(self, module: str) -> Symbol | None:
        if module in self.modules:
            ast_ = self.modules[module]
            return Symbol(module, "module", module, (1, max(ast_.line_count, 1)),
                          docstring=ast_.module_docstring)
        if module in self.packages:
            return Symbol(module, "module", module)
        return None

    def is_closed_class(self, qualname: str) -> bool:
        """True when every member of the class is known to the index."""
        if qualname in self.cyclic:
            return False
        chain = (qualname, *self.hierarchy.get(qualname, ()))
        return not any(c in self.open_classes for c in chain)

    def function(self, module: str, qualname: str) -> FunctionDecl | None:
        ast_ = self.modules.get(module)
        return ast_.find_function(qualname) if ast_ is not None else None

    def _class_decl(self, module: str, qualname: str) -> ClassDecl | None:
        sym = self.symbols.get(f"{module}.{qualname}")
        return sym.decl if sym is not None and sym.kind == "class" else None

    def to_json(self) -> dict:
        return {
            "root": str(self.root),
            "modules": sorted(self.modules),
            "symbols": {
                qn: {
                    "kind": s.kind,
                    "module": s.module,
                    "span": list(s.span) if s.span else None,
                    "signature": s.signature_text,
                    "docstring": s.docstring,
                }
                for qn, s in sorted(self.symbols.items())
            },
            "hierarchy": {k: list(v) for k, v in sorted(self.hierarchy.items())},
            "third_party": dict(sorted(self.third_party.items())),
            "errors": [{"path": p, "message": m} for p, m in self.errors],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)


def _function_symbol(module: str, fn: FunctionDecl) -> Symbol:
    return Symbol(
        qualified_name=f"{module}.{fn.qualname}",
        kind="method" if fn.is_method else "function",
        module=module,
        span=fn.span,
        signature_text=fn.signature,
        docstring=fn.docstring,
        decl=fn,
    )


def _class_symbol(module: str, klass: ClassDecl) -> Symbol:
    return Symbol(
        qualified_name=f"{module}.{klass.qualname}",
        kind="class",
        module=module,
        span=klass.span,
        signature_text=klass.signature,
        docstring=klass.docstring,
        decl=klass,
    )


def _variable_symbol(module: str, owner: str, var) -> Symbol:
    sig = f"{var.name}: {var.annotation}" if var.annotation else None
    return Symbol(
        qualified_name=f"{owner}.{var.name}",
        kind="variable",
        module=module,
        span=(var.line, var.line),
        signature_text=sig,
        annotation=var.annotation,
        call=var.call,
    )


def _add_members(symbols: dict, module: str, klass: ClassDecl) -> None:
    owner = f"{module}.{klass.qualname}"
    entries: list[tuple[int, Symbol]] = []
    for var in klass.attributes:
        entries.append((var.line, _variable_symbol(module, owner, var)))
    for inner in klass.classes:
        entries.append((inner.span[0], _class_symbol(module, inner)))
    for fn in klass.methods:
        entries.append((fn.span[0], _function_symbol(module, fn)))
    for _, sym in sorted(entries, key=lambda e: e[0]):
        symbols[sym.qualified_name] = sym
    for inner in klass.classes:
        _add_members(symbols, module, inner)


def linearize(qualname: str, bases: Mapping[str, tuple[str, ...]]) -> list[str]:
    """Left-to-right depth-first order with duplicate pruning (not C3).

    The class itself comes first. Raises CycleError on a base cycle.
    """
    order: list[str] = []
    seen: set[str] = set()
    active: set[str] = set()

    def visit(name: str) -> None:
        if name in active:
            raise CycleError(name)
        if name in seen:
            return
        seen.add(name)
        active.add(name)
        order.append(name)
        for base in bases.get(name, ()):
            visit(base)
        active.discard(name)

    visit(qualname)
    return order


# ---------------------------------------------------------------------------
# Import resolution


def _package_of(module: str, index: RepoIndex) -> str:
    ast_ = index.modules.get(module)
    if ast_ is not None and ast_.is_package:
        return module
    return module.rsplit(".", 1)[0] if "." in module else ""


def absolute_base(decl: ImportDecl, importing_module: str, index: RepoIndex) -> str | None:
    """Absolute dotted module named by *decl* (None when the dots escape the root)."""
    if decl.level == 0:
        return decl.module_path
    package = _package_of(importing_module, index)
    parts = package.split(".") if package else []
    up = decl.level - 1
    if up > len(parts):
        return None
    parts = parts[: len(parts) - up] if up else parts
    if decl.module_path:
        parts = parts + decl.module_path.split(".")
    return ".".join(parts)


def _exists(index: RepoIndex, module: str) -> bool:
    return module in index.modules


def resolve_import(decl: ImportDecl, importing_module: str, index: RepoIndex) -> ImportResolution:
    base = absolute_base(decl, importing_module, index)
    if base is None:
        return UNRESOLVED
    if decl.form == "from":
        for name, _ in decl.imported_names:
            if name == "*":
                continue
            sub = f"{base}.{name}" if base else name
            if _exists(index, sub):
                return UserDefined(sub)
    if base and _exists(index, base):
        return UserDefined(base)
    if decl.level > 0 or not base or base in index.packages:
        return UNRESOLVED
    package = base.split(".")[0]
    if not normalize_package(package):
        return UNRESOLVED
    return ThirdParty(package, lookup_version(package, index.third_party))


def lookup_version(package: str, versions: Mapping[str, str]) -> str | None:
    key = normalize_package(package)
    for name, version in versions.items():
        if normalize_package(name) == key:
            return version
    return None


def import_modules(decl: ImportDecl, importing_module: str, index: RepoIndex) -> list[str]:
    """Every in-repo module a single import statement pulls in."""
    base = absolute_base(decl, importing_module, index)
    if base is None:
        return []
    out: list[str] = []
    if decl.form == "from":
        for name, _ in decl.imported_names:
            sub = f"{base}.{name}" if base else name
            if name != "*" and _exists(index, sub):
                out.append(sub)
    if base and _exists(index, base) and (not out or decl.form == "import"):
        out.insert(0, base)
    return out


# ---------------------------------------------------------------------------
# Name resolution


def _module_member(index: RepoIndex, module: str, name: str, visited: frozenset) -> Symbol | None:
    key = (module, name)
    if key in visited:
        return None
    visited = visited | {key}
    sym = index.symbols.get(f"{module}.{name}")
    if sym is not None and sym.module == module:
        return sym
    sub = f"{module}.{name}"
    if sub in index.modules or sub in index.packages:
        return index.module_symbol(sub)
    ast_ = index.modules.get(module)
    if ast_ is None:
        return None
    found = _import_binding(index, module, ast_.imports, name, visited)
    if found is not _MISSING:
        return found
    return None


_MISSING = object()


def _import_binding(index: RepoIndex, module: str, imports, name: str, visited=frozenset()):
    """Resolve *name* through import statements; _MISSING when nothing binds it.

    Returns None for names bound to something outside the repository.
    """
    target = _MISSING
    for decl in imports:
        for bound, kind, detail in decl.bindings():
            if bound != name:
                continue
            if kind == "module":
                target = index.module_symbol(detail)
            else:
                base = absolute_base(decl, module, index)
                if base is None:
                    target = None
                elif not base:
                    target = index.module_symbol(detail)
                else:
                    target = _module_member(index, base, detail, visited)
    if target is not _MISSING:
        return target
    for decl in imports:
        if decl.form == "from" and any(n == "*" for n, _ in decl.imported_names):
            base = absolute_base(decl, module, index)
            if base and base in index.modules:
                found = _module_member(index, base, name, visited)
                if found is not None and not name.startswith("_"):
                    return found
    return _MISSING


def _owner_class(index: RepoIndex, scope: Scope) -> str | None:
    if scope.qualname is None:
        return None
    if index._class_decl(scope.module, scope.qualname) is not None:
        return f"{scope.module}.{scope.qualname}"
    fn = index.function(scope.module, scope.qualname)
    if fn is not None and fn.is_method and "." in scope.qualname:
        return f"{scope.module}.{scope.qualname.rsplit('.', 1)[0]}"
    return None


def _local_symbol(index: RepoIndex, scope: Scope, fn: FunctionDecl, name: str) -> Symbol | None:
    """Parameters, assignments and local imports of *fn* (last definition wins)."""
    best = None  # (line, order, symbol-or-callable)
    qual = f"{scope.module}.{fn.qualname}.{name}"
    order = 0
    owner = _owner_class(index, scope) if fn.is_method else None
    real = [p for p in fn.params if not p.is_marker]
    for i, p in enumerate(real):
        if p.name != name:
            continue
        type_qn = None
        if i == 0 and owner is not None and not fn.is_static and not p.star and p.annotation is None:
            type_qn = owner
        kind_ann = p.annotation if not p.star else None
        sym = Symbol(qual, "variable", scope.module, (fn.def_line, fn.def_line),
                     annotation=kind_ann, type_qualname=type_qn)
        if fn.is_classmethod and type_qn is not None:
            sym = index.symbols.get(owner)
        best = (fn.def_line, order, sym)
        order += 1
    for b in fn.locals:
        if b.name == name:
            cand = (b.line, order, Symbol(qual, "variable", scope.module, (b.line, b.line),
                                          annotation=b.annotation, call=b.call))
            order += 1
            if best is None or cand[:2] >= best[:2]:
                best = cand
    for decl in fn.imports:
        if any(bound == name for bound, _, _ in decl.bindings()):
            target = _import_binding(index, scope.module, (decl,), name)
            cand = (decl.pos[0], order, None if target is _MISSING else target)
            order += 1
            if best is None or cand[:2] >= best[:2]:
                best = cand
    if best is None:
        return _MISSING
    return best[2]


def lookup_name(name: str, scope: Scope, index: RepoIndex):
    """Resolve a bare name in *scope*: locals, enclosing class, module, imports.

    Returns a Symbol, None for a name bound to something outside the
    repository (e.g. a third-party import), or _MISSING when unbound.
    """
    if scope.module not in index.modules:
        return _MISSING
    fn = index.function(scope.module, scope.qualname) if scope.qualname else None
    if fn is not None:
        local = _local_symbol(index, scope, fn, name)
        if local is not _MISSING:
            return local
    owner = _owner_class(index, scope)
    if owner is not None and owner in index.symbols:
        try:
            member = lookup_member(index.symbols[owner], name, index)
        except CycleError:
            member = None
        if member is not None:
            return member
    sym = index.symbols.get(f"{scope.module}.{name}")
    if sym is not None and sym.kind in ("class", "function", "variable"):
        return sym
    return _import_binding(index, scope.module, index.modules[scope.module].imports, name)


def is_bound(name: str, scope: Scope, index: RepoIndex) -> bool:
    return lookup_name(name, scope, index) is not _MISSING


def _type_chain(text: str | None) -> tuple[str, ...] | None:
    if not text:
        return None
    t = text.strip().strip("'\"").strip()
    m = re.fullmatch(r"(?:typing\.)?Optional\[\s*(.+?)\s*\]", t)
    if m:
        t = m.group(1).strip("'\"")
    parts = [p.strip() for p in t.split("|")]
    parts = [p for p in parts if p != "None"]
    if len(parts) != 1:
        return None
    t = parts[0]
    if not re.fullmatch(r"[^\W\d]\w*(?:\.[^\W\d]\w*)*", t):
        return None
    return tuple(t.split("."))


def class_of(sym: Symbol | None, index: RepoIndex) -> Symbol | None:
    """The user-defined class a variable symbol is known to hold, if any."""
    if sym is None or sym.kind != "variable":
        return None
    if sym.type_qualname is not None:
        target = index.symbols.get(sym.type_qualname)
        return target if target is not None and target.kind == "class" else None
    for text in (sym.annotation, sym.call):
        chain = _type_chain(text)
        if chain is None:
            continue
        target = walk_chain(chain, Scope(sym.module, None), index)[-1]
        if target is not None and target.kind == "class":
            return target
        if text is sym.annotation:
            return None  # an explicit annotation that is not a repo class
    return None


def member_of(sym: Symbol, name: str, index: RepoIndex) -> Symbol | None:
    if sym.kind == "module":
        return _module_member(index, sym.qualified_name, name, frozenset())
    if sym.kind == "class":
        return lookup_member(sym, name, index)
    if sym.kind == "variable":
        cls = class_of(sym, index)
        return lookup_member(cls, name, index) if cls is not None else None
    return None


def walk_chain(chain, scope: Scope, index: RepoIndex) -> list[Symbol | None]:
    """Resolve every prefix of *chain*; one entry per element."""
    head = lookup_name(chain[0], scope, index)
    cur = None if head is _MISSING else head
    steps = [cur]
    for name in chain[1:]:
        if cur is not None:
            try:
                cur = member_of(cur, name, index)
            except CycleError:
                cur = None
        steps.append(cur)
    return steps


def resolve_name(chain, scope, index: RepoIndex) -> Symbol | None:
    """Resolve an identifier chain such as ``("svc", "get_service_state")``.

    Returns None (unresolved) rather than raising.
    """
    scope = Scope(*scope) if not isinstance(scope, Scope) else scope
    chain = tuple(chain)
    if not chain or scope.module not in index.modules:
        return None
    return walk_chain(chain, scope, index)[-1]


def lookup_member(class_symbol: Symbol, member: str, index: RepoIndex) -> Symbol | None:
    """Search the class, then its linearized bases; first match wins."""
    if class_symbol.kind != "class":
        raise ValueError(f"{class_symbol.qualified_name} is not a class")
    qn = class_symbol.qualified_name
    if qn in index.cyclic:
        raise CycleError(qn)
    for owner in (qn, *index.hierarchy.get(qn, ())):
        sym = index.symbols.get(f"{owner}.{member}")
        if sym is not None:
            return sym
    return None
