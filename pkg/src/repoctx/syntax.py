"""Lexer and declaration-level parser for a subset of Python 3.

The parser understands module, class and function declarations, imports,
assignments and docstrings. Any other statement is kept as a generic
statement node (kind + tokens) and, at module or class level, reported as an
opaque line span.
"""
from __future__ import annotations

import ast
import inspect
import keyword
import re
from dataclasses import dataclass

__all__ = [
    "KEYWORDS",
    "ClassDecl",
    "FunctionDecl",
    "IdentifierOccurrence",
    "ImportDecl",
    "LexError",
    "LocalBinding",
    "ModuleAst",
    "Parameter",
    "ParseError",
    "Stmt",
    "Token",
    "VariableDecl",
    "bound_names",
    "class_signature_text",
    "function_line_count",
    "identifier_chains",
    "normalize_newlines",
    "parse_block",
    "parse_module",
    "signature_text",
    "tokenize",
]

KEYWORDS = frozenset(keyword.kwlist)

IDENTIFIER = "identifier"
KEYWORD = "keyword"
NUMBER = "number"
STRING = "string"
OPERATOR = "operator"
PUNCT = "punct"
NEWLINE = "newline"
INDENT = "indent"
DEDENT = "dedent"
COMMENT = "comment"
ENDMARKER = "endmarker"

LAYOUT_KINDS = frozenset({NEWLINE, INDENT, DEDENT, COMMENT, ENDMARKER})


class LexError(ValueError):
    def __init__(self, pos: tuple[int, int], reason: str):
        super().__init__(f"{pos[0]}:{pos[1]}: {reason}")
        self.pos = pos
        self.reason = reason


class ParseError(ValueError):
    def __init__(self, pos: tuple[int, int], expected: str):
        super().__init__(f"{pos[0]}:{pos[1]}: expected {expected}")
        self.pos = pos
        self.expected = expected


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    trivia: str = ""

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.col)

    @property
    def end_line(self) -> int:
        return self.line + self.text.count("\n")


_PREFIX = r"(?:[rRbBuUfF]|[rR][bBfF]|[bBfF][rR])?"
_DIGITS = r"[0-9](?:_?[0-9])*"
_EXP = rf"(?:[eE][-+]?{_DIGITS})"
_MASTER = re.compile(
    rf"""
     (?P<ws>[ \t\f]+)
    |(?P<cont>\\\n)
    |(?P<nl>\n)
    |(?P<comment>\#[^\n]*)
    |(?P<string>{_PREFIX}(?:
          '''[^'\\]*(?:(?:\\.|'(?!''))[^'\\]*)*'''
        | \"\"\"[^"\\]*(?:(?:\\.|"(?!""))[^"\\]*)*\"\"\"
        | '[^'\\\n]*(?:\\.[^'\\\n]*)*'
        | "[^"\\\n]*(?:\\.[^"\\\n]*)*"
      ))
    |(?P<strstart>{_PREFIX}['"])
    |(?P<number>(?:
          0[xX](?:_?[0-9a-fA-F])+
        | 0[bB](?:_?[01])+
        | 0[oO](?:_?[0-7])+
        | (?:(?:{_DIGITS})?\.{_DIGITS}{_EXP}?
           | {_DIGITS}\.{_EXP}?
           | {_DIGITS}{_EXP}?
          )[jJ]?
      ))
    |(?P<name>[^\W\d]\w*)
    |(?P<op>\*\*=|//=|>>=|<<=|\.\.\.|->|:=|==|!=|<=|>=|\*\*|//|<<|>>|[-+*/%&|^@]=
        |[-+*/%@&|^~<>=]|[()\[\]{{}},:;.])
    """,
    re.VERBOSE | re.DOTALL,
)
_PUNCT = frozenset(["(", ")", "[", "]", "{", "}", ",", ":", ";", ".", "..."])
_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = frozenset(_OPENERS.values())


def normalize_newlines(source: str) -> str:
    return source.replace("\r\n", "\n").replace("\r", "\n")


def tokenize(source: str) -> list[Token]:
    """Tokenize *source*, emitting synthetic indent/dedent tokens.

    Whitespace, blank lines, line continuations and newlines inside brackets
    are not tokens; they are kept as the ``trivia`` of the following token so
    that ``"".join(t.trivia + t.text for t in tokens)`` gives back the
    (newline-normalized) source.
    """
    src = normalize_newlines(source)
    n = len(src)
    tokens: list[Token] = []
    append = tokens.append
    pos = 0
    line = 1
    line_start = 0
    last_end = 0
    depth = 0
    at_line_start = True
    indents = [""]
    match = _MASTER.match

    while pos < n:
        m = match(src, pos)
        if m is None:
            raise LexError((line, pos - line_start + 1), f"invalid character {src[pos]!r}")
        group = m.lastgroup
        text = m.group()
        end = m.end()
        col = pos - line_start + 1

        if group == "ws":
            pos = end
            continue
        if group == "cont":
            line += 1
            line_start = end
            pos = end
            continue
        if group == "nl":
            if depth == 0 and not at_line_start:
                append(Token(NEWLINE, "\n", line, col, src[last_end:pos]))
                last_end = end
                at_line_start = True
            line += 1
            line_start = end
            pos = end
            continue
        if group == "strstart":
            raise LexError((line, col), "unterminated string")
        if group == "comment":
            append(Token(COMMENT, text, line, col, src[last_end:pos]))
            last_end = end
            pos = end
            continue

        if at_line_start and depth == 0:
            indent = src[line_start:pos]
            if " " in indent and "\t" in indent:
                raise LexError((line, 1), "indentation mixes tabs and spaces")
            top = indents[-1]
            if indent != top:
                if indent.startswith(top):
                    indents.append(indent)
                    append(Token(INDENT, "", line, 1))
                else:
                    while len(indents) > 1 and len(indent) < len(indents[-1]):
                        indents.pop()
                        append(Token(DEDENT, "", line, 1))
                    if indents[-1] != indent:
                        raise LexError((line, 1), "inconsistent indentation (tabs and spaces)")
            at_line_start = False

        if group == "string":
            kind = STRING
        elif group == "number":
            kind = NUMBER
        elif group == "name":
            kind = KEYWORD if text in KEYWORDS else IDENTIFIER
        else:
            kind = PUNCT if text in _PUNCT else OPERATOR
            if text in _OPENERS:
                depth += 1
            elif text in _CLOSERS and depth > 0:
                depth -= 1
        append(Token(kind, text, line, col, src[last_end:pos]))
        last_end = end
        if kind == STRING and "\n" in text:
            line += text.count("\n")
            line_start = pos + text.rfind("\n") + 1
        pos = end

    eof_col = pos - line_start + 1
    if not at_line_start:
        append(Token(NEWLINE, "", line, eof_col))
    for _ in indents[1:]:
        append(Token(DEDENT, "", line, eof_col))
    append(Token(ENDMARKER, "", line, eof_col, src[last_end:]))
    return tokens


# ---------------------------------------------------------------------------
# Generic statement tree


@dataclass(frozen=True)
class Stmt:
    """One logical statement; compound statements carry their block in ``body``."""

    kind: str
    tokens: tuple[Token, ...]
    body: tuple[Stmt, ...]
    first_line: int
    last_line: int

    def walk(self):
        yield self
        for child in self.body:
            yield from child.walk()


_COMPOUND = frozenset(
    ["if", "elif", "else", "while", "for", "try", "except", "finally", "with", "def", "class"]
)
CLAUSE_KINDS = frozenset(["elif", "else", "except", "finally", "case"])
_SIMPLE_KEYWORDS = frozenset(
    ["return", "pass", "break", "continue", "raise", "import", "from", "del", "assert",
     "global", "nonlocal"]
)
_AUG_OPS = frozenset(
    ["+=", "-=", "*=", "/=", "//=", "%=", "**=", ">>=", "<<=", "&=", "|=", "^=", "@="]
)
_ATOMS = frozenset([IDENTIFIER, NUMBER, STRING])


def _depth0(tokens) -> list[tuple[int, Token]]:
    out = []
    depth = 0
    for i, tok in enumerate(tokens):
        if tok.text in _OPENERS and tok.kind == PUNCT:
            depth += 1
        elif tok.text in _CLOSERS and tok.kind == PUNCT:
            depth -= 1
        elif depth == 0:
            out.append((i, tok))
    return out


def _header_colon(tokens) -> int | None:
    lambdas = 0
    for i, tok in _depth0(tokens):
        if tok.kind == KEYWORD and tok.text == "lambda":
            lambdas += 1
        elif tok.kind == PUNCT and tok.text == ":":
            if lambdas:
                lambdas -= 1
            else:
                return i
    return None


def _compound_kind(tokens) -> str | None:
    first = tokens[0]
    if first.kind == KEYWORD:
        if first.text in _COMPOUND:
            return first.text
        if first.text == "async" and len(tokens) > 1 and tokens[1].text in ("def", "for", "with"):
            return tokens[1].text
        return None
    if first.kind == IDENTIFIER and first.text in ("match", "case") and len(tokens) > 2:
        if tokens[1].text in ("=", ".", ":", ",", ")", "]", "}") or tokens[1].kind == OPERATOR:
            if tokens[1].text not in ("-", "~", "*"):
                return None
        colon = _header_colon(tokens)
        if colon is not None and colon >= 2:
            if not any(t.text == "=" for _, t in _depth0(tokens[:colon])):
                return first.text
    return None


def _check_brackets(tokens) -> None:
    stack: list[Token] = []
    for tok in tokens:
        if tok.kind != PUNCT:
            continue
        if tok.text in _OPENERS:
            stack.append(tok)
        elif tok.text in _CLOSERS:
            if not stack or _OPENERS[stack[-1].text] != tok.text:
                raise ParseError(tok.pos, "matching bracket")
            stack.pop()
    if stack:
        raise ParseError(stack[-1].pos, f"'{_OPENERS[stack[-1].text]}'")


def _check_expression_tokens(tokens, kind: str) -> None:
    last = tokens[-1]
    star_import = kind == "from" and last.text == "*"
    if (last.kind == OPERATOR and not star_import) or last.text in (".", ":"):
        raise ParseError(last.pos, "expression")
    if kind in ("import", "from"):
        return
    prev = None
    for tok in tokens:
        if prev is not None:
            if prev.text == "." and prev.kind == PUNCT and tok.kind != IDENTIFIER:
                raise ParseError(tok.pos, "attribute name")
            if prev.kind in _ATOMS and tok.kind in _ATOMS and not (
                prev.kind == STRING and tok.kind == STRING
            ):
                raise ParseError(tok.pos, "operator")
        prev = tok


def _simple_kind(tokens) -> str:
    first = tokens[0]
    if first.kind == KEYWORD and first.text in _SIMPLE_KEYWORDS:
        return first.text
    if first.kind == OPERATOR and first.text == "@":
        return "decorator"
    top = _depth0(tokens)
    for i, t in top:
        if t.kind == KEYWORD and t.text == "lambda":
            break
        if t.kind == OPERATOR and t.text == "=":
            break
        if t.kind == PUNCT and t.text == ":" and i > 0:
            return "annassign"
    if any(t.kind == OPERATOR and t.text == "=" for _, t in top):
        return "assign"
    if any(t.kind == OPERATOR and t.text in _AUG_OPS for _, t in top):
        return "augassign"
    return "expr"


def _split_semicolons(tokens) -> list[list[Token]]:
    parts: list[list[Token]] = []
    start = 0
    for i, tok in _depth0(tokens):
        if tok.kind == PUNCT and tok.text == ";":
            parts.append(list(tokens[start:i]))
            start = i + 1
    parts.append(list(tokens[start:]))
    if parts and not parts[-1]:
        parts.pop()
    for part in parts:
        if not part:
            raise ParseError(tokens[0].pos, "statement before ';'")
    return parts


def _simple(tokens) -> Stmt:
    kind = _simple_kind(tokens)
    _check_expression_tokens(tokens, kind)
    return Stmt(kind, tuple(tokens), (), tokens[0].line, tokens[-1].end_line)


class _BlockParser:
    def __init__(self, tokens: list[Token]):
        self.toks = [t for t in tokens if t.kind != COMMENT]
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def suite(self, top: bool) -> list[Stmt]:
        out: list[Stmt] = []
        while True:
            tok = self.peek()
            if tok.kind == ENDMARKER:
                break
            if tok.kind == DEDENT:
                if top:
                    raise ParseError(tok.pos, "statement")
                break
            if tok.kind == INDENT:
                raise ParseError(tok.pos, "statement (unexpected indent)")
            if tok.kind == NEWLINE:
                self.i += 1
                continue
            out.extend(self.statement())
        return out

    def logical_line(self) -> list[Token]:
        start = self.i
        while self.toks[self.i].kind not in (NEWLINE, ENDMARKER):
            self.i += 1
        line = self.toks[start:self.i]
        if self.toks[self.i].kind == NEWLINE:
            self.i += 1
        return line

    def statement(self) -> list[Stmt]:
        line = self.logical_line()
        _check_brackets(line)
        kind = _compound_kind(line)
        if kind is None:
            return [_simple(part) for part in _split_semicolons(line)]
        colon = _header_colon(line)
        if colon is None:
            raise ParseError(line[-1].pos, "':'")
        header, rest = line[: colon + 1], line[colon + 1:]
        if kind not in ("def", "class") and len(header) > 2:
            _check_expression_tokens(header[1:-1], kind)
        if rest:
            if _compound_kind(rest) is not None:
                raise ParseError(rest[0].pos, "simple statement")
            body = tuple(_simple(part) for part in _split_semicolons(rest))
        else:
            tok = self.peek()
            if tok.kind != INDENT:
                raise ParseError(tok.pos, "an indented block")
            self.i += 1
            body = tuple(self.suite(top=False))
            if not body:
                raise ParseError(tok.pos, "statement")
            if self.peek().kind == DEDENT:
                self.i += 1
        last = body[-1].last_line if body else header[-1].end_line
        return [Stmt(kind, tuple(header), body, header[0].line, last)]


def parse_block(tokens: list[Token]) -> list[Stmt]:
    """Build the statement tree for a token stream (comments are skipped)."""
    return _BlockParser(tokens).suite(top=True)


# ---------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True)
class Parameter:
    name: str
    annotation: str | None = None
    default: str | None = None
    # "" for ordinary parameters, "*"/"**" for var-args, "/" and "*" markers
    # have an empty name.
    star: str = ""

    @property
    def is_marker(self) -> bool:
        return not self.name

    def render(self) -> str:
        if self.is_marker:
            return self.star
        text = self.star + self.name
        if self.annotation is not None:
            text += f": {self.annotation}"
            if self.default is not None:
                text += f" = {self.default}"
        elif self.default is not None:
            text += f"={self.default}"
        return text


@dataclass(frozen=True)
class ImportDecl:
    form: str  # "import" | "from"
    module_path: str
    level: int
    imported_names: tuple[tuple[str, str | None], ...]
    pos: tuple[int, int]
    alias: str | None = None
    end_line: int = 0

    @property
    def dotted(self) -> str:
        return "." * self.level + self.module_path

    def bindings(self) -> list[tuple[str, str, str | None]]:
        """Local names introduced: ``(bound_name, kind, detail)``.

        For plain imports ``kind`` is "module" and detail the dotted path the
        name refers to; for from-imports ``kind`` is "name" and detail the
        imported member name.
        """
        if self.form == "import":
            if self.alias:
                return [(self.alias, "module", self.module_path)]
            head = self.module_path.split(".")[0]
            return [(head, "module", head)]
        return [(alias or name, "name", name) for name, alias in self.imported_names if name != "*"]


@dataclass(frozen=True)
class LocalBinding:
    name: str
    line: int
    annotation: str | None = None
    call: str | None = None


@dataclass(frozen=True)
class FunctionDecl:
    name: str
    qualname: str
    params: tuple[Parameter, ...]
    return_annotation: str | None
    docstring: str | None
    body_span: tuple[int, int]
    decorators: tuple[str, ...]
    is_method: bool
    span: tuple[int, int]
    def_line: int
    header_end: tuple[int, int]
    body_indent: int | None
    locals: tuple[LocalBinding, ...] = ()
    imports: tuple[ImportDecl, ...] = ()

    @property
    def signature(self) -> str:
        return signature_text(self)

    @property
    def is_static(self) -> bool:
        return "staticmethod" in self.decorators

    @property
    def is_classmethod(self) -> bool:
        return "classmethod" in self.decorators


@dataclass(frozen=True)
class VariableDecl:
    name: str
    line: int
    annotation: str | None = None
    call: str | None = None


@dataclass(frozen=True)
class ClassDecl:
    name: str
    qualname: str
    bases: tuple[str, ...]
    docstring: str | None
    methods: tuple[FunctionDecl, ...]
    attributes: tuple[VariableDecl, ...]
    span: tuple[int, int]
    body_span: tuple[int, int]
    decorators: tuple[str, ...] = ()
    classes: tuple[ClassDecl, ...] = ()
    has_unparsed_bases: bool = False

    @property
    def signature(self) -> str:
        return class_signature_text(self)


@dataclass(frozen=True)
class IdentifierOccurrence:
    chain: tuple[str, ...]
    pos: tuple[int, int]


@dataclass(frozen=True)
class ModuleAst:
    path: str
    module_docstring: str | None
    imports: tuple[ImportDecl, ...]
    classes: tuple[ClassDecl, ...]
    functions: tuple[FunctionDecl, ...]
    opaque_statements: tuple[tuple[int, int], ...]
    occurrences: tuple[IdentifierOccurrence, ...]
    variables: tuple[VariableDecl, ...] = ()
    line_count: int = 0

    @property
    def is_package(self) -> bool:
        return self.path.replace("\\", "/").rsplit("/", 1)[-1] == "__init__.py"

    def iter_functions(self):
        """All functions and methods, including those of nested classes."""
        yield from self.functions

        def visit(cls: ClassDecl):
            yield from cls.methods
            for inner in cls.classes:
                yield from visit(inner)

        for cls in self.classes:
            yield from visit(cls)

    def iter_classes(self):
        def visit(cls: ClassDecl):
            yield cls
            for inner in cls.classes:
                yield from visit(inner)

        for cls in self.classes:
            yield from visit(cls)

    def find_function(self, qualname: str) -> FunctionDecl | None:
        for fn in self.iter_functions():
            if fn.qualname == qualname:
                found = fn
                break
        else:
            return None
        # last definition wins
        for fn in self.iter_functions():
            if fn.qualname == qualname:
                found = fn
        return found

    def occurrences_between(self, first: int, last: int) -> list[IdentifierOccurrence]:
        return [o for o in self.occurrences if first <= o.pos[0] <= last]


def _join(tokens) -> str:
    """Render a token slice as compact source text."""
    parts: list[str] = []
    for i, tok in enumerate(tokens):
        if tok.kind in LAYOUT_KINDS:
            continue
        if i and parts and tok.trivia:
            gap = " " if tok.trivia.strip(" \t\f\\\n") == "" else ""
            if "\n" in tok.trivia and parts[-1] and parts[-1][-1] in "([{" or "\n" in tok.trivia and tok.text in (")", "]", "}"):
                gap = ""
            parts.append(gap)
        parts.append(tok.text)
    return "".join(parts).strip()


def _chain_at(tokens, i: int) -> tuple[list[str], int]:
    """Dotted name starting at ``tokens[i]``; returns (names, next index)."""
    names = [tokens[i].text]
    j = i + 1
    while (
        j + 1 < len(tokens)
        and tokens[j].kind == PUNCT
        and tokens[j].text == "."
        and tokens[j + 1].kind == IDENTIFIER
    ):
        names.append(tokens[j + 1].text)
        j += 2
    return names, j


def _split_commas(tokens) -> list[list[Token]]:
    parts: list[list[Token]] = []
    start = 0
    for i, tok in _depth0(tokens):
        if tok.kind == PUNCT and tok.text == ",":
            parts.append(list(tokens[start:i]))
            start = i + 1
    parts.append(list(tokens[start:]))
    return parts


def _docstring(body: tuple[Stmt, ...]) -> str | None:
    if not body:
        return None
    first = body[0]
    if first.kind != "expr" or not all(t.kind == STRING for t in first.tokens):
        return None
    if any(t.text.lstrip("rRbBuU")[:1] not in ("'", '"') for t in first.tokens):
        return None  # f-strings are not docstrings
    try:
        value = ast.literal_eval(" ".join(t.text for t in first.tokens))
    except (ValueError, SyntaxError):
        return None
    if isinstance(value, bytes):
        return None
    return inspect.cleandoc(value)


def _call_target(tokens) -> str | None:
    """``Name(...)`` / ``pkg.Name(...)`` as the whole expression -> dotted name."""
    if not tokens or tokens[0].kind != IDENTIFIER:
        return None
    names, j = _chain_at(tokens, 0)
    if j >= len(tokens) or tokens[j].text != "(" or tokens[-1].text != ")":
        return None
    depth = 0
    for k in range(j, len(tokens)):
        if tokens[k].text in _OPENERS:
            depth += 1
        elif tokens[k].text in _CLOSERS:
            depth -= 1
            if depth == 0 and k != len(tokens) - 1:
                return None
    return ".".join(names)


def _target_names(tokens) -> list[str]:
    """Plain names bound by an assignment target (tuple/list unpacking included)."""
    toks = [t for t in tokens if not (t.kind == PUNCT and t.text in "()[]")]
    names = []
    for part in _split_commas(toks):
        part = [t for t in part if not (t.kind == OPERATOR and t.text == "*")]
        if len(part) == 1 and part[0].kind == IDENTIFIER:
            names.append(part[0].text)
    return names


def _assignment(stmt: Stmt) -> list[VariableDecl]:
    toks = stmt.tokens
    top = _depth0(toks)
    if stmt.kind == "annassign":
        colon = next(i for i, t in top if t.kind == PUNCT and t.text == ":")
        target = toks[:colon]
        rest = toks[colon + 1:]
        eq = next((i for i, t in _depth0(rest) if t.kind == OPERATOR and t.text == "="), None)
        ann = rest if eq is None else rest[:eq]
        value = None if eq is None else rest[eq + 1:]
        if len(target) == 1 and target[0].kind == IDENTIFIER:
            return [VariableDecl(target[0].text, stmt.first_line, _join(ann) or None,
                                 _call_target(value) if value else None)]
        return []
    if stmt.kind == "augassign":
        if toks[0].kind == IDENTIFIER and toks[1].text in _AUG_OPS:
            return [VariableDecl(toks[0].text, stmt.first_line)]
        return []
    eqs = [i for i, t in top if t.kind == OPERATOR and t.text == "="]
    value = toks[eqs[-1] + 1:]
    call = _call_target(value)
    out = []
    start = 0
    for eq in eqs:
        names = _target_names(toks[start:eq])
        single = eq - start == 1
        for name in names:
            out.append(VariableDecl(name, stmt.first_line, None, call if single else None))
        start = eq + 1
    return out


def _attribute_assignment(stmt: Stmt, self_name: str) -> VariableDecl | None:
    toks = stmt.tokens
    if (
        len(toks) >= 4
        and toks[0].text == self_name
        and toks[1].text == "."
        and toks[2].kind == IDENTIFIER
        and stmt.kind in ("assign", "annassign", "augassign")
    ):
        if toks[3].text == ":":
            rest = toks[4:]
            eq = next((i for i, t in _depth0(rest) if t.text == "="), None)
            ann = rest if eq is None else rest[:eq]
            value = None if eq is None else rest[eq + 1:]
            return VariableDecl(toks[2].text, stmt.first_line, _join(ann) or None,
                                _call_target(value) if value else None)
        if toks[3].text == "=" or toks[3].text in _AUG_OPS:
            value = toks[4:]
            eqs = [i for i, t in _depth0(value) if t.text == "="]
            if eqs:
                value = value[eqs[-1] + 1:]
            return VariableDecl(toks[2].text, stmt.first_line, None, _call_target(value))
    return None


def _parse_import(stmt: Stmt) -> list[ImportDecl]:
    toks = stmt.tokens
    pos = toks[0].pos
    if toks[0].text == "import":
        out = []
        for part in _split_commas(toks[1:]):
            if not part or part[0].kind != IDENTIFIER:
                raise ParseError(part[0].pos if part else pos, "module name")
            names, j = _chain_at(part, 0)
            alias = None
            if j < len(part):
                if part[j].text != "as" or j + 1 >= len(part) or part[j + 1].kind != IDENTIFIER:
                    raise ParseError(part[j].pos, "'as' alias")
                alias = part[j + 1].text
            out.append(ImportDecl("import", ".".join(names), 0, (), part[0].pos, alias,
                                  stmt.last_line))
        return out
    # from-import
    i = 1
    level = 0
    while i < len(toks) and toks[i].text in (".", "..."):
        level += len(toks[i].text)
        i += 1
    module = ""
    if i < len(toks) and toks[i].kind == IDENTIFIER:
        names, i = _chain_at(toks, i)
        module = ".".join(names)
    if i >= len(toks) or toks[i].text != "import":
        raise ParseError(toks[min(i, len(toks) - 1)].pos, "'import'")
    if not module and not level:
        raise ParseError(toks[i].pos, "module name")
    rest = [t for t in toks[i + 1:] if not (t.kind == PUNCT and t.text in "()")]
    imported: list[tuple[str, str | None]] = []
    for part in _split_commas(rest):
        if not part:
            continue
        if part[0].text == "*":
            imported.append(("*", None))
            continue
        if part[0].kind != IDENTIFIER:
            raise ParseError(part[0].pos, "imported name")
        alias = None
        if len(part) > 1:
            if part[1].text != "as" or len(part) < 3:
                raise ParseError(part[1].pos, "'as' alias")
            alias = part[2].text
        imported.append((part[0].text, alias))
    if not imported:
        raise ParseError(pos, "imported name")
    return [ImportDecl("from", module, level, tuple(imported), pos, None, stmt.last_line)]


def _parse_params(tokens, open_pos) -> tuple[Parameter, ...]:
    params: list[Parameter] = []
    parts = _split_commas(tokens)
    for idx, part in enumerate(parts):
        if not part:
            if idx == len(parts) - 1 and idx > 0:
                continue  # trailing comma
            if len(parts) == 1:
                continue  # no parameters
            raise ParseError(open_pos, "parameter")
        star = ""
        k = 0
        if part[0].text in ("*", "**", "/"):
            star = part[0].text
            k = 1
            if len(part) == 1:
                if star == "**":
                    raise ParseError(part[0].pos, "parameter name")
                params.append(Parameter("", star=star))
                continue
        if part[k].kind != IDENTIFIER:
            raise ParseError(part[k].pos, "parameter name")
        name = part[k].text
        rest = part[k + 1:]
        annotation = default = None
        if rest:
            top = _depth0(rest)
            eq = next((i for i, t in top if t.text == "="), None)
            ann_toks = rest if eq is None else rest[:eq]
            if ann_toks:
                if ann_toks[0].text != ":" or len(ann_toks) == 1:
                    raise ParseError(ann_toks[0].pos, "':' or '='")
                annotation = _join(ann_toks[1:])
            if eq is not None:
                if eq + 1 >= len(rest):
                    raise ParseError(rest[eq].pos, "default value")
                default = _join(rest[eq + 1:])
        params.append(Parameter(name, annotation, default, star))
    return tuple(params)


def _decorator_name(stmt: Stmt) -> str:
    toks = stmt.tokens
    if len(toks) > 1 and toks[1].kind == IDENTIFIER:
        names, _ = _chain_at(toks, 1)
        return ".".join(names)
    return _join(toks[1:])


def _walk_locals(body, self_name, acc_locals, acc_imports, acc_attrs):
    for stmt in body:
        kind = stmt.kind
        toks = stmt.tokens
        if kind in ("assign", "annassign", "augassign"):
            if self_name is not None:
                attr = _attribute_assignment(stmt, self_name)
                if attr is not None:
                    acc_attrs.append(attr)
            for var in _assignment(stmt):
                acc_locals.append(LocalBinding(var.name, var.line, var.annotation, var.call))
        elif kind in ("import", "from"):
            try:
                acc_imports.extend(_parse_import(stmt))
            except ParseError:
                pass
        elif kind in ("def", "class"):
            head = 2 if toks[0].text == "async" else 1
            if head < len(toks) and toks[head].kind == IDENTIFIER:
                acc_locals.append(LocalBinding(toks[head].text, stmt.first_line))
            continue  # nested scopes are not descended into
        elif kind == "for":
            in_idx = next((i for i, t in _depth0(toks) if t.text == "in"), None)
            if in_idx is not None:
                start = 2 if toks[0].text == "async" else 1
                for name in _target_names(toks[start:in_idx]):
                    acc_locals.append(LocalBinding(name, stmt.first_line))
        _token_bindings(toks, stmt.first_line, acc_locals)
        if stmt.body:
            _walk_locals(stmt.body, self_name, acc_locals, acc_imports, acc_attrs)


def bound_names(body) -> set[str]:
    """Every name bound anywhere in *body*, nested function scopes included."""
    acc: list[LocalBinding] = []
    imps: list[ImportDecl] = []
    for stmt in body:
        for node in stmt.walk():
            _walk_locals([node], None, acc, imps, [])
            toks = node.tokens
            if toks and (toks[0].text == "def" or (toks[0].text == "async" and len(toks) > 1
                                                   and toks[1].text == "def")):
                head = 2 if toks[0].text == "async" else 1
                if head + 1 < len(toks) and toks[head + 1].text == "(":
                    depth = 0
                    expect = True
                    for t in toks[head + 1:]:
                        if t.text in _OPENERS:
                            depth += 1
                            if depth == 1:
                                continue
                        elif t.text in _CLOSERS:
                            depth -= 1
                            if depth == 0:
                                break
                        if depth != 1:
                            continue
                        if t.text == ",":
                            expect = True
                        elif t.kind == IDENTIFIER and expect:
                            acc.append(LocalBinding(t.text, node.first_line))
                            expect = False
                        elif t.text not in ("*", "**", "/"):
                            expect = False
    names = {b.name for b in acc}
    for decl in imps:
        names.update(bound for bound, _, _ in decl.bindings())
    return names


def _token_bindings(toks, line, acc) -> None:
    """Names bound inside expressions: ``as`` targets, comprehension targets, walrus, lambda."""
    n = len(toks)
    for i, tok in enumerate(toks):
        if tok.kind == KEYWORD:
            if tok.text == "as" and i + 1 < n and toks[i + 1].kind == IDENTIFIER:
                if toks[0].text != "import" and toks[0].text != "from":
                    acc.append(LocalBinding(toks[i + 1].text, line))
            elif tok.text == "for" and i > 0:
                j = i + 1
                while j < n and toks[j].text != "in":
                    if toks[j].kind == IDENTIFIER:
                        acc.append(LocalBinding(toks[j].text, line))
                    j += 1
            elif tok.text == "lambda":
                j = i + 1
                depth = 0
                expect_name = True
                while j < n and not (depth == 0 and toks[j].text == ":"):
                    t = toks[j]
                    if t.text in _OPENERS:
                        depth += 1
                    elif t.text in _CLOSERS:
                        depth -= 1
                    if depth == 0:
                        if t.kind == IDENTIFIER and expect_name:
                            acc.append(LocalBinding(t.text, line))
                            expect_name = False
                        elif t.text == ",":
                            expect_name = True
                    j += 1
        elif tok.kind == OPERATOR and tok.text == ":=" and i > 0 and toks[i - 1].kind == IDENTIFIER:
            acc.append(LocalBinding(toks[i - 1].text, line))


class _DeclBuilder:
    def __init__(self, path: str):
        self.path = path
        self.skip: set[int] = set()

    def function(self, stmt: Stmt, decorators, prefix: str, is_method: bool,
                 start_line: int) -> tuple[FunctionDecl, list[VariableDecl]]:
        toks = stmt.tokens
        i = 1
        if toks[0].text == "async":
            i = 2
        if i >= len(toks) or toks[i].kind != IDENTIFIER:
            raise ParseError(toks[min(i, len(toks) - 1)].pos, "function name")
        name_tok = toks[i]
        self.skip.add(id(name_tok))
        if i + 1 >= len(toks) or toks[i + 1].text != "(":
            raise ParseError(toks[min(i + 1, len(toks) - 1)].pos, "'('")
        depth = 0
        close = None
        for k in range(i + 1, len(toks)):
            if toks[k].text in _OPENERS:
                depth += 1
            elif toks[k].text in _CLOSERS:
                depth -= 1
                if depth == 0:
                    close = k
                    break
        if close is None:
            raise ParseError(toks[-1].pos, "')'")
        param_toks = toks[i + 2:close]
        params = _parse_params(param_toks, toks[i + 1].pos)
        for part in _split_commas(param_toks):
            for t in part:
                if t.kind == IDENTIFIER:
                    self.skip.add(id(t))
                    break
        tail = toks[close + 1:-1]
        ret = None
        if tail:
            if tail[0].text != "->" or len(tail) == 1:
                raise ParseError(tail[0].pos, "'->' or ':'")
            ret = _join(tail[1:])
        body = stmt.body
        colon = toks[-1]
        self_name = None
        if is_method and "staticmethod" not in decorators:
            first = next((p for p in params if not p.is_marker and not p.star), None)
            self_name = first.name if first else None
        loc: list[LocalBinding] = []
        imps: list[ImportDecl] = []
        attrs: list[VariableDecl] = []
        _walk_locals(body, self_name if "classmethod" not in decorators else None,
                     loc, imps, attrs)
        first_body = body[0]
        indent = None
        if first_body.first_line > colon.line:
            indent = first_body.tokens[0].col
        qualname = f"{prefix}{name_tok.text}"
        fn = FunctionDecl(
            name=name_tok.text,
            qualname=qualname,
            params=params,
            return_annotation=ret,
            docstring=_docstring(body),
            body_span=(first_body.first_line, body[-1].last_line),
            decorators=tuple(decorators),
            is_method=is_method,
            span=(start_line, stmt.last_line),
            def_line=toks[0].line,
            header_end=(colon.line, colon.col + 1),
            body_indent=indent,
            locals=tuple(loc),
            imports=tuple(imps),
        )
        return fn, attrs

    def klass(self, stmt: Stmt, decorators, prefix: str, start_line: int,
              opaque: list[tuple[int, int]]) -> ClassDecl:
        toks = stmt.tokens
        if len(toks) < 2 or toks[1].kind != IDENTIFIER:
            raise ParseError(toks[min(1, len(toks) - 1)].pos, "class name")
        name_tok = toks[1]
        self.skip.add(id(name_tok))
        bases: list[str] = []
        unparsed = False
        if len(toks) > 3 and toks[2].text == "(":
            inner = toks[3:-2]
            if toks[-2].text != ")":
                raise ParseError(toks[-2].pos, "')'")
            for part in _split_commas(inner):
                if not part:
                    continue
                if len(part) > 1 and part[1].text == "=":
                    continue  # keyword argument such as metaclass=
                if part[0].kind == IDENTIFIER:
                    names, _ = _chain_at(part, 0)
                    bases.append(".".join(names))
                else:
                    unparsed = True
        elif len(toks) != 3:
            raise ParseError(toks[2].pos, "'(' or ':'")
        qualname = f"{prefix}{name_tok.text}"
        methods: dict[str, FunctionDecl] = {}
        attributes: dict[str, VariableDecl] = {}
        classes: list[ClassDecl] = []
        pending: list[str] = []
        pending_line = None
        self_attrs: list[VariableDecl] = []
        for child in stmt.body:
            if child.kind == "decorator":
                pending.append(_decorator_name(child))
                pending_line = pending_line or child.first_line
                continue
            begin = pending_line or child.first_line
            if child.kind == "def":
                fn, attrs = self.function(child, pending, qualname + ".", True, begin)
                methods.pop(fn.name, None)
                methods[fn.name] = fn
                self_attrs.extend(attrs)
            elif child.kind == "class":
                classes.append(self.klass(child, pending, qualname + ".", begin, opaque))
            elif child.kind in ("assign", "annassign", "augassign"):
                for var in _assignment(child):
                    if var.name in attributes and var.annotation is None:
                        var = VariableDecl(var.name, var.line,
                                           attributes[var.name].annotation, var.call)
                    attributes[var.name] = var
            elif child is stmt.body[0] and _docstring(stmt.body) is not None or child.kind in ("pass",) or (child.kind == "expr" and child.tokens[0].text == "..."):
                pass
            else:
                _add_opaque(opaque, child)
            pending = []
            pending_line = None
        for var in self_attrs:
            prev = attributes.get(var.name)
            if prev is None:
                attributes[var.name] = var
            elif prev.annotation is None and var.annotation is not None:
                attributes[var.name] = VariableDecl(var.name, prev.line, var.annotation, prev.call)
        return ClassDecl(
            name=name_tok.text,
            qualname=qualname,
            bases=tuple(bases),
            docstring=_docstring(stmt.body),
            methods=tuple(methods.values()),
            attributes=tuple(attributes.values()),
            span=(start_line, stmt.last_line),
            body_span=(stmt.body[0].first_line, stmt.body[-1].last_line),
            decorators=tuple(decorators),
            classes=tuple(classes),
            has_unparsed_bases=unparsed,
        )


def _add_opaque(opaque: list[tuple[int, int]], stmt: Stmt) -> None:
    if stmt.kind in CLAUSE_KINDS and opaque and opaque[-1][1] < stmt.first_line:
        opaque[-1] = (opaque[-1][0], stmt.last_line)
    else:
        opaque.append((stmt.first_line, stmt.last_line))


def identifier_chains(tokens, skip: set[int] | frozenset = frozenset()) -> list[IdentifierOccurrence]:
    """Token-wise ``NAME (. NAME)*`` chains.

    Chains that continue an attribute access on a non-name expression
    (``f().x``), keyword-argument names and names listed in *skip* (by token
    identity) are left out.
    """
    toks = [t for t in tokens if t.kind not in LAYOUT_KINDS]
    out: list[IdentifierOccurrence] = []
    n = len(toks)
    i = 0
    depth_stack: list[str] = []
    while i < n:
        tok = toks[i]
        if tok.kind == PUNCT:
            if tok.text in _OPENERS:
                depth_stack.append(tok.text)
            elif tok.text in _CLOSERS and depth_stack:
                depth_stack.pop()
        if tok.kind != IDENTIFIER or id(tok) in skip:
            i += 1
            continue
        prev = toks[i - 1] if i else None
        if prev is not None and prev.kind == PUNCT and prev.text == ".":
            i += 1
            continue
        if prev is not None and prev.kind == KEYWORD and prev.text in ("def", "class"):
            i += 1
            continue
        names, j = _chain_at(toks, i)
        if (
            len(names) == 1
            and j < n
            and toks[j].kind == OPERATOR
            and toks[j].text == "="
            and depth_stack
            and depth_stack[-1] == "("
            and prev is not None
            and prev.text in ("(", ",")
        ):
            i = j
            continue  # keyword argument
        out.append(IdentifierOccurrence(tuple(names), tok.pos))
        i = j
    return out


def parse_module(source: str, path: str = "<string>") -> ModuleAst:
    """Parse one source file into its declarations.

    Raises LexError when the file does not tokenize and ParseError for a
    malformed declaration in the supported subset.
    """
    src = normalize_newlines(source)
    tokens = tokenize(src)
    stmts = parse_block(tokens)
    builder = _DeclBuilder(path)
    imports: list[ImportDecl] = []
    classes: list[ClassDecl] = []
    functions: list[FunctionDecl] = []
    variables: list[VariableDecl] = []
    opaque: list[tuple[int, int]] = []
    import_token_ids: set[int] = set()
    pending: list[str] = []
    pending_line = None
    doc = _docstring(tuple(stmts))

    for idx, stmt in enumerate(stmts):
        if stmt.kind == "decorator":
            pending.append(_decorator_name(stmt))
            pending_line = pending_line or stmt.first_line
            continue
        begin = pending_line or stmt.first_line
        if stmt.kind in ("import", "from"):
            imports.extend(_parse_import(stmt))
            import_token_ids.update(id(t) for t in stmt.tokens)
        elif stmt.kind == "def":
            fn, _ = builder.function(stmt, pending, "", False, begin)
            functions.append(fn)
        elif stmt.kind == "class":
            classes.append(builder.klass(stmt, pending, "", begin, opaque))
        elif stmt.kind in ("assign", "annassign", "augassign"):
            variables.extend(_assignment(stmt))
        elif idx == 0 and doc is not None:
            pass
        else:
            _add_opaque(opaque, stmt)
        pending = []
        pending_line = None

    skip = builder.skip | import_token_ids
    # imports nested in function bodies are declarations too
    for stmt in stmts:
        for node in stmt.walk():
            if node.kind in ("import", "from"):
                skip.update(id(t) for t in node.tokens)
    occurrences = identifier_chains(tokens, skip)
    return ModuleAst(
        path=path,
        module_docstring=doc,
        imports=tuple(imports),
        classes=tuple(classes),
        functions=tuple(functions),
        opaque_statements=tuple(opaque),
        occurrences=tuple(occurrences),
        variables=tuple(variables),
        line_count=src.count("\n") + (0 if src.endswith("\n") or not src else 1),
    )


def function_line_count(decl: FunctionDecl) -> int:
    """Number of body lines, signature excluded (trailing blanks never count)."""
    first, last = decl.body_span
    return last - first + 1


def signature_text(decl: FunctionDecl) -> str:
    params = ", ".join(p.render() for p in decl.params)
    text = f"def {decl.name}({params})"
    if decl.return_annotation is not None:
        text += f" -> {decl.return_annotation}"
    return text


def class_signature_text(decl: ClassDecl) -> str:
    if decl.bases:
        return f"class {decl.name}({', '.join(decl.bases)})"
    return f"class {decl.name}"
