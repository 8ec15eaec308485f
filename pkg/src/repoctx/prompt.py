"""Prompt realization under a character budget."""
from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .context import (
    FILE_ROLE,
    LOCAL_TYPE,
    MODULE_DEPENDENCY,
    THIRD_PARTY,
    USER_SYMBOL,
    CrossFileContext,
)
from .index import RepoIndex, UserDefined, import_modules, resolve_import
from .retrieval import retrieve_chunks


class Strategy(str, enum.Enum):
    IN_FILE = "in_file"
    ALL_IMPORT = "all_import"
    RAG = "rag"
    IDE_CONTEXT = "ide_context"


class BudgetError(ValueError):
    """The budget cannot hold the instruction plus the reserved prefix."""


HEADERS = {
    FILE_ROLE: "## Role of current file",
    MODULE_DEPENDENCY: "## Project dependencies",
    THIRD_PARTY: "## Project dependencies",
    USER_SYMBOL: "## Available APIs",
    LOCAL_TYPE: "## Local variable types",
}
IMPORTED_FILES_HEADER = "## Imported project files"
RETRIEVED_HEADER = "## Retrieved code snippets"
INSTRUCTION_HEADER = "## Complete the function body:"
CONTEXT_ORDER = (FILE_ROLE, MODULE_DEPENDENCY, THIRD_PARTY, USER_SYMBOL, LOCAL_TYPE)


@dataclass(frozen=True)
class Budget:
    max_chars: int
    reserved_for_prefix: int = 0

    def __post_init__(self):
        if self.max_chars <= 0:
            raise ValueError("max_chars must be positive")
        if self.reserved_for_prefix < 0 or self.reserved_for_prefix > self.max_chars:
            raise ValueError("reserved_for_prefix must lie in [0, max_chars]")


@dataclass(frozen=True)
class Section:
    label: str
    text: str
    droppable: bool = True
    relevance: float = 0.0
    header: str | None = None


@dataclass(frozen=True)
class PromptPlan:
    strategy: Strategy
    sections: tuple[Section, ...]
    realized: str
    dropped: tuple[str, ...] = ()


def realize(sections) -> str:
    """Join sections; consecutive sections sharing a header form one block."""
    blocks: list[str] = []
    current_header = object()
    lines: list[str] = []
    for sec in sections:
        if sec.header is not None and sec.header == current_header:
            lines.append(sec.text)
            continue
        if lines:
            blocks.append("\n".join(lines))
        current_header = sec.header
        lines = [sec.header, sec.text] if sec.header is not None else [sec.text]
    if lines:
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def instruction_section(ctx: CrossFileContext) -> Section:
    p = ctx.point
    text = (f"# Write the body of `{p.function}` from {p.module}. "
            "Reply with the indented body only.")
    return Section("instruction", text, droppable=False, header=INSTRUCTION_HEADER)


def _context_sections(ctx: CrossFileContext, strategy: Strategy, repo: RepoIndex,
                      rag_k: int, chunk_lines: int) -> list[Section]:
    if strategy is Strategy.IN_FILE:
        return []
    if strategy is Strategy.ALL_IMPORT:
        ast_ = repo.modules[ctx.point.module]
        seen: list[str] = []
        for decl in ast_.imports:
            if not isinstance(resolve_import(decl, ctx.point.module, repo), UserDefined):
                continue
            for dep in import_modules(decl, ctx.point.module, repo):
                if dep not in seen and dep != ctx.point.module:
                    seen.append(dep)
        return [Section(f"import:{dep}", f"# {repo.modules[dep].path}\n{repo.sources[dep].rstrip()}",
                        header=IMPORTED_FILES_HEADER) for dep in seen]
    if strategy is Strategy.RAG:
        chunks = retrieve_chunks(ctx.point.prefix, repo, exclude_module=ctx.point.module,
                                 k=rag_k, chunk_lines=chunk_lines)
        return [Section(f"rag:{c.path}:{c.start_line}", f"{c.header}\n{c.text}", relevance=c.score,
                        header=RETRIEVED_HEADER) for c in chunks]
    out = []
    for kind in CONTEXT_ORDER:
        for n, item in enumerate(ctx.of_kind(kind)):
            out.append(Section(f"{kind}:{item.source_symbol or n}", item.payload,
                               relevance=item.relevance, header=HEADERS[kind]))
    return out


def build_prompt(ctx: CrossFileContext, strategy, budget: Budget, repo: RepoIndex,
                 rag_k: int = 3, chunk_lines: int = 12) -> PromptPlan:
    """Assemble and fit the prompt for *strategy* into *budget*.

    Over budget: drop droppable sections lowest-relevance first (later first on
    ties) until one remains, truncate that one from its tail, then cut the
    prefix from the front keeping the text nearest the cursor.
    """
    strategy = Strategy(strategy)
    instruction = instruction_section(ctx)
    prefix = ctx.point.prefix
    reserved = prefix[len(prefix) - min(budget.reserved_for_prefix, len(prefix)):]
    floor = realize([instruction, Section("prefix", reserved, droppable=False)])
    if len(floor) > budget.max_chars:
        raise BudgetError(f"instruction plus reserved prefix needs {len(floor)} chars, "
                          f"budget is {budget.max_chars}")

    sections = _context_sections(ctx, strategy, repo, rag_k, chunk_lines)
    sections += [instruction, Section("prefix", prefix, droppable=False)]
    dropped: list[str] = []

    def over() -> int:
        return len(realize(sections)) - budget.max_chars

    while over() > 0:
        droppable = [i for i, s in enumerate(sections) if s.droppable]
        if len(droppable) <= 1:
            break
        victim = min(droppable, key=lambda i: (sections[i].relevance, -i))
        dropped.append(sections.pop(victim).label)

    while over() > 0:
        i = next((i for i, s in enumerate(sections) if s.droppable), None)
        if i is None:
            break
        keep = len(sections[i].text) - over()
        if keep <= 0:
            dropped.append(sections.pop(i).label)
        else:
            sections[i] = replace(sections[i], text=sections[i].text[:keep])

    excess = over()
    if excess > 0:
        cut = sections[-1].text[excess:]
        sections[-1] = replace(sections[-1], text=cut)
    realized = realize(sections)
    assert len(realized) <= budget.max_chars
    return PromptPlan(strategy, tuple(sections), realized, tuple(dropped))
