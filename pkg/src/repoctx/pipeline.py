"""End-to-end completion of one function: context, prompt, backend, refinement."""
from __future__ import annotations

from dataclasses import dataclass

from .config import Config
from .context import CompletionPoint, CrossFileContext, identify_context, prepare_point
from .index import RepoIndex
from .llm import BackendError, clean_completion, make_backend
from .prompt import PromptPlan, Strategy, build_prompt
from .refine import RefineTrace, refine_loop


@dataclass(frozen=True)
class CompletionResult:
    point: CompletionPoint
    strategy: Strategy
    plan: PromptPlan
    completion: str
    trace: RefineTrace | None = None

    @property
    def completions(self) -> list[str]:
        if self.trace is None:
            return [self.completion]
        return [it.completion for it in self.trace.iterations]


def build_context(index: RepoIndex, module: str, function: str, config: Config | None = None,
                  mask: bool = True) -> tuple[RepoIndex, CrossFileContext]:
    config = config or Config()
    masked, point = prepare_point(index, module, function, mask)
    ctx = identify_context(point, masked, config.relevance_weights, config.max_class_members)
    return masked, ctx


def complete_function(index: RepoIndex, module: str, function: str, strategy="ide_context",
                      backend=None, config: Config | None = None, refine: bool | None = None,
                      mask: bool = True) -> CompletionResult:
    """Complete *function*'s body; refinement defaults to on for the ide_context strategy only."""
    config = config or Config()
    strategy = Strategy(strategy)
    backend = backend if backend is not None else make_backend(config.backend)
    if strategy is Strategy.IDE_CONTEXT:
        masked, ctx = build_context(index, module, function, config, mask)
    else:
        masked, point = prepare_point(index, module, function, mask)
        ctx = CrossFileContext(point)
    plan = build_prompt(ctx, strategy, config.budget, masked, config.rag_k, config.rag_chunk_lines)
    if refine is None:
        refine = strategy is Strategy.IDE_CONTEXT
    if refine:
        trace = refine_loop(ctx.point, plan, backend, masked, config.max_refine_iters)
        return CompletionResult(ctx.point, strategy, plan, trace.final, trace)
    try:
        raw = backend.complete(plan.realized)
    except BackendError as exc:
        exc.iteration = 0
        raise
    return CompletionResult(ctx.point, strategy, plan, clean_completion(raw))
