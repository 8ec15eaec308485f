"""Repository-aware completion of Python function bodies."""
from .context import (
    CompletionPoint,
    ContextItem,
    CrossFileContext,
    PointError,
    RelevanceWeights,
    identify_context,
    infer_local_types,
    prepare_point,
    rank_relevance,
    summarize_file_role,
)
from .estimator import RepoCompleter
from .index import (
    RepoIndex,
    RepoIOError,
    Scope,
    Symbol,
    build_repo_index,
    lookup_member,
    resolve_name,
)
from .llm import BackendConfig, MockScript, complete
from .pipeline import complete_function
from .prompt import Budget, BudgetError, PromptPlan, Strategy, build_prompt
from .refine import Diagnostic, RefineTrace, auto_import, lint_completion, refine_loop
from .syntax import parse_module, tokenize

__version__ = "0.1.0"

__all__ = [
    "BackendConfig",
    "Budget",
    "BudgetError",
    "CompletionPoint",
    "ContextItem",
    "CrossFileContext",
    "Diagnostic",
    "MockScript",
    "PointError",
    "PromptPlan",
    "RefineTrace",
    "RelevanceWeights",
    "RepoCompleter",
    "RepoIOError",
    "RepoIndex",
    "Scope",
    "Strategy",
    "Symbol",
    "auto_import",
    "build_prompt",
    "build_repo_index",
    "complete",
    "complete_function",
    "identify_context",
    "infer_local_types",
    "lint_completion",
    "lookup_member",
    "parse_module",
    "prepare_point",
    "rank_relevance",
    "refine_loop",
    "resolve_name",
    "summarize_file_role",
    "tokenize",
]
