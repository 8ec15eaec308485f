"""Command-line entry point: index, complete, explain-context, lint, eval."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

from .config import Config, ConfigError, load_config
from .context import PointError, prepare_point
from .evaluation.dataset import FormatError, load_dataset
from .evaluation.runner import run_eval
from .index import RepoIOError, build_repo_index
from .llm import DEFAULT_API_KEY_ENV, BackendError, make_backend
from .pipeline import build_context, complete_function
from .prompt import BudgetError, Strategy
from .refine import apply_import_edits, auto_import, lint_completion

log = logging.getLogger("repoctx")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_POINT = 2
EXIT_BACKEND = 3

EPILOG = f"""\
The http backend reads its API key from the environment variable named by
backend.api_key_env in the config file (default: {DEFAULT_API_KEY_ENV}).
"""


def _err(msg: str) -> None:
    print(f"repoctx: {msg}", file=sys.stderr)


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _index(root: str, config: Config):
    index = build_repo_index(root, config.ignore)
    for where, reason in index.errors:
        _err(f"warning: {where}: {reason}")
    return index


def cmd_index(args, config: Config) -> int:
    try:
        index = _index(args.root, config)
    except RepoIOError as exc:
        _err(f"cannot read repository {exc.path}: {exc}")
        return EXIT_ERROR
    _write(index.dumps() + "\n", args.json)
    return EXIT_OK


def cmd_complete(args, config: Config) -> int:
    try:
        index = _index(args.root, config)
        result = complete_function(index, args.module, args.function, args.strategy,
                                   make_backend(config.backend), config)
    except RepoIOError as exc:
        _err(f"cannot read repository {exc.path}: {exc}")
        return EXIT_ERROR
    except PointError as exc:
        _err(str(exc))
        return EXIT_POINT
    except BudgetError as exc:
        _err(f"budget: {exc}")
        return EXIT_ERROR
    except BackendError as exc:
        _err(f"backend failed: {type(exc).__name__}: {exc}")
        return EXIT_BACKEND
    sys.stdout.write(result.completion + "\n")
    if args.trace:
        trace = {"point": result.point.to_json(), "strategy": result.strategy.value,
                 "prompt": result.plan.realized, "dropped": list(result.plan.dropped),
                 "completion": result.completion,
                 "refine": result.trace.to_json() if result.trace is not None else None}
        Path(args.trace).write_text(json.dumps(trace, indent=2) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_explain_context(args, config: Config) -> int:
    try:
        index = _index(args.root, config)
        _, ctx = build_context(index, args.module, args.function, config)
    except RepoIOError as exc:
        _err(f"cannot read repository {exc.path}: {exc}")
        return EXIT_ERROR
    except PointError as exc:
        _err(str(exc))
        return EXIT_POINT
    _write(ctx.dumps() + "\n", args.json)
    return EXIT_OK


def cmd_lint(args, config: Config) -> int:
    try:
        index = _index(args.root, config)
        _, point = prepare_point(index, args.module, args.function, mask=False)
    except RepoIOError as exc:
        _err(f"cannot read repository {exc.path}: {exc}")
        return EXIT_ERROR
    except PointError as exc:
        _err(str(exc))
        return EXIT_POINT
    if args.completion is None or args.completion == "-":
        completion = sys.stdin.read()
    else:
        completion = Path(args.completion).read_text(encoding="utf-8")
    diagnostics = lint_completion(completion, point, index)
    if args.fix_imports:
        edits, diagnostics = auto_import(completion, diagnostics, point, index)
        if edits:
            patched = index.replace_module(point.module, apply_import_edits(index.sources[point.module], edits))
            diagnostics = lint_completion(completion, point, patched)
        for edit in edits:
            print(f"import after line {edit.after_line}: {edit.text}", file=sys.stderr)
    if args.json:
        sys.stdout.write(json.dumps([d.to_json() for d in diagnostics], indent=2) + "\n")
    else:
        for d in diagnostics:
            sys.stdout.write(d.render() + "\n")
    return EXIT_ERROR if diagnostics else EXIT_OK


def _strategies(values) -> list[Strategy]:
    if not values:
        return [Strategy.IDE_CONTEXT]
    if "all" in values:
        return list(Strategy)
    return [Strategy(v) for v in dict.fromkeys(values)]


def cmd_eval(args, config: Config) -> int:
    try:
        dataset = load_dataset(args.dataset)
    except FormatError as exc:
        _err(f"{args.dataset}: {exc}")
        return EXIT_ERROR
    except OSError as exc:
        _err(f"cannot read dataset {args.dataset}: {exc}")
        return EXIT_ERROR
    for warning in dataset.warnings:
        _err(f"warning: rejected {warning}")
    if not len(dataset):
        _err("no tasks")
        return EXIT_ERROR
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    strategies = _strategies(args.strategy)
    report_path = Path(args.report) if args.report else None
    for strategy in strategies:
        if report_path is None:
            out, trace = None, args.trace
        elif len(strategies) == 1:
            out = report_path
            trace = args.trace or report_path.with_suffix(".trace.jsonl")
        else:
            out = report_path.with_name(f"{report_path.stem}.{strategy.value}.json")
            trace = report_path.with_name(f"{report_path.stem}.{strategy.value}.trace.jsonl")
        report = run_eval(dataset, strategy, config=config, trace_path=trace)
        _err(f"{strategy.value}: n={report.task_count} EM={report.em_percent:.2f} "
             f"CB={report.codebleu_percent:.2f} SM={report.syntax_match_percent:.2f} "
             f"errors={report.errors}")
        _write(report.dumps(), str(out) if out is not None else None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, metavar="PATH",
                        help="JSON configuration file")
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS,
                        help="log progress to standard error")

    parser = argparse.ArgumentParser(prog="repoctx", parents=[common], epilog=EPILOG,
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     description="Repository-aware function body completion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("index", parents=[common], help="build and print the symbol table")
    p.add_argument("root")
    p.add_argument("--json", metavar="OUT", help="write JSON here instead of standard output")
    p.set_defaults(func=cmd_index)

    def target(p):
        p.add_argument("root")
        p.add_argument("module", help="dotted module path, e.g. app.main")
        p.add_argument("function", help="qualified function name, e.g. Service.start")

    p = sub.add_parser("complete", parents=[common], help="complete one function body",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    target(p)
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default="ide_context")
    p.add_argument("--trace", metavar="PATH", help="write the prompt and refine trace as JSON")
    p.set_defaults(func=cmd_complete)

    p = sub.add_parser("explain-context", parents=[common], help="dump the ranked cross-file context")
    target(p)
    p.add_argument("--json", metavar="OUT", help="write JSON here instead of standard output")
    p.set_defaults(func=cmd_explain_context)

    p = sub.add_parser("lint", parents=[common], help="lint a completion spliced into a function")
    target(p)
    p.add_argument("--completion", metavar="PATH", help="completion text file (default: standard input)")
    p.add_argument("--fix-imports", action="store_true", help="apply suggested imports before reporting")
    p.add_argument("--json", action="store_true", help="print diagnostics as JSON")
    p.set_defaults(func=cmd_lint)

    p = sub.add_parser("eval", parents=[common], help="run strategies over a JSONL dataset",
                       epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("dataset")
    p.add_argument("--strategy", action="append", choices=[s.value for s in Strategy] + ["all"],
                   help="repeatable; 'all' runs every strategy (default: ide_context)")
    p.add_argument("--report", metavar="OUT",
                   help="report path; with several strategies, OUT's stem gets a .<strategy> suffix")
    p.add_argument("--trace", metavar="OUT", help="per-task JSONL trace (single strategy)")
    p.add_argument("--workers", type=int, help="parallel tasks")
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        config = load_config(getattr(args, "config", None))
    except ConfigError as exc:
        _err(f"config: {exc}")
        return EXIT_ERROR
    return args.func(args, config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
