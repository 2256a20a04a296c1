#!/usr/bin/env python3
"""
Risk Modeler CLI

Command-line front end for CI use:
- validate: consistency findings for a model document
- matrix: populated risk matrix (text, CSV, HTML)
- diagram: Graphviz DOT design diagram
- diff: baseline vs. enhanced scenario scores
- scenarios, paths, fixture: scenario table, conveying-path suggestions, case-study documents

Exit codes: 0 success, 1 Error findings (or Warnings with --strict), 2 usage or parse failure.
"""
from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import structlog
from colorama import Fore, Style, just_fix_windows_console

from services.data_processor import render_scenarios
from services.errors import AssessmentError, ModelLoadError
from services.hierarchy import candidate_paths, check_conveyance_path
from services.model_io import load_model, serialize_model
from services.render import RenderOptions, emit_dot, problem_line, render_diff, render_matrix, render_problems
from services.riskview import build_matrix, diff
from services.validation import Problem, Severity, validate
from utils.config import Settings
from utils.fixtures import build_baseline, build_enhanced
from utils.logging_setup import configure_logging

logger = structlog.get_logger(__name__)

EXIT_SUCCESS = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2

SEVERITY_COLORS = {
    Severity.ERROR: Fore.RED,
    Severity.WARNING: Fore.YELLOW,
    Severity.INFO: Fore.CYAN,
}


def _use_color(settings: Settings) -> bool:
    return not settings.no_color and sys.stdout.isatty()


def _colored_problems(problems: Sequence[Problem]) -> str:
    lines = []
    for problem in problems:
        line = problem_line(problem)
        word = problem.severity.value
        lines.append(f"{SEVERITY_COLORS[problem.severity]}{word}{Style.RESET_ALL}{line[len(word):]}\n")
    return "".join(lines)


def _exit_for(problems: Sequence[Problem], strict: bool) -> int:
    failing = {Severity.ERROR, Severity.WARNING} if strict else {Severity.ERROR}
    return EXIT_FINDINGS if any(p.severity in failing for p in problems) else EXIT_SUCCESS


def cmd_validate(args: argparse.Namespace, settings: Settings) -> int:
    model = load_model(args.model)
    problems = validate(model)
    if args.format == "text" and _use_color(settings):
        sys.stdout.write(_colored_problems(problems))
    else:
        sys.stdout.write(render_problems(problems, args.format))
    logger.info("validation.reported", model=args.model, problems=len(problems))
    return _exit_for(problems, args.strict)


def cmd_matrix(args: argparse.Namespace, settings: Settings) -> int:
    model = load_model(args.model)
    sys.stdout.write(render_matrix(build_matrix(model), args.format))
    return EXIT_SUCCESS


def cmd_diagram(args: argparse.Namespace, settings: Settings) -> int:
    model = load_model(args.model)
    options = RenderOptions(hide=tuple(args.hide), show_threats=args.threats, show_controls=args.controls)
    dot = emit_dot(model, options)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(dot)
        logger.info("diagram.written", path=args.out)
    else:
        sys.stdout.write(dot)
    return EXIT_SUCCESS


def cmd_diff(args: argparse.Namespace, settings: Settings) -> int:
    report = diff(load_model(args.baseline), load_model(args.enhanced))
    if args.format == "text" and _use_color(settings):
        sys.stdout.write(render_diff(report.model_copy(update={"findings": ()}), "text"))
        sys.stdout.write(_colored_problems(report.findings))
    else:
        sys.stdout.write(render_diff(report, args.format))
    return _exit_for(report.findings, args.strict)


def cmd_scenarios(args: argparse.Namespace, settings: Settings) -> int:
    sys.stdout.write(render_scenarios(load_model(args.model), args.format))
    return EXIT_SUCCESS


def cmd_paths(args: argparse.Namespace, settings: Settings) -> int:
    model = load_model(args.model)
    lines = []
    for flow in model.data_flows:
        verdict = check_conveyance_path(model, flow)
        status = verdict.status.value if verdict.reason is None else f"{verdict.status.value} ({verdict.reason})"
        lines.append(f"{flow.id}: {status}\n")
        for path in candidate_paths(model, flow, max_hops=args.max_hops):
            lines.append(f"  candidate: {' > '.join(path)}\n")
    sys.stdout.write("".join(lines))
    return EXIT_SUCCESS


def cmd_fixture(args: argparse.Namespace, settings: Settings) -> int:
    builders = {"baseline": build_baseline, "enhanced": build_enhanced}
    sys.stdout.write(serialize_model(builders[args.name]()))
    return EXIT_SUCCESS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cli.py",
        description="Model-based security risk assessment: validate, score, draw and compare assessment models.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    validate_cmd = commands.add_parser("validate", help="Run the consistency rules")
    validate_cmd.add_argument("model", help="Model document (JSON)")
    validate_cmd.add_argument("--format", choices=["text", "json"], default="text")
    validate_cmd.add_argument("--strict", action="store_true", help="Fail on Warning findings too")
    validate_cmd.set_defaults(handler=cmd_validate)

    matrix_cmd = commands.add_parser("matrix", help="Render the populated risk matrix")
    matrix_cmd.add_argument("model")
    matrix_cmd.add_argument("--format", choices=["text", "csv", "html"], default="text")
    matrix_cmd.set_defaults(handler=cmd_matrix)

    diagram_cmd = commands.add_parser("diagram", help="Emit the design diagram as Graphviz DOT")
    diagram_cmd.add_argument("model")
    diagram_cmd.add_argument("--out", help="Write to this file instead of stdout")
    diagram_cmd.add_argument("--hide", nargs="+", default=[], metavar="ID", help="Component ids to hide")
    diagram_cmd.add_argument("--threats", action="store_true", help="Show threats and scenario edges")
    diagram_cmd.add_argument("--controls", action="store_true", help="Show allocated controls")
    diagram_cmd.set_defaults(handler=cmd_diagram)

    diff_cmd = commands.add_parser("diff", help="Compare baseline and enhanced scenario scores")
    diff_cmd.add_argument("baseline")
    diff_cmd.add_argument("enhanced")
    diff_cmd.add_argument("--format", choices=["text", "json"], default="text")
    diff_cmd.add_argument("--strict", action="store_true", help="Fail on Warning findings")
    diff_cmd.set_defaults(handler=cmd_diff)

    scenarios_cmd = commands.add_parser("scenarios", help="Scenario ratings table")
    scenarios_cmd.add_argument("model")
    scenarios_cmd.add_argument("--format", choices=["text", "csv"], default="text")
    scenarios_cmd.set_defaults(handler=cmd_scenarios)

    paths_cmd = commands.add_parser("paths", help="Check and suggest conveying links for data flows")
    paths_cmd.add_argument("model")
    paths_cmd.add_argument("--max-hops", type=int, default=3)
    paths_cmd.set_defaults(handler=cmd_paths)

    fixture_cmd = commands.add_parser("fixture", help="Print a case-study model document")
    fixture_cmd.add_argument("name", choices=["baseline", "enhanced"])
    fixture_cmd.set_defaults(handler=cmd_fixture)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    just_fix_windows_console()
    args = build_parser().parse_args(argv)
    settings = Settings.from_env(verbose=args.verbose)
    configure_logging(settings)
    try:
        return args.handler(args, settings)
    except ModelLoadError as exc:
        for error in exc.errors:
            print(error, file=sys.stderr)
        logger.error("model.rejected", errors=len(exc.errors))
        return EXIT_USAGE
    except AssessmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot write {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
