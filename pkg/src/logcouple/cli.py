"""Command-line front end.

Subcommands: evaluate a term or formula, run a checking suite, compute
subspace images and growth reports, emit a discrete witness set below a
given epsilon, and reformat an expression canonically.

Output is deterministic: identical command lines (seeds included)
produce byte-identical stdout.  Exit codes: 0 = success / all checks
passed; 1 = a suite or growth bound failed, or a formula evaluated to
false under --fail-on-false; 2 = usage, parse, or input errors, which
are reported on stderr as one-line diagnostics.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence, Union

from . import gamma, harness, lang
from .gamma import ExtendedElement, GammaElement, Infinity
from .harness import SamplerConfig
from .subspace import GrowthReport, ImageReport, Subspace, echelonize, growth_check

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

_FORMULA_NODES = (lang.Eq, lang.Lt, lang.Not, lang.And, lang.Or)


class CliError(Exception):
    """Input problem reported as a one-line diagnostic with exit code 2."""


def load_generators(path: str) -> List[GammaElement]:
    """Read subspace generators: one element per line, in element text.

    Blank lines and lines starting with ``#`` are skipped.  Errors carry
    the offending line number.  ``inf`` is rejected: subspaces contain
    group elements only.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from None
    generators: List[GammaElement] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            element = gamma.parse_element(line)
        except gamma.ElementError as exc:
            raise CliError(f"{path}:{lineno}: {exc}") from None
        if isinstance(element, Infinity):
            raise CliError(f"{path}:{lineno}: inf is not a group element") from None
        generators.append(element)
    return generators


def _emit_json(payload: object) -> None:
    print(json.dumps(payload, indent=2))


def _result_text(value: Union[ExtendedElement, bool]) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return gamma.format_element(value)


# --- subcommands ------------------------------------------------------------------


def _cmd_eval(args: argparse.Namespace) -> int:
    env: Dict[str, ExtendedElement] = {}
    for binding in args.let:
        name, sep, text = binding.partition("=")
        name = name.strip()
        if not sep:
            raise CliError(f"malformed --let {binding!r}; expected NAME=ELEMENT")
        try:
            parsed_name = lang.parse_term(name)
        except lang.ParseError:
            parsed_name = None
        if not isinstance(parsed_name, lang.Var):
            raise CliError(f"--let name {name!r} is not a variable")
        env[name] = gamma.parse_element(text.strip())
    node = lang.parse_any(args.text, strict_llog=args.strict_llog)
    if isinstance(node, _FORMULA_NODES):
        kind, value = "formula", lang.eval_formula(node, env)
    else:
        kind, value = "term", lang.eval_term(node, env)
    if args.json:
        result = value if isinstance(value, bool) else gamma.format_element(value)
        _emit_json({"kind": kind, "input": lang.format_any(node), "result": result})
    else:
        print(_result_text(value))
    if args.fail_on_false and value is False:
        return EXIT_FAIL
    return EXIT_PASS


def _cmd_check(args: argparse.Namespace) -> int:
    if args.trials < 0:
        raise CliError("--trials must be nonnegative")
    cfg = SamplerConfig(seed=args.seed, trials=args.trials)
    report = harness.run_suite(args.suite, cfg)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        print(report.to_text())
    return EXIT_PASS if report.passed else EXIT_FAIL


def _image_text(space: Subspace, report: ImageReport) -> str:
    lines = [
        f"function: {report.function}",
        f"dim: {space.dim}",
        "levels: " + (", ".join(str(k) for k in report.levels) or "(none)"),
    ]
    for level in report.levels:
        lines.append(f"witness {level}: {gamma.format_element(report.witnesses[level])}")
    return "\n".join(lines)


def _growth_text(report: GrowthReport) -> str:
    lines = [
        f"function: {report.function}",
        "old levels: " + (", ".join(str(k) for k in report.old_levels) or "(none)"),
        "new levels: " + (", ".join(str(k) for k in report.new_levels) or "(none)"),
        "added levels: " + (", ".join(str(k) for k in report.added_levels) or "(none)"),
        f"new generators outside the base: {report.new_generator_count}",
        f"bound: {report.bound}",
        f"passed: {'yes' if report.passed else 'NO'}",
    ]
    if report.counterexample is not None:
        lines.append("counterexample:")
        for key, value in report.counterexample.items():
            lines.append(f"  {key}: {value}")
    return "\n".join(lines)


def _cmd_subspace(args: argparse.Namespace) -> int:
    generators = load_generators(args.gens)
    space = echelonize(generators)
    if args.op == "growth":
        if args.extend is None:
            raise CliError("--op growth requires --extend FILE")
        extra = load_generators(args.extend)
        if not extra:
            raise CliError(f"{args.extend}: growth needs at least one new generator")
        reports = [growth_check(space, extra, function) for function in ("psi", "s", "p")]
        ok = all(r.passed for r in reports)
        if args.json:
            _emit_json({"passed": ok, "growth": [r.to_json_dict() for r in reports]})
        else:
            print("\n\n".join(_growth_text(r) for r in reports))
        return EXIT_PASS if ok else EXIT_FAIL
    if args.extend is not None:
        space = echelonize(generators + load_generators(args.extend))
    report = space.image(args.op)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        print(_image_text(space, report))
    return EXIT_PASS


def _cmd_witness(args: argparse.Namespace) -> int:
    epsilon = gamma.parse_element(args.epsilon)
    if isinstance(epsilon, Infinity):
        raise CliError("epsilon must be a group element, not inf")
    report = harness.make_witness(epsilon, args.count)
    if args.json:
        _emit_json(report.to_json_dict())
    else:
        print(report.to_text())
    return EXIT_PASS


def _cmd_fmt(args: argparse.Namespace) -> int:
    node = lang.parse_any(args.text, strict_llog=args.strict_llog)
    kind = "formula" if isinstance(node, _FORMULA_NODES) else "term"
    formatted = lang.format_any(node)
    if args.json:
        payload = lang.formula_to_json(node) if kind == "formula" else lang.term_to_json(node)
        _emit_json({"kind": kind, "formatted": formatted, "ast": payload})
    else:
        print(formatted)
    return EXIT_PASS


# --- parser wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON instead of text")
    common.add_argument(
        "--seed", type=int, default=0, help="sampler seed (check; default 0)"
    )
    common.add_argument(
        "--trials",
        type=int,
        default=10000,
        help="trials per suite (check; default 10000, the certified configuration)",
    )
    common.add_argument(
        "--strict-llog",
        action="store_true",
        help="restrict eval/fmt to the base language (no int applications)",
    )

    parser = argparse.ArgumentParser(
        prog="logcouple",
        description="Exact workbench for the logarithmic asymptotic couple.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p_eval = sub.add_parser(
        "eval", parents=[common], help="evaluate a term or quantifier-free formula"
    )
    p_eval.add_argument("text", help="term or formula, e.g. 'psi(e1) = e0 + e1'")
    p_eval.add_argument(
        "--let",
        action="append",
        default=[],
        metavar="NAME=ELEMENT",
        help="bind a variable (repeatable)",
    )
    p_eval.add_argument(
        "--fail-on-false",
        action="store_true",
        help="exit 1 when a formula evaluates to false",
    )
    p_eval.set_defaults(func=_cmd_eval)

    p_check = sub.add_parser("check", parents=[common], help="run a verification suite")
    p_check.add_argument("suite", choices=harness.suite_names(), help="suite name")
    p_check.set_defaults(func=_cmd_check)

    p_sub = sub.add_parser(
        "subspace", parents=[common], help="subspace images and growth reports"
    )
    p_sub.add_argument("--op", required=True, choices=("psi", "s", "p", "growth"))
    p_sub.add_argument("--gens", required=True, metavar="FILE", help="generator file")
    p_sub.add_argument(
        "--extend",
        metavar="FILE",
        help="extra generators (required for --op growth; merged for the image ops)",
    )
    p_sub.set_defaults(func=_cmd_subspace)

    p_wit = sub.add_parser(
        "witness", parents=[common], help="discrete increasing set inside (0, epsilon)"
    )
    p_wit.add_argument("--epsilon", required=True, metavar="ELT", help="upper bound element")
    p_wit.add_argument("--count", required=True, type=int, metavar="N", help="elements to emit")
    p_wit.set_defaults(func=_cmd_witness)

    p_fmt = sub.add_parser("fmt", parents=[common], help="reformat a term or formula")
    p_fmt.add_argument("text", help="term or formula text")
    p_fmt.set_defaults(func=_cmd_fmt)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (
        CliError,
        gamma.ElementError,
        gamma.DomainError,
        lang.ParseError,
        lang.EvalError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
