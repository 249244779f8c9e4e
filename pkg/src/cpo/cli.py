"""Command-line entry point.

Exit status: 0 every rule oriented, 1 some rule not oriented, 2 parse or
validation error, 3 comparison depth budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from .engine import SearchSpace, ValidationError, check_system, prepare, search_parameters
from .ordering import Variant, failure_reason
from .precedence import PrecedenceError
from .syntax import ProblemError, parse_problem, print_term
from .terms import CPOError
from .trace import format_goal, print_derivation
from .typeorder import AxiomViolation, UniverseOverflow

EXIT_OK, EXIT_NOT_ORIENTED, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cpo", description="Orient higher-order rewrite rules "
                                "with the computability path ordering.")
    p.add_argument("file", help="problem file")
    p.add_argument("--definition", type=int, choices=(1, 2), default=2,
                   help="1: plain ordering, 2: with accessibility (default)")
    p.add_argument("--variant", choices=[v.value for v in Variant], default="sound",
                   help="unsound variants exist only to reproduce counterexamples")
    p.add_argument("--trace", choices=("off", "compact", "paper"), default="off")
    p.add_argument("--search", action="store_true",
                   help="search precedences and statuses extending the declared ones")
    p.add_argument("--max-pairs", type=int, default=3,
                   help="strict precedence pairs added during search")
    p.add_argument("--max-depth", type=int, default=512)
    p.add_argument("--universe-depth", type=int, default=2)
    p.add_argument("--validate-only", action="store_true")
    return p


def _location(system, exc: Exception) -> tuple:
    if isinstance(exc, ValidationError) and exc.line:
        return exc.line, 1
    if isinstance(exc, (AxiomViolation, UniverseOverflow)):
        return system.locations.get("typeorder", (1, 1))
    if isinstance(exc, PrecedenceError):
        return system.locations.get("prec") or system.locations.get("status") or (1, 1)
    return 1, 1


def _diag(path: str, line: int, col: int, message: str) -> None:
    print(f"{path}:{line}:{col}: error: {message}", file=sys.stderr)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    variant = Variant(args.variant)
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        _diag(args.file, 1, 1, str(exc))
        return EXIT_INVALID
    try:
        system = parse_problem(text, args.file)
    except ProblemError as exc:
        _diag(args.file, exc.line, exc.col, exc.message)
        return EXIT_INVALID
    try:
        ing = prepare(system, args.definition, args.universe_depth)
    except CPOError as exc:
        line, col = _location(system, exc)
        _diag(args.file, line, col, str(exc))
        return EXIT_INVALID
    for note in ing.reports:
        print(f"note: {note}")
    if args.validate_only:
        print(f"{args.file}: valid, {len(system.rules)} rules")
        return EXIT_OK

    if args.search:
        space = SearchSpace(max_pairs=args.max_pairs)
        res = search_parameters(system, space, args.definition, variant, args.max_depth,
                                args.universe_depth)
        if not res.found:
            print(f"search exhausted after {res.candidates_tried} candidate(s) "
                  f"(up to {space.max_pairs} added precedence pairs)")
            return EXIT_NOT_ORIENTED
        added = [p for p in res.precedence_pairs if p not in system.precedence_pairs]
        prec = ", ".join(f"{f} {r} {g}" for f, r, g in added) or "(declared only)"
        print(f"found after {res.candidates_tried} candidates: precedence {prec}")
        lex = sorted(f for f, st in res.status.items() if st.value == "lex")
        if lex:
            print(f"lexicographic status: {', '.join(lex)}")
        verdict = res.verdict
    else:
        verdict = check_system(system, args.definition, variant, args.max_depth,
                               args.universe_depth, ingredients=ing)

    for res in verdict.results:
        rule = f"{print_term(res.rule.lhs)} -> {print_term(res.rule.rhs)}"
        loc = f"{args.file}:{res.rule.line}"
        if res.outcome == "oriented":
            print(f"{loc}: rule {res.index} oriented: {rule}")
            if args.trace != "off":
                print(print_derivation(res.derivation, args.trace), end="")
        elif res.outcome == "budget":
            print(f"{loc}: rule {res.index} budget exceeded: {res.message}")
        else:
            print(f"{loc}: rule {res.index} NOT oriented: {rule}")
            ctx = verdict.contexts[res.index - 1] if verdict.contexts else None
            for g in res.frontier:
                why = f" [{failure_reason(ctx, g)}]" if ctx else ""
                print(f"  failed: {format_goal(g)}{why}")
    if verdict.budget_exceeded:
        return EXIT_BUDGET
    return EXIT_OK if verdict.all_oriented else EXIT_NOT_ORIENTED


if __name__ == "__main__":
    raise SystemExit(main())
