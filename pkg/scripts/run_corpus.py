"""Check every corpus problem under both definitions and all variants.

Prints verdicts followed by compact and numbered traces (or failure frontiers),
so two runs can be compared byte for byte.

    python3 scripts/run_corpus.py [corpus_dir]
"""

import argparse
import sys
from pathlib import Path

from cpo.engine import check_system
from cpo.ordering import Variant, failure_reason
from cpo.syntax import parse_problem, print_term
from cpo.trace import format_goal, print_derivation

ROOT = Path(__file__).resolve().parent.parent


def report(path: Path, out) -> None:
    system = parse_problem(path.read_text(), path.name)
    for definition in (1, 2):
        for variant in Variant:
            verdict = check_system(system, definition, variant)
            out.write(f"== {path.name} definition {definition} variant {variant.value}\n")
            for note in verdict.reports:
                out.write(f"note: {note}\n")
            for res, ctx in zip(verdict.results, verdict.contexts):
                rule = f"{print_term(res.rule.lhs)} -> {print_term(res.rule.rhs)}"
                out.write(f"rule {res.index} {res.outcome}: {rule}\n")
                if res.derivation is not None:
                    out.write(print_derivation(res.derivation, "compact"))
                    out.write(print_derivation(res.derivation, "paper"))
                for g in res.frontier:
                    out.write(f"  failed: {format_goal(g)} [{failure_reason(ctx, g)}]\n")


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("corpus", nargs="?", default=str(ROOT / "corpus"))
    args = p.parse_args(argv)
    for path in sorted(Path(args.corpus).glob("*.cpo")):
        report(path, sys.stdout)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
