import random
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from cpo.engine import prepare  # noqa: E402
from cpo.ordering import Context, Variant  # noqa: E402
from cpo.syntax import parse_problem  # noqa: E402

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).parent / "golden"

settings.register_profile("default", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("default")


EXTRA = CORPUS / "extra"


def load(name: str):
    path = CORPUS / f"{name}.cpo"
    if not path.exists():
        path = EXTRA / f"{name}.cpo"
    return parse_problem(path.read_text(), str(path))


def context(system, definition=2, variant=Variant.SOUND, max_depth=512):
    ing = prepare(system, definition)
    return Context(system.signature, ing.type_order, ing.precedence, system.status,
                   ing.definition, variant, max_depth, avoid=system.names())


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.cpo"))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(k for k in results if isinstance(k, int)):
        terminalreporter.write_line(results[key])
    for line in results.get("sweeps", []):
        terminalreporter.write_line(f"  sweep {line}")
