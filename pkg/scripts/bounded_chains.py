"""Random rewrite walks (rules plus beta) from small start terms.

For every corpus system oriented under the sound settings, draws start terms
of size at most ``--max-size`` and reduces at random redexes until a normal
form or ``--max-steps``.

    python3 scripts/bounded_chains.py --walks 1000 --seed 0
"""

import argparse
import random
from dataclasses import dataclass, field
from pathlib import Path

from cpo.engine import check_system
from cpo.generate import start_terms
from cpo.rewriting import random_walk
from cpo.syntax import parse_problem, print_term

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class ChainConfig:
    walks: int = 1000
    max_size: int = 12
    max_steps: int = 10_000
    seed: int = 0


@dataclass
class ChainResult:
    name: str
    walks: int = 0
    longest: int = 0
    total_steps: int = 0
    stuck: list = field(default_factory=list)


def run_system(system, cfg: ChainConfig) -> ChainResult:
    rng = random.Random(f"{cfg.seed}:{system.name}")
    res = ChainResult(system.name)
    for _ in range(cfg.walks):
        t = start_terms(system, rng, cfg.max_size)
        walk = random_walk(t, system.rules, rng, cfg.max_steps)
        res.walks += 1
        res.longest = max(res.longest, walk.steps)
        res.total_steps += walk.steps
        if not walk.terminated:
            res.stuck.append(print_term(t))
    return res


def oriented_systems(corpus: Path):
    for path in sorted(corpus.glob("*.cpo")):
        system = parse_problem(path.read_text(), path.stem)
        if check_system(system, 2, explain=False).all_oriented:
            yield system


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--corpus", default=str(ROOT / "corpus"))
    p.add_argument("--walks", type=int, default=ChainConfig.walks)
    p.add_argument("--max-size", type=int, default=ChainConfig.max_size)
    p.add_argument("--max-steps", type=int, default=ChainConfig.max_steps)
    p.add_argument("--seed", type=int, default=ChainConfig.seed)
    args = p.parse_args(argv)
    cfg = ChainConfig(args.walks, args.max_size, args.max_steps, args.seed)
    failed = 0
    for system in oriented_systems(Path(args.corpus)):
        r = run_system(system, cfg)
        failed += len(r.stuck)
        print(f"{r.name}: {r.walks} walks, longest {r.longest} steps, "
              f"mean {r.total_steps / max(r.walks, 1):.1f}, {len(r.stuck)} non-terminating")
        for t in r.stuck[:3]:
            print(f"  from {t}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
