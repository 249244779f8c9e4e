"""Seeded invariant sweeps over random signatures and terms.

    python3 scripts/property_sweep.py --cases 10000 --seed 0
"""

import argparse
import time

from cpo.properties import PROPERTIES, multiset_sweep, sweep


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--cases", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--only", choices=sorted(PROPERTIES), action="append")
    args = p.parse_args(argv)
    bad = 0
    for name in args.only or PROPERTIES:
        t0 = time.perf_counter()
        r = sweep(name, args.cases, args.seed, min_exercised=args.cases)
        bad += len(r.violations)
        print(f"{r.line()} ({time.perf_counter() - t0:.1f} s)")
        for v in r.violations[:5]:
            print(f"  case {v[0]}: {v[1]}")
    if not args.only:
        r = multiset_sweep()
        bad += len(r.violations)
        print(r.line())
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
