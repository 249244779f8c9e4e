"""Randomized invariant sweeps over generated signatures and terms.

Each property takes a world and a random generator and returns a
:class:`Case`.  ``exercised`` marks cases where the implication had a true
premise, so a sweep can report how often a property was actually tested.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional

from .accessibility import negative_positions, positive_positions, sort_positions
from .generate import A, B, TermGen, World, random_type, random_world
from .precedence import multiset_ext
from .terms import Abs, App, Arrow, Term, Var, subterms, substitute

TERM_SIZE = 10


@dataclass
class Case:
    ok: bool
    exercised: bool = True
    info: str = ""


@dataclass
class SweepResult:
    name: str
    cases: int = 0
    exercised: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def line(self) -> str:
        return (f"{self.name}: {self.cases} cases, {self.exercised} exercised, "
                f"{len(self.violations)} violations")


def _pair(world: World, gen: TermGen, rng: random.Random) -> tuple:
    """A left/right pair where the right side often relates to the left."""
    ty = rng.choice([A, B, A, B, Arrow(A, A)])
    s = gen.sized(ty, TERM_SIZE)
    roll = rng.random()
    subs = [u for u in subterms(s) if u is not s and not (u.fv - s.fv)]
    if roll < 0.4 and subs:
        t = rng.choice(subs)
    elif roll < 0.7 and subs:
        u = rng.choice(subs)
        t = gen.sized(u.ty, 4) if rng.random() < 0.5 else u
        if isinstance(t.ty, Arrow) and rng.random() < 0.5:
            t = App(t, gen.sized(t.ty.dom, 2))
    else:
        t = gen.sized(rng.choice([A, B, Arrow(A, A)]), 6)
    return s, t


def _some_vars(t: Term, rng: random.Random) -> frozenset:
    return frozenset(v for v in sorted(t.fv, key=lambda v: v.name) if rng.random() < 0.5)


def prop_beta(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    alpha = rng.choice([A, B, Arrow(A, A)])
    x = Var("bx", alpha)
    w = gen.term(rng.choice([A, B]), rng.randint(1, TERM_SIZE - 3), [x])
    v = gen.sized(alpha, 3)
    s = App(Abs(x, w), v)
    t = substitute(w, x, v)
    ctx = world.context(rng.choice((1, 2)))
    return Case(ctx.gt_typed(s, t) is not None)


def prop_eta(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    alpha = rng.choice([A, B])
    beta = rng.choice([A, B, Arrow(A, A)])
    v = gen.sized(Arrow(alpha, beta), TERM_SIZE - 2)
    x = Var("ex", alpha)
    s = Abs(x, App(v, x))
    ctx = world.context(rng.choice((1, 2)))
    return Case(ctx.gt_typed(s, v) is not None)


def prop_left_variable(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    ty = rng.choice([A, B, Arrow(A, A)])
    x = gen.free_var(ty)
    t = gen.sized(rng.choice([A, B, Arrow(A, A)]), TERM_SIZE)
    X = _some_vars(t, rng) | ({x} if rng.random() < 0.5 else frozenset())
    ctx = world.context(rng.choice((1, 2)))
    return Case(ctx.gt(x, t, X) is None and ctx.gt_typed(x, t, X) is None)


def prop_irreflexive(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    s = gen.sized(rng.choice([A, B, Arrow(A, A), Arrow(A, B)]), TERM_SIZE)
    ctx = world.context(rng.choice((1, 2)))
    return Case(ctx.gt_typed(s, s) is None and ctx.gt(s, s) is None)


def prop_x_monotone(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    s, t = _pair(world, gen, rng)
    X = _some_vars(t, rng)
    definition = rng.choice((1, 2))
    if world.context(definition).gt(s, t, X) is None:
        return Case(True, False)
    extra = _some_vars(t, rng) | {gen.free_var(rng.choice([A, B]))}
    return Case(world.context(definition).gt(s, t, X | extra) is not None)


def prop_extended_contains_base(world: World, rng: random.Random) -> Case:
    gen = TermGen(world.signature, rng)
    s, t = _pair(world, gen, rng)
    X = _some_vars(t, rng)
    typed = rng.random() < 0.5
    one, two = world.context(1), world.context(2)
    first = one.gt_typed(s, t, X) if typed else one.gt(s, t, X)
    if first is None:
        return Case(True, False)
    second = two.gt_typed(s, t, X) if typed else two.gt(s, t, X)
    return Case(second is not None)


def prop_pos_partition(world: World, rng: random.Random) -> Case:
    ty = random_type(rng, rng.randint(0, 5), (A, B))
    pos, neg = positive_positions(ty), negative_positions(ty)
    return Case(not (pos & neg) and (pos | neg) == sort_positions(ty))


PROPERTIES: dict = {
    "beta containment": prop_beta,
    "eta containment": prop_eta,
    "left-variable failure": prop_left_variable,
    "irreflexivity": prop_irreflexive,
    "X-monotonicity": prop_x_monotone,
    "extended ordering contains base": prop_extended_contains_base,
    "Pos+/Pos- partition": prop_pos_partition,
}


def sweep(name: str, cases: int = 10_000, seed: int = 0, worlds: int = 25,
          check: Optional[Callable] = None, keep: int = 5, min_exercised: int = 0,
          max_cases: int = 200_000) -> SweepResult:
    """Run seeded cases spread over ``worlds`` random signatures.

    Stops after ``cases`` cases once ``min_exercised`` of them had a true
    premise, or at ``max_cases``.
    """
    check = check or PROPERTIES[name]
    rng = random.Random(seed)
    pool = [random_world(random.Random(rng.getrandbits(32))) for _ in range(worlds)]
    result = SweepResult(name)
    i = 0
    while i < max_cases and (i < cases or result.exercised < min_exercised):
        case_rng = random.Random(rng.getrandbits(64))
        case = check(pool[i % worlds], case_rng)
        result.cases += 1
        result.exercised += case.exercised
        if not case.ok and len(result.violations) < keep:
            result.violations.append((i, case.info))
        elif not case.ok:
            result.violations.append((i, ""))
        i += 1
    return result


# ---------------------------------------------------------------------------
# multiset extension against a brute-force reference


def multiset_brute(rel, m, n) -> bool:
    """Enumerate every removed non-empty sub-multiset of ``m``."""
    cm, cn = Counter(m), Counter(n)
    for mask in itertools.product(*[range(c + 1) for c in cm.values()]):
        removed = Counter({k: r for k, r in zip(cm, mask) if r})
        if not removed:
            continue
        rest = cm - removed
        if any(rest[k] > cn[k] for k in rest):
            continue
        added = cn - rest
        if all(any(rel(x, y) for x in removed) for y in added.elements()):
            return True
    return False


def carrier_relations(seed: int = 0, carrier=(0, 1, 2, 3), randoms: int = 3) -> list:
    rng = random.Random(seed)
    rels = [("total", {(a, b) for a in carrier for b in carrier if a > b}),
            ("partial", {(3, 1), (3, 0), (2, 0), (1, 0)}),
            ("empty", set())]
    for k in range(randoms):
        rels.append((f"random{k}", {(a, b) for a in carrier for b in carrier
                                    if a != b and rng.random() < 0.4}))
    return rels


def multiset_sweep(max_size: int = 4, carrier=(0, 1, 2, 3), seed: int = 0) -> SweepResult:
    result = SweepResult("multiset extension vs brute force")
    multisets = [m for k in range(max_size + 1)
                 for m in itertools.combinations_with_replacement(carrier, k)]
    for label, rel in carrier_relations(seed, carrier):
        gt = lambda a, b, rel=rel: (a, b) in rel
        for m in multisets:
            for n in multisets:
                result.cases += 1
                fast, slow = multiset_ext(gt, m, n), multiset_brute(gt, m, n)
                result.exercised += slow
                if fast != slow:
                    result.violations.append((label, m, n))
    return result
