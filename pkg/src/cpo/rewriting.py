"""One-step rewriting with a rule set plus beta, and random reduction walks.

Left-hand sides are matched syntactically modulo renaming of bound
variables; a pattern variable never captures a variable bound inside the
matched term.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .engine import Rule
from .terms import (Abs, App, FreshSupply, Fun, Term, Var, all_names, alpha_eq, substitute,
                    substitute_many)


def match(pattern: Term, t: Term, sub: Optional[dict] = None) -> Optional[dict]:
    """Substitution ``sub`` with ``pattern sub`` alpha-equal to ``t``, or None."""
    sub = dict(sub or {})
    return sub if _match(pattern, t, sub, {}, frozenset()) else None


def _match(p: Term, t: Term, sub: dict, bound: dict, t_bound: frozenset) -> bool:
    if isinstance(p, Var):
        if p in bound:
            return t == bound[p]
        if t.ty != p.type or t.fv & t_bound:
            return False
        if p in sub:
            return alpha_eq(sub[p], t)
        sub[p] = t
        return True
    if isinstance(p, Fun):
        return (isinstance(t, Fun) and t.symbol == p.symbol and len(t.args) == len(p.args)
                and all(_match(a, b, sub, bound, t_bound) for a, b in zip(p.args, t.args)))
    if isinstance(p, App):
        return (isinstance(t, App) and _match(p.fun, t.fun, sub, bound, t_bound)
                and _match(p.arg, t.arg, sub, bound, t_bound))
    if isinstance(t, Abs) and t.var.type == p.var.type:
        inner = dict(bound)
        inner[p.var] = t.var
        return _match(p.body, t.body, sub, inner, t_bound | {t.var})
    return False


@dataclass(frozen=True)
class Redex:
    position: tuple
    kind: str          # "rule" | "beta"
    rule: int = -1


def _children(t: Term) -> list:
    if isinstance(t, Fun):
        return list(t.args)
    if isinstance(t, App):
        return [t.fun, t.arg]
    if isinstance(t, Abs):
        return [t.body]
    return []


def _replace_child(t: Term, i: int, new: Term) -> Term:
    if isinstance(t, Fun):
        args = list(t.args)
        args[i] = new
        return Fun(t.symbol, tuple(args), t.type)
    if isinstance(t, App):
        return App(new, t.arg) if i == 0 else App(t.fun, new)
    return Abs(t.var, new)


def redexes(t: Term, rules: Sequence[Rule], beta: bool = True) -> Iterator[Redex]:
    """Every rule and beta redex in ``t``, outermost-leftmost first."""
    stack = [((), t)]
    while stack:
        pos, u = stack.pop()
        for k, r in enumerate(rules):
            if match(r.lhs, u) is not None:
                yield Redex(pos, "rule", k)
        if beta and isinstance(u, App) and isinstance(u.fun, Abs):
            yield Redex(pos, "beta")
        kids = _children(u)
        for i in reversed(range(len(kids))):
            stack.append((pos + (i,), kids[i]))


def subterm_at(t: Term, pos: tuple) -> Term:
    for i in pos:
        t = _children(t)[i]
    return t


def contract(t: Term, redex: Redex, rules: Sequence[Rule]) -> Term:
    """Rewrite ``t`` at the redex position."""
    def go(u: Term, pos: tuple) -> Term:
        if pos:
            return _replace_child(u, pos[0], go(_children(u)[pos[0]], pos[1:]))
        if redex.kind == "beta":
            return substitute(u.fun.body, u.fun.var, u.arg)
        r = rules[redex.rule]
        sub = match(r.lhs, u)
        supply = FreshSupply(all_names(u) | all_names(r.rhs))
        return substitute_many(r.rhs, sub, supply)
    return go(t, redex.position)


@dataclass
class Walk:
    start: Term
    steps: int
    terminated: bool
    final: Term


def random_walk(t: Term, rules: Sequence[Rule], rng: random.Random,
                max_steps: int = 10_000, beta: bool = True) -> Walk:
    """Reduce at a uniformly chosen redex until a normal form or the budget."""
    start = t
    for step in range(max_steps + 1):
        found = list(redexes(t, rules, beta))
        if not found:
            return Walk(start, step, True, t)
        if step == max_steps:
            break
        t = contract(t, rng.choice(found), rules)
    return Walk(start, max_steps, False, t)
