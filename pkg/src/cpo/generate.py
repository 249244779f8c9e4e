"""Seeded random types, signatures, orderings and terms for property sweeps
and bounded reduction experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .engine import RewriteSystem, Rule
from .ordering import Context, Variant
from .precedence import Precedence, Status
from .terms import (Abs, App, Arrow, Fun, Signature, Sort, Term, Type, Var, arrow_depth, size,
                    substitute_many)
from .typeorder import TypeOrder, build_type_order

A, B = Sort("a"), Sort("b")


def random_type(rng: random.Random, depth: int = 2, sorts: Sequence[Sort] = (A, B)) -> Type:
    if depth == 0 or rng.random() < 0.45:
        return rng.choice(list(sorts))
    return Arrow(random_type(rng, depth - 1, sorts), random_type(rng, depth - 1, sorts))


@dataclass
class SignatureConfig:
    symbols: int = 4
    max_arity: int = 2
    arg_depth: int = 1
    sorts: tuple = (A, B)
    p_lex: float = 0.3
    p_prec_pair: float = 0.5
    declare_ab: float = 0.5


@dataclass
class World:
    """A random signature with validated ingredients."""

    signature: Signature
    type_order: TypeOrder
    precedence: Precedence
    status: dict
    type_pairs: list = field(default_factory=list)
    precedence_pairs: list = field(default_factory=list)

    def context(self, definition: int = 2, variant: Variant = Variant.SOUND,
                max_depth: int = 512) -> Context:
        return Context(self.signature, self.type_order, self.precedence, self.status,
                       definition, variant, max_depth)


FIXED_TYPES = (A, B, Arrow(A, A), Arrow(A, B), Arrow(B, A), Arrow(B, B),
               Arrow(Arrow(A, A), A), Arrow(A, Arrow(A, A)))


def random_world(rng: random.Random, cfg: Optional[SignatureConfig] = None) -> World:
    cfg = cfg or SignatureConfig()
    sig = Signature()
    for s in cfg.sorts:
        sig.add_sort(s.name)
    names = [f"f{i}" for i in range(cfg.symbols)]
    for name in names:
        arity = rng.randint(0, cfg.max_arity)
        args = [random_type(rng, cfg.arg_depth, cfg.sorts) for _ in range(arity)]
        sig.add_fun(name, args, rng.choice(list(cfg.sorts)))
    order = list(names)
    rng.shuffle(order)
    pairs = [(f, ">", g) for f, g in zip(order, order[1:]) if rng.random() < cfg.p_prec_pair]
    prec = Precedence(names, pairs)
    status = {f: Status.LEX if rng.random() < cfg.p_lex else Status.MUL
              for f in names if sig.funs[f].arity >= 2}
    type_pairs = [(A, B)] if rng.random() < cfg.declare_ab else []
    problem_types = set(FIXED_TYPES) | sig.types()
    torder = build_type_order(type_pairs, problem_types)
    return World(sig, torder, prec, status, type_pairs, pairs)


class TermGen:
    """Random well-typed terms over a signature.

    Free variables come from per-type pools of at most two names, so every
    type is inhabited.  Applications never introduce a function type deeper
    than ``max_depth``, which keeps every subterm type inside the default
    type universe.
    """

    def __init__(self, sig: Signature, rng: random.Random, arrow_types: Sequence[Type] = FIXED_TYPES,
                 prefix: str = "v", max_depth: int = 2):
        self.sig = sig
        self.max_depth = max_depth
        self.rng = rng
        self.arrow_types = [t for t in arrow_types]
        self.prefix = prefix
        self._pool: dict = {}
        self._names = 0
        self._bound = 0

    def free_var(self, ty: Type) -> Var:
        pool = self._pool.setdefault(ty, [])
        if len(pool) < 2 and (not pool or self.rng.random() < 0.3):
            self._names += 1
            pool.append(Var(f"{self.prefix}{self._names}", ty))
        return self.rng.choice(pool)

    def term(self, ty: Type, budget: int, env: Sequence[Var] = ()) -> Term:
        rng = self.rng
        local = [v for v in env if v.type == ty]
        if budget <= 1:
            return self._leaf(ty, local)
        choices = ["leaf", "app"]
        if isinstance(ty, Arrow):
            choices += ["abs", "abs"]
        elif isinstance(ty, Sort):
            if any(d.out_type == ty for d in self.sig.funs.values()):
                choices += ["fun", "fun", "fun"]
        pick = rng.choice(choices)
        if pick == "abs":
            self._bound += 1
            x = Var(f"x{self._bound}", ty.dom)
            return Abs(x, self.term(ty.cod, budget - 1, list(env) + [x]))
        if pick == "fun":
            decls = [d for d in self.sig.funs.values() if d.out_type == ty]
            d = rng.choice(decls)
            if d.arity == 0:
                return Fun(d.name, (), d.out_type)
            share = max(1, (budget - 1) // d.arity)
            return Fun(d.name, tuple(self.term(a, share, env) for a in d.arg_types), d.out_type)
        if pick == "app":
            doms = [t for t in self.arrow_types if isinstance(t, Sort)
                    and arrow_depth(Arrow(t, ty)) <= self.max_depth]
            if not doms:
                return self._leaf(ty, local)
            dom = rng.choice(doms)
            half = max(1, (budget - 1) // 2)
            return App(self.term(Arrow(dom, ty), half, env), self.term(dom, half, env))
        return self._leaf(ty, local)

    def _leaf(self, ty: Type, local: list) -> Term:
        if isinstance(ty, Sort):
            consts = [d for d in self.sig.funs.values() if d.out_type == ty and d.arity == 0]
            if consts and self.rng.random() < 0.3:
                d = self.rng.choice(consts)
                return Fun(d.name, (), ty)
        if local and self.rng.random() < 0.6:
            return self.rng.choice(local)
        return self.free_var(ty)

    def sized(self, ty: Type, max_size: int, env: Sequence[Var] = ()) -> Term:
        while True:
            t = self.term(ty, self.rng.randint(1, max_size), env)
            if size(t) <= max_size:
                return t


def start_terms(system: RewriteSystem, rng: random.Random, max_size: int = 12) -> Term:
    """A random term of size at most ``max_size`` that tends to contain redexes.

    Half the time a rule's left-hand side is instantiated with random terms and
    wrapped in a random context; otherwise a random term of a rule type is
    drawn.
    """
    gen = TermGen(system.signature, rng, tuple(system.problem_types()), prefix="w")
    rules = list(system.rules)
    while True:
        r: Rule = rng.choice(rules)
        if rng.random() < 0.5:
            sub = {v: gen.sized(v.type, 3) for v in sorted(r.lhs.fv, key=lambda v: v.name)}
            t = substitute_many(r.lhs, sub)
            if rng.random() < 0.5:
                t = _wrap(gen, t, rng)
        else:
            t = gen.sized(r.lhs.ty, max_size)
        if size(t) <= max_size:
            return t


def _wrap(gen: TermGen, t: Term, rng: random.Random) -> Term:
    """Put ``t`` under a random symbol taking an argument of its type."""
    decls = [d for d in gen.sig.funs.values() if t.ty in d.arg_types]
    if not decls:
        return t
    d = rng.choice(decls)
    hole = rng.choice([i for i, a in enumerate(d.arg_types) if a == t.ty])
    args = tuple(t if i == hole else gen.sized(a, 2) for i, a in enumerate(d.arg_types))
    return Fun(d.name, args, d.out_type)
