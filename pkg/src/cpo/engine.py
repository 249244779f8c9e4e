"""Whole-system checks and parameter search."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from .ordering import Context, DepthLimitExceeded, Derivation, Goal, Variant, validate
from .precedence import Precedence, PrecedenceError, Status, validate_statuses
from .terms import CPOError, Fun, Signature, Term, Var, all_names, term_types, typecheck
from .typeorder import DEFAULT_DEPTH, DEFAULT_MAX_UNIVERSE, TypeOrder, build_type_order


class ValidationError(CPOError):
    def __init__(self, message: str, line: int = 0):
        self.line = line
        super().__init__(message)


@dataclass
class Rule:
    lhs: Term
    rhs: Term
    line: int = 0


@dataclass
class RewriteSystem:
    signature: Signature
    variables: dict = field(default_factory=dict)
    rules: list = field(default_factory=list)
    type_pairs: list = field(default_factory=list)
    precedence_pairs: list = field(default_factory=list)
    status: dict = field(default_factory=dict)
    name: str = ""
    locations: dict = field(default_factory=dict, compare=False, repr=False)

    def names(self) -> set:
        out = set(self.variables)
        for r in self.rules:
            out |= all_names(r.lhs) | all_names(r.rhs)
        return out

    def problem_types(self) -> set:
        types = set(self.signature.types())
        types.update(v.type for v in self.variables.values())
        for r in self.rules:
            types.update(term_types(r.lhs))
            types.update(term_types(r.rhs))
        for a, b in self.type_pairs:
            types.update((a, b))
        return types

    def non_algebraic_rules(self) -> list:
        return [i for i, r in enumerate(self.rules, start=1) if not isinstance(r.lhs, Fun)]

    def precedence(self) -> Precedence:
        return Precedence(self.signature.funs, self.precedence_pairs)

    def type_order(self, depth: int = DEFAULT_DEPTH,
                   max_size: int = DEFAULT_MAX_UNIVERSE) -> TypeOrder:
        return build_type_order(self.type_pairs, self.problem_types(), depth, max_size)

    def validate_rules(self) -> None:
        env = {v.name: v.type for v in self.variables.values()}
        for i, r in enumerate(self.rules, start=1):
            where = f"rule {i}"
            if isinstance(r.lhs, Var):
                raise ValidationError(f"{where}: left-hand side must not be a variable", r.line)
            if not r.rhs.fv <= r.lhs.fv:
                missing = ", ".join(sorted(v.name for v in r.rhs.fv - r.lhs.fv))
                raise ValidationError(f"{where}: FreeVariableEscape: {missing} not free on the left",
                                      r.line)
            lhs_env = dict(env)
            lhs_env.update({v.name: v.type for v in r.lhs.fv})
            try:
                typecheck(r.lhs, lhs_env, self.signature)
                typecheck(r.rhs, lhs_env, self.signature)
            except CPOError as exc:
                raise ValidationError(f"{where}: {exc}", r.line) from exc


@dataclass
class RuleResult:
    index: int
    rule: Rule
    outcome: str  # "oriented" | "not-oriented" | "budget"
    derivation: Optional[Derivation] = None
    frontier: list = field(default_factory=list)
    message: str = ""

    @property
    def oriented(self) -> bool:
        return self.outcome == "oriented"


@dataclass
class Verdict:
    results: list
    definition: int
    variant: Variant
    reports: list = field(default_factory=list)
    contexts: list = field(default_factory=list, repr=False)

    @property
    def all_oriented(self) -> bool:
        return all(r.oriented for r in self.results)

    @property
    def budget_exceeded(self) -> bool:
        return any(r.outcome == "budget" for r in self.results)


@dataclass
class Ingredients:
    type_order: TypeOrder
    precedence: Precedence
    definition: int
    reports: list


def prepare(system: RewriteSystem, definition: int = 2, universe_depth: int = DEFAULT_DEPTH,
            max_universe: int = DEFAULT_MAX_UNIVERSE) -> Ingredients:
    """Validate every ingredient of ``system``."""
    system.validate_rules()
    order = system.type_order(universe_depth, max_universe)
    prec = system.precedence()
    arities = {f: d.arity for f, d in system.signature.funs.items()}
    validate_statuses(prec, system.status, arities)
    reports = [f"rule {i}: left-hand side is not headed by a function symbol"
               for i in system.non_algebraic_rules()]
    if definition == 2:
        bad = order.separate_world_violation()
        if bad is not None:
            reports.append(
                f"simple sort {bad[0]} is above parameterised type {bad[1]}; "
                "accessibility disabled, using the base ordering")
            definition = 1
    return Ingredients(order, prec, definition, reports)


def check_system(system: RewriteSystem, definition: int = 2, variant: Variant = Variant.SOUND,
                 max_depth: int = 512, universe_depth: int = DEFAULT_DEPTH,
                 explain: bool = True, ingredients: Optional[Ingredients] = None) -> Verdict:
    """Orient every rule independently; each rule gets its own context."""
    ing = ingredients or prepare(system, definition, universe_depth)
    names = system.names()
    results = []
    contexts = []
    for i, rule in enumerate(system.rules, start=1):
        ctx = Context(system.signature, ing.type_order, ing.precedence, system.status,
                      ing.definition, variant, max_depth, avoid=names)
        contexts.append(ctx)
        try:
            d = ctx.orient(rule.lhs, rule.rhs)
        except DepthLimitExceeded as exc:
            results.append(RuleResult(i, rule, "budget", message=str(exc)))
            continue
        if d is not None:
            results.append(RuleResult(i, rule, "oriented", d))
            continue
        frontier = []
        if explain:
            frontier, _ = ctx.explain(Goal(">", rule.lhs, rule.rhs, frozenset(), True))
        results.append(RuleResult(i, rule, "not-oriented", frontier=frontier))
    return Verdict(results, ing.definition, variant, list(ing.reports), contexts)


def revalidate(verdict: Verdict) -> bool:
    """Replay every derivation of ``verdict`` in its own context."""
    for res, ctx in zip(verdict.results, verdict.contexts):
        if res.derivation is not None:
            validate(ctx, res.derivation)
    return True


# ---------------------------------------------------------------------------
# Parameter search


@dataclass
class SearchSpace:
    max_pairs: int = 3
    try_lex: bool = True
    symbols: Optional[Sequence[str]] = None
    extra_type_pairs: Sequence[Sequence[tuple]] = ((),)


@dataclass
class SearchResult:
    found: bool
    precedence_pairs: list
    status: dict
    type_pairs: list
    verdict: Optional[Verdict]
    candidates_tried: int
    space: SearchSpace


def _precedence_candidates(symbols: Sequence[str], base: Sequence[tuple], max_pairs: int):
    ordered = [(f, g) for f in symbols for g in symbols if f != g]
    seen = set()
    for k in range(max_pairs + 1):
        for combo in itertools.combinations(ordered, k):
            pairs = list(base) + [(f, ">", g) for f, g in combo]
            try:
                prec = Precedence(symbols, pairs)
            except PrecedenceError:
                continue
            closure = prec.strict_pairs()
            if closure in seen:
                continue
            seen.add(closure)
            yield pairs


def _status_candidates(system: RewriteSystem, try_lex: bool):
    free = [f for f, d in system.signature.funs.items()
            if d.arity >= 2 and f not in system.status]
    options = [()] if not try_lex else [c for r in range(len(free) + 1)
                                           for c in itertools.combinations(free, r)]
    for lexes in options:
        status = dict(system.status)
        status.update({f: Status.LEX for f in lexes})
        yield status


def search_parameters(system: RewriteSystem, space: Optional[SearchSpace] = None,
                      definition: int = 2, variant: Variant = Variant.SOUND,
                      max_depth: int = 512, universe_depth: int = DEFAULT_DEPTH) -> SearchResult:
    """First candidate (fewest strict pairs, multiset before lexicographic)
    under which every rule is oriented."""
    space = space or SearchSpace()
    symbols = list(space.symbols or system.signature.funs)
    tried = 0
    for pairs in _precedence_candidates(symbols, system.precedence_pairs, space.max_pairs):
        for status in _status_candidates(system, space.try_lex):
            for extra in space.extra_type_pairs:
                cand = replace(system, precedence_pairs=pairs, status=status,
                               type_pairs=list(system.type_pairs) + list(extra))
                tried += 1
                try:
                    verdict = check_system(cand, definition, variant, max_depth,
                                           universe_depth, explain=False)
                except CPOError:
                    continue
                if verdict.all_oriented:
                    return SearchResult(True, pairs, status, cand.type_pairs, verdict,
                                        tried, space)
    return SearchResult(False, [], {}, [], None, tried, space)
