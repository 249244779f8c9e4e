"""Clause-level behaviour of the ordering, replay, and variants."""

import dataclasses
import random

import pytest
from hypothesis import given, strategies as st

from conftest import context, corpus_names, load
from cpo.engine import check_system, prepare
from cpo.generate import A, B, TermGen, random_world
from cpo.ordering import (Context, DepthLimitExceeded, FreeVariableEscape, ReplayError, Variant,
                          cpo2, replay, validate)
from cpo.syntax import parse_problem, parse_term, print_term
from cpo.terms import Fun, subterms

SMALL = """
sort a, b;
typeorder a >= b;
fun f : a * a -> a;
fun g : a -> a;
fun k : a * a -> a;
fun q : a -> a;
fun l : (b -> a) -> a;
fun c : b;
var x : a; var y : a; var F : a -> a; var G : b -> a; var w : b;
prec f > g;
prec k > g;
prec q > c;
status k lex;
rule f(x, y) -> x;
"""


@pytest.fixture(scope="module")
def small():
    return parse_problem(SMALL, "small")


def term(system, text):
    return parse_term(text, system)


def xs(system, *names):
    return frozenset(system.variables[n] for n in names)


CLAUSES = [
    # (case, left, right, X, typed)
    ("1a", "f(x, y)", "x", ("x",), False),
    ("1b", "g(g(x))", "g(x)", (), True),
    ("1c", "f(x, y)", "g(x)", (), True),
    ("1d", "f(x, y)", "\\z:a. g(z)", (), False),
    ("1e", "f(x, y)", "x", (), True),
    ("1f", "q(l(G))", "G", (), False),
    ("2a", "@(F, x)", "x", ("x",), False),
    ("2b", "@(F, g(x))", "@(F, x)", (), True),
    ("2c", "@(F, x)", "\\z:a. x", (), False),
    ("2d", "@(F, x)", "x", (), True),
    ("2e", "@(\\y:a. g(y), x)", "g(x)", (), True),
    ("3a", "\\y:a. g(y)", "x", ("x",), False),
    ("3b", "\\y:a. g(y)", "\\y:a. y", (), True),
    ("3c", "\\y:a. g(x)", "\\z:b. x", (), False),
    ("3d", "\\y:a. g(x)", "x", (), True),
    ("3e", "\\y:a. @(F, y)", "F", (), True),
]


@pytest.mark.parametrize("case,left,right,X,typed", CLAUSES, ids=[c[0] for c in CLAUSES])
def test_single_clause(small, case, left, right, X, typed):
    ctx = context(small)
    s, t = term(small, left), term(small, right)
    d = ctx.gt_typed(s, t, xs(small, *X)) if typed else ctx.gt(s, t, xs(small, *X))
    assert d is not None and d.case == case
    validate(ctx, d)


def test_lex_status(small):
    ctx = context(small)
    d = ctx.gt_typed(term(small, "k(g(x), y)"), term(small, "k(x, g(y))"))
    assert d.case == "1b" and d.children[0].case == "lex"
    # the multiset comparison of the same arguments fails: {g(x), y} vs {x, g(y)}
    mul = ctx.derive(status={})
    assert mul.gt_typed(term(small, "k(g(x), y)"), term(small, "k(x, g(y))")) is None


def test_accessible_subterm_needs_extended_ordering(small):
    s, t = term(small, "q(l(G))"), term(small, "G")
    assert context(small, 1).gt(s, t) is None
    assert context(small, 2).gt(s, t).case == "1f"
    assert cpo2(context(small, 1), s, t) is not None


def test_accessibility_ordering(small):
    ctx = context(small)
    s = term(small, "q(l(G))")
    d = ctx.acc_ord(s, frozenset(), term(small, "l(G)"), term(small, "@(G, c)"))
    assert d is not None and d.case == "acc"
    validate(ctx, d)
    # the argument must still be smaller than the left-hand side
    assert ctx.acc_ord(term(small, "l(G)"), frozenset(), term(small, "l(G)"),
                       term(small, "@(G, w)")) is None
    # a bare variable is no application of an accessible head
    assert ctx.acc_ord(s, frozenset(), term(small, "l(G)"), term(small, "G")) is None


def test_lost_variable_and_type_guard(small):
    ctx = context(small)
    assert ctx.gt(term(small, "g(x)"), term(small, "y")) is None
    assert ctx.gt_typed(term(small, "g(x)"), term(small, "F")) is None
    # a right-subterm type is smaller: F : a -> a against a
    assert ctx.gt_typed(term(small, "\\y:a. g(x)"), term(small, "x")) is not None


def test_orient_rejects_escaping_variable(small):
    with pytest.raises(FreeVariableEscape):
        context(small).orient(term(small, "g(x)"), term(small, "y"))


def test_depth_limit(small):
    ctx = context(small, max_depth=1)
    with pytest.raises(DepthLimitExceeded):
        ctx.gt_typed(term(small, "g(g(x))"), term(small, "g(x)"))
    with pytest.raises(ValueError):
        context(small, max_depth=0)


def test_bad_definition(small):
    ing = prepare(small)
    with pytest.raises(ValueError):
        Context(small.signature, ing.type_order, ing.precedence, definition=3)


@pytest.mark.parametrize("name", corpus_names())
@pytest.mark.parametrize("definition", [1, 2])
def test_corpus_derivations_replay(name, definition):
    system = load(name)
    verdict = check_system(system, definition, explain=False)
    for res, ctx in zip(verdict.results, verdict.contexts):
        if res.derivation is not None:
            validate(ctx, res.derivation)


def _tamper_case(d, new_case):
    return dataclasses.replace(d, case=new_case)


def test_tampered_derivation_rejected():
    system = load("brouwer")
    verdict = check_system(system, 2, explain=False)
    ctx, d = verdict.contexts[2], verdict.results[2].derivation
    assert replay(ctx, d)
    assert not replay(ctx, _tamper_case(d, "1e"))
    assert not replay(ctx, dataclasses.replace(d, children=d.children[:-1]))
    assert not replay(ctx, _tamper_case(d, "bogus"))
    swapped = dataclasses.replace(d, goal=dataclasses.replace(d.goal, s=d.goal.t, t=d.goal.s))
    with pytest.raises(ReplayError):
        validate(ctx, swapped)


def test_unsound_variants_are_opt_in():
    one = load("beta_expansion")
    assert not check_system(one, 2).all_oriented
    assert check_system(one, 2, Variant.UNSOUND_STAT_X).all_oriented
    two = load("appabs_loop")
    assert not check_system(two, 2).results[0].oriented
    assert check_system(two, 2, Variant.UNSOUND_APPABS_Z).all_oriented


def test_memo_is_per_context(small):
    ctx = context(small)
    s, t = term(small, "g(g(x))"), term(small, "g(x)")
    first = ctx.gt_typed(s, t)
    assert ctx.memo
    again = ctx.gt_typed(s, t)
    assert again is first
    assert not ctx.derive().memo


# small generated checks; the big sweeps live in the acceptance suite

@given(st.integers(0, 2**32 - 1))
def test_generated_irreflexive(seed):
    rng = random.Random(seed)
    world = random_world(rng)
    gen = TermGen(world.signature, rng)
    s = gen.sized(rng.choice([A, B]), 8)
    ctx = world.context(rng.choice((1, 2)))
    assert ctx.gt_typed(s, s) is None


@given(st.integers(0, 2**32 - 1))
def test_generated_subterm(seed):
    rng = random.Random(seed)
    world = random_world(rng)
    gen = TermGen(world.signature, rng)
    decls = [d for d in world.signature.funs.values() if d.arity]
    if not decls:
        return
    d = rng.choice(decls)
    s = Fun(d.name, tuple(gen.sized(a, 4) for a in d.arg_types), d.out_type)
    ctx = world.context(2)
    for arg in s.args:
        if world.type_order.ge(s.ty, arg.ty) and arg.fv <= s.fv:
            assert ctx.gt_typed(s, arg) is not None


def _corpus_subterms(system):
    seen = {}
    for r in system.rules:
        for side in (r.lhs, r.rhs):
            for u in subterms(side):
                seen.setdefault(print_term(u), u)
    return list(seen.values())


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_irreflexive(name):
    system = load(name)
    for definition in (1, 2):
        ctx = context(system, definition)
        for u in _corpus_subterms(system):
            assert ctx.gt_typed(u, u) is None and ctx.gt(u, u) is None


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_extended_contains_base(name):
    system = load(name)
    one, two = context(system, 1), context(system, 2)
    terms = _corpus_subterms(system)
    for s in terms:
        for t in terms:
            if one.gt(s, t) is not None:
                assert two.gt(s, t) is not None
