"""Matching, contraction and random reduction walks."""

import random

from conftest import load
from cpo.generate import start_terms
from cpo.rewriting import Redex, contract, match, random_walk, redexes, subterm_at
from cpo.syntax import parse_term, print_term
from cpo.terms import alpha_eq, size


def test_match_binds_pattern_variables():
    system = load("plus")
    rule = system.rules[1]
    t = parse_term("plus(S(0), S(0))", system)
    sub = match(rule.lhs, t)
    assert {v.name: print_term(u) for v, u in sub.items()} == {"x": "0", "y": "S(0)"}
    assert match(rule.lhs, parse_term("plus(0, 0)", system)) is None


def test_match_needs_consistent_repeats():
    system = load("beta_expansion")
    lhs = system.rules[0].lhs
    assert match(lhs, lhs) == {}


def test_pattern_variable_does_not_capture_bound_variable():
    system = load("brouwer")
    # U may not be instantiated with a term mentioning the binder
    pattern = parse_term("\\n:N. rec(@(F, n), U, X, W)", system)
    target = parse_term("\\m:N. rec(@(F, m), U, X, W)", system)
    assert match(pattern, target) is not None
    bad = parse_term("\\m:N. rec(@(F, m), rec(@(F, m), U, X, W), X, W)", system)
    assert match(pattern, bad) is None


def test_rule_and_beta_contraction():
    system = load("appabs_loop")
    t = parse_term("@(B, A, A)", system)
    found = list(redexes(t, system.rules))
    assert found == [Redex((), "rule", 0)]
    step = contract(t, found[0], system.rules)
    assert print_term(step) == "@(\\z:o. f(z), A)"
    beta = list(redexes(step, system.rules))
    assert Redex((), "beta") in beta
    assert print_term(contract(step, Redex((), "beta"), system.rules)) == "f(A)"


def test_subterm_positions():
    system = load("plus")
    t = parse_term("S(plus(0, y))", system)
    assert print_term(subterm_at(t, (0, 1))) == "y"
    pos = [r.position for r in redexes(t, system.rules)]
    assert pos == [(0,)]


def test_walk_reaches_normal_form():
    system = load("plus")
    t = parse_term("plus(S(S(0)), S(0))", system)
    walk = random_walk(t, system.rules, random.Random(0))
    assert walk.terminated
    assert alpha_eq(walk.final, parse_term("S(S(S(0)))", system))
    assert walk.steps == 3


def test_walk_respects_budget_on_looping_system():
    system = load("appabs_loop")
    t = parse_term("f(A)", system)
    walk = random_walk(t, system.rules, random.Random(0), max_steps=50)
    assert not walk.terminated and walk.steps == 50


def test_start_terms_are_small(rng):
    system = load("brouwer")
    for _ in range(50):
        t = start_terms(system, rng, max_size=12)
        assert size(t) <= 12


def test_ackermann_outgrows_any_small_step_budget():
    # terminating, but ack(ack(2, 2), 0) = ack(7, 0) needs far more than 10^4 steps;
    # this is why the system is kept out of the walk corpus
    system = load("ackermann")
    t = parse_term("ack(ack(S(S(0)), S(S(0))), 0)", system)
    assert size(t) <= 12
    walk = random_walk(t, system.rules, random.Random(0), max_steps=10_000)
    assert not walk.terminated
