import itertools

import pytest
from hypothesis import given, strategies as st

from cpo.terms import (Abs, App, ArityMismatch, Arrow, FreshSupply, Fun, Signature, Sort,
                       TermClass, TypeMismatch, UnboundVariable, UndeclaredSymbol, Var, alpha_eq,
                       alpha_key, app, arrow, classify, eta_view, free_vars, size, spine,
                       substitute, typecheck)

N = Sort("N")
NN = Arrow(N, N)


def sig():
    s = Signature()
    s.add_sort("N")
    s.add_fun("0", [], N)
    s.add_fun("S", [N], N)
    s.add_fun("h", [NN, N], N)
    return s


x, y, z = Var("x", N), Var("y", N), Var("z", N)
F = Var("F", NN)


def test_arrow_is_right_nested():
    assert arrow(N, N, N) == Arrow(N, Arrow(N, N))


def test_application_spine():
    t = app(F, x)
    assert spine(t) == (F, [x])
    assert t.ty == N
    assert App(x, x).ty is None


def test_signature_builds_checked_terms():
    s = sig()
    assert s("S", s("0")).ty == N
    with pytest.raises(ArityMismatch):
        s("S")
    with pytest.raises(TypeMismatch):
        s("S", F)
    with pytest.raises(UndeclaredSymbol):
        s("g", x)


def test_typecheck_reports_position():
    s = sig()
    t = Fun("h", (x, x), N)
    with pytest.raises(TypeMismatch) as err:
        typecheck(t, {"x": N}, s)
    assert err.value.position == (1,)  # positions are 1-based
    with pytest.raises(UnboundVariable):
        typecheck(Fun("S", (x,), N), {}, s)
    assert typecheck(Abs(x, Fun("S", (x,), N)), {}, s) == NN


def test_substitution_avoids_capture():
    t = Abs(y, Fun("h", (F, y), N))
    out = substitute(t, F, Abs(z, y))
    assert isinstance(out, Abs) and out.var.name != "y"
    assert free_vars(out) == {y}
    b = out.var
    assert alpha_eq(out, Abs(b, Fun("h", (Abs(z, y), b), N)))


def test_substitution_stops_at_shadowing_binder():
    t = Abs(x, Fun("S", (x,), N))
    assert substitute(t, x, y) is t


def test_substitution_type_check():
    with pytest.raises(TypeMismatch):
        substitute(x, x, F)


def test_fresh_supply_strips_suffix_and_avoids():
    fs = FreshSupply({"n_1"})
    assert fs.fresh("n", N).name == "n_2"
    assert fs.fresh("n_2", N).name == "n_3"


def test_alpha_eq_and_key():
    a = Abs(x, Fun("S", (x,), N))
    b = Abs(y, Fun("S", (y,), N))
    assert alpha_eq(a, b) and alpha_key(a) == alpha_key(b)
    assert not alpha_eq(Abs(x, y), Abs(y, y))


def test_eta_view():
    assert eta_view(Abs(x, App(F, x))) == F
    assert eta_view(Abs(x, App(Abs(y, x), x))) is None


# exhaustive classification over small terms

def small_terms(depth):
    if depth == 0:
        return [x, Fun("0", (), N), F]
    smaller = small_terms(depth - 1)
    out = list(smaller)
    for t in smaller:
        if t.ty == N:
            out.append(Fun("S", (t,), N))
            out.append(Abs(y, t))
        if t.ty == NN:
            out.append(App(t, x))
    return out


def test_classify_partitions_small_terms():
    terms = small_terms(3)
    assert len(terms) > 50
    for t in terms:
        flags = [isinstance(t, Abs), isinstance(t, Fun), isinstance(t, (Var, App))]
        assert sum(flags) == 1
        expected = [TermClass.ABSTRACTION, TermClass.PREALGEBRAIC, TermClass.NEUTRAL][flags.index(True)]
        assert classify(t) is expected


# property tests

names = st.sampled_from(["x", "y", "z", "w"])


@st.composite
def terms(draw, ty=N, depth=3, env=()):
    choices = ["var"]
    if depth > 0:
        choices += ["fun", "app"] if ty == N else ["abs"]
    kind = draw(st.sampled_from(choices))
    if kind == "var":
        if ty == N:
            return draw(st.sampled_from([Var(n, N) for n in ["x", "y", "z", "w"]] + list(env)))
        return draw(st.sampled_from([F, Var("G", NN)]))
    if kind == "fun":
        return Fun("S", (draw(terms(N, depth - 1, env)),), N)
    if kind == "app":
        return App(draw(terms(NN, depth - 1, env)), draw(terms(N, depth - 1, env)))
    v = Var(draw(names), N)
    return Abs(v, draw(terms(N, depth - 1, env + (v,))))


def env_of(*ts):
    env = {}
    for t in ts:
        for v in t.fv:
            env[v.name] = v.type
    return env


@given(terms(), names, terms())
def test_substitution_preserves_typing(t, xname, u):
    v = Var(xname, N)
    out = substitute(t, v, u)
    s = sig()
    assert typecheck(out, env_of(out), s) == typecheck(t, env_of(t), s)


@given(terms(), names, terms())
def test_substitution_free_variables(t, xname, u):
    v = Var(xname, N)
    out = substitute(t, v, u)
    allowed = (t.fv - {v}) | (u.fv if v in t.fv else frozenset())
    assert out.fv <= allowed


@given(terms(), terms(), terms())
def test_alpha_eq_is_an_equivalence(a, b, c):
    assert alpha_eq(a, a)
    assert alpha_eq(a, b) == alpha_eq(b, a)
    if alpha_eq(a, b) and alpha_eq(b, c):
        assert alpha_eq(a, c)


def rename_bound(t, k=[0]):
    if isinstance(t, Abs):
        k[0] += 1
        v = Var(f"r{k[0]}", t.var.type)
        return Abs(v, rename_bound(substitute(t.body, t.var, v), k))
    if isinstance(t, App):
        return App(rename_bound(t.fun, k), rename_bound(t.arg, k))
    if isinstance(t, Fun):
        return Fun(t.symbol, tuple(rename_bound(a, k) for a in t.args), t.type)
    return t


@given(terms())
def test_alpha_eq_invariant_under_bound_renaming(t):
    r = rename_bound(t)
    assert alpha_eq(t, r) and size(t) == size(r)
