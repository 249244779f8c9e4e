"""Problem-file parsing, diagnostics with locations, and printing."""

import pytest

from conftest import CORPUS, corpus_names, load
from cpo.syntax import ParseError, ProblemError, parse_problem, parse_term, print_problem, \
    print_term, print_type, tokenize
from cpo.terms import Abs, App, Arrow, Fun, Sort, alpha_eq


@pytest.mark.parametrize("name", corpus_names())
def test_print_parse_round_trip(name):
    system = load(name)
    text = print_problem(system)
    again = parse_problem(text)
    assert again.signature.sorts == system.signature.sorts
    assert again.signature.funs == system.signature.funs
    assert again.type_pairs == system.type_pairs
    assert again.precedence_pairs == system.precedence_pairs
    assert again.status == system.status
    assert len(again.rules) == len(system.rules)
    for a, b in zip(again.rules, system.rules):
        assert alpha_eq(a.lhs, b.lhs) and alpha_eq(a.rhs, b.rhs)
    assert print_problem(again) == text


def test_comments_and_rule_lines():
    system = load("brouwer")
    lines = (CORPUS / "brouwer.cpo").read_text().splitlines()
    for r in system.rules:
        assert lines[r.line - 1].startswith("rule ")


def test_application_is_binary_and_curried():
    system = load("brouwer")
    t = parse_term("@(W, F, \\n:N. rec(@(F, n), U, X, W))", system)
    assert isinstance(t, App) and isinstance(t.fun, App)
    assert isinstance(t.arg, Abs) and t.arg.var.type == Sort("N")
    assert print_term(t) == "@(W, F, \\n:N. rec(@(F, n), U, X, W))"


def test_juxtaposition_is_left_nested_application():
    system = load("brouwer")
    at = parse_term("@(W, F, \\n:N. rec(@(F, n), U, X, W))", system)
    juxt = parse_term("W F (\\n:N. rec(F n, U, X, W))", system)
    assert alpha_eq(at, juxt)
    # F(u) with no space is the same application
    assert alpha_eq(parse_term("\\m:N. F(m)", system), parse_term("\\m:N. F m", system))


def test_arrow_constant():
    system = load("appabs_loop")
    b = parse_term("B", system)
    assert isinstance(b, Fun) and b.args == () and isinstance(b.ty, Arrow)


def test_type_printing_parenthesises_domains():
    ty = Arrow(Arrow(Sort("N"), Sort("O")), Sort("O"))
    assert print_type(ty) == "(N -> O) -> O"
    assert print_type(Sort("List", (Sort("N"),))) == "List(N)"


def test_binder_shadows_declared_variable():
    system = load("brouwer")
    t = parse_term("\\n:N. @(F, n)", system)
    assert t.var.type == Sort("N")
    assert not t.fv & {system.variables["n"]}


def test_tokens_have_positions():
    toks = tokenize("sort a;\n  fun c : a;")
    fun = [t for t in toks if t.text == "fun"][0]
    assert (fun.line, fun.col) == (2, 3)


BAD = [
    # (source, line, col, message fragment)
    ("sort a;\nfun f : b -> a;", 2, 9, "undeclared sort b"),
    ("sort a;\nfun f : a -> a;\nvar x : a;\nrule f(x, x) -> x;", 4, 6, "argument"),
    ("sort a;\nvar x : a;\nrule x -> x;", 3, 6, "must not be a variable"),
    ("sort a;\nfun f : a -> a;\nvar x : a;\nrule f(x) -> y;", 4, 14,
     "FreeVariableEscape"),
    ("sort a, b;\nfun f : a -> a;\nvar x : b;\nrule f(x) -> x;", 4, 8, "TypeMismatch"),
    ("sort a;\nfun c : a;\nfun c : a;", 3, 5, "redeclared"),
    ("sort a;\nfun f : a -> a;\nstatus f fancy;", 3, 10, "status must be"),
    ("sort a;\nfun f : a -> a;\nprec f g;", 3, 8, "expected"),
    ("sort a;\nfun c : a;\n$", 3, 1, "unexpected character"),
    ("sort a;\nfoo a;", 2, 1, "expected a declaration"),
]


@pytest.mark.parametrize("src,line,col,fragment", BAD, ids=[b[3] for b in BAD])
def test_diagnostics(src, line, col, fragment):
    with pytest.raises(ProblemError) as exc:
        parse_problem(src)
    err = exc.value
    assert fragment in err.message
    assert (err.line, err.col) == (line, col)


def test_parse_term_rejects_trailing_input():
    with pytest.raises(ParseError):
        parse_term("S(n) n", load("brouwer"))
