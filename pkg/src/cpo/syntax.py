"""Problem file format: a tokenizer, a recursive-descent parser and a printer
whose output parses back to an alpha-equivalent system.

Declarations end with ``;`` and ``#`` starts a comment::

    sort N, O, A;
    typeorder O >= N;
    fun 0 : O;
    fun lim : (N -> O) -> O;
    fun B : (o -> o -> o);          # nullary constant of arrow type
    var F : N -> O;
    prec rec > lim, S, 0;
    status rec mul;
    rule rec(lim(F), U, X, W) -> @(W, F, \\n:N. rec(@(F, n), U, X, W));
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .engine import RewriteSystem, Rule
from .precedence import Status
from .terms import (Abs, App, Arrow, ArityMismatch, CPOError, Fun, Signature, Sort, Term,
                    Type, TypeMismatch, Var, spine)


class ProblemError(CPOError):
    """A diagnostic tied to a source location."""

    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"{line}:{col}: {message}")


class ParseError(ProblemError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<sym>->|>=|[>=(),;:.*@\\λ/])
  | (?P<ident>[A-Za-z0-9_'][A-Za-z0-9_']*)
""", re.VERBOSE)

KEYWORDS = {"sort", "typeorder", "fun", "var", "prec", "status", "rule"}


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind != "ws":
            tok_text = "\\" if m.group() == "λ" else m.group()
            tokens.append(Token(kind, tok_text, line, pos - line_start + 1))
        chunk = m.group()
        nl = chunk.count("\n")
        if nl:
            line += nl
            line_start = pos + chunk.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class Parser:
    def __init__(self, text: str, name: str = ""):
        self.tokens = tokenize(text)
        self.i = 0
        self.sig = Signature()
        self.system = RewriteSystem(self.sig, name=name)
        self.extra_vars: dict = {}
        self.in_rhs = False

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Optional[Token] = None) -> ProblemError:
        tok = tok or self.tok
        return ParseError(message, tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.kind in ("sym", "ident") and self.tok.text == text

    def take(self, text: Optional[str] = None, kind: Optional[str] = None) -> Token:
        tok = self.tok
        if text is not None and not self.at(text):
            raise self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        if kind is not None and tok.kind != kind:
            raise self.error(f"expected {kind}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def ident(self) -> Token:
        tok = self.take(kind="ident")
        return tok

    def ident_list(self) -> list:
        names = [self.ident()]
        while self.at(","):
            self.take(",")
            names.append(self.ident())
        return names

    # -- problem -----------------------------------------------------------

    def parse(self) -> RewriteSystem:
        while self.tok.kind != "eof":
            kw = self.tok
            if kw.kind != "ident" or kw.text not in KEYWORDS:
                raise self.error(f"expected a declaration, found {kw.text!r}")
            self.i += 1
            self.system.locations.setdefault(kw.text, (kw.line, kw.col))
            getattr(self, f"decl_{kw.text}")(kw)
            self.take(";")
        return self.system

    def decl_sort(self, kw):
        for tok in self.ident_list_with_arity():
            name, arity = tok
            if name.text in self.sig.sorts:
                raise self.error(f"sort {name.text} redeclared", name)
            self.sig.add_sort(name.text, arity)

    def ident_list_with_arity(self):
        out = []
        while True:
            name = self.ident()
            arity = 0
            if self.at("/"):
                self.take("/")
                num = self.ident()
                if not num.text.isdigit():
                    raise self.error("sort arity must be a number", num)
                arity = int(num.text)
            out.append((name, arity))
            if not self.at(","):
                return out
            self.take(",")

    def decl_typeorder(self, kw):
        left = self.type_()
        if self.at(">="):
            self.take(">=")
            both = False
        else:
            self.take("=")
            both = True
        right = self.type_()
        pairs = [(left, right)] + ([(right, left)] if both else [])
        for p in pairs:
            if p not in self.system.type_pairs:
                self.system.type_pairs.append(p)

    def decl_fun(self, kw):
        names = self.ident_list()
        self.take(":")
        args, out = self.fun_type()
        for name in names:
            self.check_fresh_name(name)
            try:
                self.sig.add_fun(name.text, args, out)
            except CPOError as exc:
                raise self.error(str(exc), name)

    def fun_type(self):
        first = self.atype()
        args = [first]
        while self.at("*"):
            self.take("*")
            args.append(self.atype())
        if self.at("->"):
            self.take("->")
            return args, self.type_()
        if len(args) > 1:
            raise self.error("a product of argument types must be followed by '->'")
        return [], first

    def decl_var(self, kw):
        names = self.ident_list()
        self.take(":")
        ty = self.type_()
        for name in names:
            self.check_fresh_name(name)
            self.system.variables[name.text] = Var(name.text, ty)

    def check_fresh_name(self, name: Token):
        if name.text in self.sig.funs or name.text in self.system.variables:
            raise self.error(f"{name.text} redeclared", name)

    def decl_prec(self, kw):
        groups = [self.symbol_group()]
        rels = []
        while self.at(">") or self.at("="):
            rels.append(self.take().text)
            groups.append(self.symbol_group())
        if not rels:
            raise self.error("expected '>' or '=' in precedence declaration")
        for left, rel, right in zip(groups, rels, groups[1:]):
            for f in left:
                for g in right:
                    pair = (f, rel, g)
                    if pair not in self.system.precedence_pairs:
                        self.system.precedence_pairs.append(pair)

    def symbol_group(self):
        out = []
        for tok in self.ident_list():
            if tok.text not in self.sig.funs:
                raise self.error(f"undeclared function symbol {tok.text}", tok)
            out.append(tok.text)
        return out

    def decl_status(self, kw):
        names = self.ident_list()
        st = self.ident()
        try:
            status = Status(st.text)
        except ValueError:
            raise self.error(f"status must be 'mul' or 'lex', found {st.text!r}", st)
        for name in names:
            if name.text not in self.sig.funs:
                raise self.error(f"undeclared function symbol {name.text}", name)
            self.system.status[name.text] = status

    def decl_rule(self, kw):
        lhs_tok = self.tok
        lhs = self.term({})
        self.take("->")
        rhs_tok = self.tok
        self.in_rhs = True
        try:
            rhs = self.term({})
        finally:
            self.in_rhs = False
        if isinstance(lhs, Var):
            raise self.error("left-hand side must not be a variable", lhs_tok)
        escaped = rhs.fv - lhs.fv
        if escaped:
            names = ", ".join(sorted(v.name for v in escaped))
            raise ProblemError(f"FreeVariableEscape: {names} not free in the left-hand side",
                               rhs_tok.line, rhs_tok.col)
        self.system.rules.append(Rule(lhs, rhs, kw.line))

    # -- types -------------------------------------------------------------

    def type_(self) -> Type:
        left = self.atype()
        if self.at("->"):
            self.take("->")
            return Arrow(left, self.type_())
        return left

    def atype(self) -> Type:
        if self.at("("):
            self.take("(")
            ty = self.type_()
            self.take(")")
            return ty
        name = self.ident()
        if name.text not in self.sig.sorts:
            raise self.error(f"undeclared sort {name.text}", name)
        args = []
        if self.at("("):
            self.take("(")
            args.append(self.type_())
            while self.at(","):
                self.take(",")
                args.append(self.type_())
            self.take(")")
        if len(args) != self.sig.sorts[name.text]:
            raise self.error(f"sort {name.text} expects {self.sig.sorts[name.text]} arguments", name)
        return Sort(name.text, tuple(args))

    # -- terms -------------------------------------------------------------

    def term(self, scope: dict) -> Term:
        if self.at("\\"):
            self.take("\\")
            name = self.ident()
            if self.at(":"):
                self.take(":")
                ty = self.type_()
            else:
                known = self.system.variables.get(name.text) or self.extra_vars.get(name.text)
                if known is None:
                    raise self.error(f"binder {name.text} needs a type", name)
                ty = known.type
            self.take(".")
            x = Var(name.text, ty)
            inner = dict(scope)
            inner[name.text] = x
            return Abs(x, self.term(inner))
        head = self.atom(scope)
        while self.starts_atom():
            arg_tok = self.tok
            arg = self.atom(scope)
            head = self.apply(head, arg, arg_tok)
        return head

    def starts_atom(self) -> bool:
        tok = self.tok
        if tok.kind == "ident":
            return tok.text not in KEYWORDS
        return tok.text in ("@", "(")

    def apply(self, fun: Term, arg: Term, tok: Token) -> Term:
        if not isinstance(fun.ty, Arrow):
            raise self.error(f"cannot apply a term of type {fun.ty}", tok)
        if fun.ty.dom != arg.ty:
            raise self.error(f"argument has type {arg.ty}, expected {fun.ty.dom}", tok)
        return App(fun, arg)

    def args(self, scope: dict) -> list:
        self.take("(")
        toks = [self.tok]
        out = [self.term(scope)]
        while self.at(","):
            self.take(",")
            toks.append(self.tok)
            out.append(self.term(scope))
        self.take(")")
        return list(zip(out, toks))

    def atom(self, scope: dict) -> Term:
        tok = self.tok
        if self.at("@"):
            self.take("@")
            items = self.args(scope)
            if len(items) < 2:
                raise self.error("@ needs a function and at least one argument", tok)
            head = items[0][0]
            for arg, arg_tok in items[1:]:
                head = self.apply(head, arg, arg_tok)
            return head
        if self.at("("):
            self.take("(")
            t = self.term(scope)
            self.take(")")
            return t
        name = self.ident()
        var = scope.get(name.text) or self.system.variables.get(name.text) \
            or self.extra_vars.get(name.text)
        if var is not None:
            # F(u, v) applies a variable; F (u) with a space is juxtaposition
            adjacent = (self.tok.line == name.line
                        and self.tok.col == name.col + len(name.text))
            if self.at("(") and adjacent:
                head = var
                for arg, arg_tok in self.args(scope):
                    head = self.apply(head, arg, arg_tok)
                return head
            return var
        decl = self.sig.funs.get(name.text)
        if decl is None:
            if self.in_rhs:
                raise self.error(f"FreeVariableEscape: {name.text} is not a variable of the "
                                 "left-hand side", name)
            raise self.error(f"unknown identifier {name.text}", name)
        items = self.args(scope) if self.at("(") else []
        if len(items) != decl.arity:
            raise self.error(
                f"ArityMismatch: {name.text} expects {decl.arity} arguments, got {len(items)}"
                + (" (algebraic symbols must be fully applied)" if not items else ""), name)
        for (arg, arg_tok), ty in zip(items, decl.arg_types):
            if arg.ty != ty:
                raise self.error(f"TypeMismatch: argument has type {arg.ty}, expected {ty}",
                                 arg_tok)
        return Fun(name.text, tuple(a for a, _ in items), decl.out_type)


def parse_problem(text: str, name: str = "") -> RewriteSystem:
    """Parse and validate a problem file."""
    parser = Parser(text, name)
    system = parser.parse()
    try:
        system.validate_rules()
    except CPOError as exc:
        raise ProblemError(str(exc), getattr(exc, "line", 0) or 1, 1)
    return system


def parse_term(text: str, system: RewriteSystem, extra_vars: Optional[dict] = None) -> Term:
    """Parse a single term against an existing system's declarations."""
    parser = Parser(text)
    parser.sig = system.signature
    parser.system = system
    parser.extra_vars = dict(extra_vars or {})
    t = parser.term({})
    if parser.tok.kind != "eof":
        raise parser.error(f"unexpected {parser.tok.text!r} after term")
    return t


# ---------------------------------------------------------------------------
# Printing


def print_type(ty: Type) -> str:
    if isinstance(ty, Arrow):
        left = print_type(ty.dom)
        if isinstance(ty.dom, Arrow):
            left = f"({left})"
        return f"{left} -> {print_type(ty.cod)}"
    if ty.args:
        return f"{ty.name}({', '.join(print_type(a) for a in ty.args)})"
    return ty.name


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Fun):
        if not t.args:
            return t.symbol
        return f"{t.symbol}({', '.join(print_term(a) for a in t.args)})"
    if isinstance(t, Abs):
        return f"\\{t.var.name}:{print_type(t.var.type)}. {print_term(t.body)}"
    head, args = spine(t)
    return f"@({', '.join(print_term(u) for u in [head] + args)})"


def print_fun_decl(decl) -> str:
    if not decl.arg_types:
        out = print_type(decl.out_type)
        return f"({out})" if isinstance(decl.out_type, Arrow) else out
    args = " * ".join(f"({print_type(a)})" if isinstance(a, Arrow) else print_type(a)
                      for a in decl.arg_types)
    return f"{args} -> {print_type(decl.out_type)}"


def print_problem(system: RewriteSystem) -> str:
    sig = system.signature
    lines = []
    if sig.sorts:
        lines.append("sort " + ", ".join(n if a == 0 else f"{n}/{a}"
                                         for n, a in sig.sorts.items()) + ";")
    for a, b in system.type_pairs:
        lines.append(f"typeorder {print_type(a)} >= {print_type(b)};")
    for decl in sig.funs.values():
        lines.append(f"fun {decl.name} : {print_fun_decl(decl)};")
    for v in system.variables.values():
        lines.append(f"var {v.name} : {print_type(v.type)};")
    for f, rel, g in system.precedence_pairs:
        lines.append(f"prec {f} {rel} {g};")
    for f, st in system.status.items():
        lines.append(f"status {f} {st.value};")
    for r in system.rules:
        lines.append(f"rule {print_term(r.lhs)} -> {print_term(r.rhs)};")
    return "\n".join(lines) + "\n"
