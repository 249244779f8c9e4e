"""Simply-typed algebraic lambda-terms.

Types are sort applications or arrows; terms are variables, abstractions,
binary applications and fully applied algebraic symbols.  All term nodes are
immutable and cache their type, free variables and hash at construction.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional, Union


class CPOError(Exception):
    """Base class for every error raised by the package."""


class UndeclaredSymbol(CPOError):
    pass


class UnboundVariable(CPOError):
    pass


class ArityMismatch(CPOError):
    pass


class TypeMismatch(CPOError):
    def __init__(self, position, expected, found, message=None):
        self.position = tuple(position)
        self.expected = expected
        self.found = found
        super().__init__(
            message or f"type mismatch at {self.position}: expected {expected}, found {found}"
        )


# ---------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Sort:
    name: str
    args: tuple = ()

    def __str__(self) -> str:
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(map(str, self.args))})"


@dataclass(frozen=True)
class Arrow:
    dom: "Type"
    cod: "Type"

    def __str__(self) -> str:
        left = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{left} -> {self.cod}"


Type = Union[Sort, Arrow]


def arrow(*types: Type) -> Type:
    """Right-nested arrow: ``arrow(a, b, c)`` is ``a -> b -> c``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def is_data_type(ty: Type) -> bool:
    return isinstance(ty, Sort)


def is_simple_data_type(ty: Type) -> bool:
    return isinstance(ty, Sort) and not ty.args


def subtypes(ty: Type) -> Iterator[Type]:
    yield ty
    if isinstance(ty, Arrow):
        yield from subtypes(ty.dom)
        yield from subtypes(ty.cod)
    else:
        for arg in ty.args:
            yield from subtypes(arg)


def arrow_depth(ty: Type) -> int:
    if isinstance(ty, Arrow):
        return 1 + max(arrow_depth(ty.dom), arrow_depth(ty.cod))
    return max((arrow_depth(a) for a in ty.args), default=0)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True, eq=True)
class Var:
    name: str
    type: Type
    ty: Type = field(init=False, compare=False, repr=False)
    fv: frozenset = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ty", self.type)
        object.__setattr__(self, "_hash", hash(("var", self.name, self.type)))
        object.__setattr__(self, "fv", frozenset((self,)))

    def __hash__(self):
        return self._hash

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=True)
class Abs:
    var: Var
    body: "Term"
    ty: Type = field(init=False, compare=False, repr=False)
    fv: frozenset = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        body_ty = self.body.ty
        object.__setattr__(self, "ty", None if body_ty is None else Arrow(self.var.type, body_ty))
        object.__setattr__(self, "fv", self.body.fv - {self.var})
        object.__setattr__(self, "_hash", hash(("abs", self.var, self.body)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class App:
    fun: "Term"
    arg: "Term"
    ty: Optional[Type] = field(init=False, compare=False, repr=False)
    fv: frozenset = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fty = self.fun.ty
        object.__setattr__(self, "ty", fty.cod if isinstance(fty, Arrow) else None)
        object.__setattr__(self, "fv", self.fun.fv | self.arg.fv)
        object.__setattr__(self, "_hash", hash(("app", self.fun, self.arg)))

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Fun:
    """Algebraic symbol applied to exactly its declared number of arguments.

    ``type`` is the declared output type; it is carried so that typing a
    term never needs the signature.
    """

    symbol: str
    args: tuple
    type: Type
    ty: Type = field(init=False, compare=False, repr=False)
    fv: frozenset = field(init=False, compare=False, repr=False)
    _hash: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        object.__setattr__(self, "ty", self.type)
        object.__setattr__(self, "fv", frozenset().union(*(a.fv for a in self.args)))
        object.__setattr__(self, "_hash", hash(("fun", self.symbol, self.args)))

    def __hash__(self):
        return self._hash


Term = Union[Var, Abs, App, Fun]


def app(head: Term, *args: Term) -> Term:
    """Left-nested application spine ``@(head, a1, ..., an)``."""
    result = head
    for a in args:
        result = App(result, a)
    return result


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Split a left-nested application into head and argument list."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, args


def type_of(t: Term) -> Type:
    if t.ty is None:
        raise TypeMismatch((), "arrow type", "ill-typed application")
    return t.ty


def free_vars(t: Term) -> frozenset:
    return t.fv


def all_names(t: Term) -> set[str]:
    """Every variable name occurring in ``t``, bound or free."""
    names: set[str] = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            names.add(u.name)
        elif isinstance(u, Abs):
            names.add(u.var.name)
            stack.append(u.body)
        elif isinstance(u, App):
            stack.extend((u.fun, u.arg))
        else:
            stack.extend(u.args)
    return names


def subterms(t: Term) -> Iterator[Term]:
    """All subterms, with bound variables left free (pre-order)."""
    yield t
    if isinstance(t, Abs):
        yield from subterms(t.body)
    elif isinstance(t, App):
        yield from subterms(t.fun)
        yield from subterms(t.arg)
    elif isinstance(t, Fun):
        for a in t.args:
            yield from subterms(a)


def size(t: Term) -> int:
    return sum(1 for _ in subterms(t))


def term_types(t: Term) -> Iterator[Type]:
    """Types of all subterms and binders of ``t``."""
    for u in subterms(t):
        if u.ty is not None:
            yield u.ty
        if isinstance(u, Abs):
            yield u.var.type


class TermClass(enum.Enum):
    ABSTRACTION = "abstraction"
    PREALGEBRAIC = "prealgebraic"
    NEUTRAL = "neutral"


def classify(t: Term) -> TermClass:
    if isinstance(t, Abs):
        return TermClass.ABSTRACTION
    if isinstance(t, Fun):
        return TermClass.PREALGEBRAIC
    return TermClass.NEUTRAL


# ---------------------------------------------------------------------------
# Signatures


@dataclass(frozen=True)
class FunDecl:
    name: str
    arg_types: tuple
    out_type: Type

    @property
    def arity(self) -> int:
        return len(self.arg_types)


@dataclass
class Signature:
    """Sort arities and function symbol declarations."""

    sorts: dict = field(default_factory=dict)
    funs: dict = field(default_factory=dict)

    def add_sort(self, name: str, arity: int = 0) -> Sort:
        if name in self.sorts:
            raise CPOError(f"sort {name} redeclared")
        self.sorts[name] = arity
        return Sort(name)

    def add_fun(self, name: str, arg_types: Iterable[Type], out_type: Type) -> FunDecl:
        if name in self.funs:
            raise CPOError(f"function symbol {name} redeclared")
        decl = FunDecl(name, tuple(arg_types), out_type)
        for ty in (*decl.arg_types, decl.out_type):
            self.check_type(ty)
        self.funs[name] = decl
        return decl

    def check_type(self, ty: Type) -> None:
        for sub in subtypes(ty):
            if isinstance(sub, Sort):
                if sub.name not in self.sorts:
                    raise UndeclaredSymbol(f"undeclared sort {sub.name}")
                if len(sub.args) != self.sorts[sub.name]:
                    raise ArityMismatch(
                        f"sort {sub.name} expects {self.sorts[sub.name]} arguments, got {len(sub.args)}"
                    )

    def __call__(self, name: str, *args: Term) -> Fun:
        """Build ``name(args)`` with arity and argument types checked."""
        decl = self.funs.get(name)
        if decl is None:
            raise UndeclaredSymbol(f"undeclared function symbol {name}")
        if len(args) != decl.arity:
            raise ArityMismatch(f"{name} expects {decl.arity} arguments, got {len(args)}")
        for i, (a, ty) in enumerate(zip(args, decl.arg_types)):
            if a.ty != ty:
                raise TypeMismatch((i + 1,), ty, a.ty)
        return Fun(name, args, decl.out_type)

    def types(self) -> set:
        out = set()
        for decl in self.funs.values():
            out.update(decl.arg_types)
            out.add(decl.out_type)
        return out


def typecheck(t: Term, env: Mapping[str, Type], sig: Signature) -> Type:
    """Check ``t`` against ``sig`` with free variables typed by ``env``.

    Returns the type of ``t``.  Bound variables extend the environment.
    """

    def go(u: Term, env: Mapping[str, Type], pos: tuple) -> Type:
        if isinstance(u, Var):
            if u.name not in env:
                raise UnboundVariable(f"unbound variable {u.name} at {pos}")
            if env[u.name] != u.type:
                raise TypeMismatch(pos, env[u.name], u.type)
            return u.type
        if isinstance(u, Abs):
            sig.check_type(u.var.type)
            inner = dict(env)
            inner[u.var.name] = u.var.type
            return Arrow(u.var.type, go(u.body, inner, pos + (1,)))
        if isinstance(u, App):
            fty = go(u.fun, env, pos + (1,))
            aty = go(u.arg, env, pos + (2,))
            if not isinstance(fty, Arrow):
                raise TypeMismatch(pos + (1,), "arrow type", fty)
            if fty.dom != aty:
                raise TypeMismatch(pos + (2,), fty.dom, aty)
            return fty.cod
        decl = sig.funs.get(u.symbol)
        if decl is None:
            raise UndeclaredSymbol(f"undeclared function symbol {u.symbol}")
        if len(u.args) != decl.arity:
            raise ArityMismatch(f"{u.symbol} expects {decl.arity} arguments, got {len(u.args)}")
        for i, (a, ty) in enumerate(zip(u.args, decl.arg_types)):
            found = go(a, env, pos + (i + 1,))
            if found != ty:
                raise TypeMismatch(pos + (i + 1,), ty, found)
        if u.type != decl.out_type:
            raise TypeMismatch(pos, decl.out_type, u.type)
        return decl.out_type

    return go(t, env, ())


# ---------------------------------------------------------------------------
# Fresh names and substitution

_SUFFIX = re.compile(r"_\d+$")


class FreshSupply:
    """Deterministic supply of variable names never seen before."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.counter = 0
        self.used: set[str] = set(avoid)

    def reserve(self, names: Iterable[str]) -> None:
        self.used.update(names)

    def reserve_term(self, t: Term) -> None:
        self.used.update(all_names(t))

    def fresh(self, base: str, ty: Type) -> Var:
        base = _SUFFIX.sub("", base) or "z"
        while True:
            self.counter += 1
            name = f"{base}_{self.counter}"
            if name not in self.used:
                self.used.add(name)
                return Var(name, ty)


def _subst(t: Term, sub: Mapping[Var, Term], supply: FreshSupply) -> Term:
    if not (t.fv & sub.keys()):
        return t
    if isinstance(t, Var):
        return sub[t]
    if isinstance(t, App):
        return App(_subst(t.fun, sub, supply), _subst(t.arg, sub, supply))
    if isinstance(t, Fun):
        return Fun(t.symbol, tuple(_subst(a, sub, supply) for a in t.args), t.type)
    x = t.var
    inner = {k: v for k, v in sub.items() if k != x and k in t.body.fv}
    if not inner:
        return t
    incoming = {y.name for v in inner.values() for y in v.fv}
    body = t.body
    if x.name in incoming:
        x2 = supply.fresh(x.name, x.type)
        body = _subst(body, {x: x2}, supply)
        x = x2
    return Abs(x, _subst(body, inner, supply))


def substitute(t: Term, x: Var, u: Term, supply: Optional[FreshSupply] = None,
               check: bool = True) -> Term:
    """Capture-avoiding ``t{x -> u}``.

    Bound variables of ``t`` that would capture free variables of ``u`` are
    renamed with names drawn from ``supply``.  With ``check`` the type of
    ``u`` must equal the type of ``x``.
    """
    if check and u.ty != x.type:
        raise TypeMismatch((), x.type, u.ty)
    if supply is None:
        supply = FreshSupply(all_names(t) | all_names(u))
    return _subst(t, {x: u}, supply)


def substitute_many(t: Term, sub: Mapping[Var, Term], supply: Optional[FreshSupply] = None) -> Term:
    if supply is None:
        names = all_names(t)
        for v in sub.values():
            names |= all_names(v)
        supply = FreshSupply(names)
    return _subst(t, dict(sub), supply)


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_key(t: Term):
    """Canonical hashable key: bound variables become binder depths."""
    cached = t.__dict__.get("_akey")
    if cached is not None:
        return cached
    key = _akey(t, {}, 0)
    object.__setattr__(t, "_akey", key)
    return key


def _akey(t: Term, bound: dict, depth: int):
    if isinstance(t, Var):
        if t in bound:
            return ("b", depth - bound[t] - 1)
        return ("v", t.name, t.type)
    if isinstance(t, Abs):
        inner = dict(bound)
        inner[t.var] = depth
        return ("l", t.var.type, _akey(t.body, inner, depth + 1))
    if isinstance(t, App):
        return ("@", _akey(t.fun, bound, depth), _akey(t.arg, bound, depth))
    return ("f", t.symbol, tuple(_akey(a, bound, depth) for a in t.args))


def alpha_eq(s: Term, t: Term) -> bool:
    if s is t:
        return True
    return alpha_key(s) == alpha_key(t)


def eta_view(t: Term) -> Optional[Term]:
    """``v`` when ``t`` is ``\\x. @(v, x)`` with ``x`` not free in ``v``."""
    if isinstance(t, Abs) and isinstance(t.body, App):
        body = t.body
        if body.arg == t.var and t.var not in body.fun.fv:
            return body.fun
    return None
