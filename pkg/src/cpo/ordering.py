"""The computability path ordering.

:class:`Context` decides ``s >_X t`` by trying the clauses for the head of
``s`` in order (variable, status, precedence, abstraction, subterm, and the
application/abstraction specific ones) with full backtracking.  Every success
is returned as a :class:`Derivation` tree whose nodes carry the clause label.

The extended ordering (``definition=2``) adds the accessible-subterm clause ``1f`` and lets the status
comparison of clause ``1b`` use the accessibility ordering as well.  Two
unsound variants exist only to reproduce known counterexamples:
``UNSOUND_STAT_X`` keeps ``X`` in the status comparison of ``1b`` and
``UNSOUND_APPABS_Z`` adds the fresh variable to ``X`` in clause ``2c``.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .accessibility import acc_subterms, acc_table, is_accessible
from .precedence import (AT, Comparison, LengthMismatch, Precedence, Status, lex_witness,
                         multiset_witness)
from .terms import (Abs, App, CPOError, Fun, FreshSupply, Signature, Term, Var, all_names,
                    alpha_eq, alpha_key, eta_view, spine, substitute)
from .typeorder import TypeOrder

EMPTY: frozenset = frozenset()

CASES = ("1a", "1b", "1c", "1d", "1e", "1f", "2a", "2b", "2c", "2d", "2e",
         "3a", "3b", "3c", "3d", "3e", "refl", "mul", "lex", "acc")


class Variant(enum.Enum):
    SOUND = "sound"
    UNSOUND_STAT_X = "unsound-stat"
    UNSOUND_APPABS_Z = "unsound-appabs"


class DepthLimitExceeded(CPOError):
    pass


class IllTyped(CPOError):
    pass


class FreeVariableEscape(CPOError):
    pass


class ReplayError(CPOError):
    def __init__(self, node: "Derivation", reason: str):
        self.node = node
        super().__init__(f"invalid {node.case} node: {reason}")


@dataclass(frozen=True)
class Goal:
    """A comparison to establish.

    ``rel`` is ``">"`` or ``">="`` between terms, ``"mul"``/``"lex"`` between
    argument tuples, or ``"acc"`` for the accessibility ordering, whose
    argument comparisons are made from ``lhs`` under ``X``.  For extension
    goals of the extended ordering, ``lhs``/``lhs_X`` feed the accessibility part.
    """

    rel: str
    s: object
    t: object
    X: frozenset = EMPTY
    typed: bool = False
    lhs: Optional[Term] = None
    lhs_X: Optional[frozenset] = None

    def key(self):
        def k(x):
            if x is None:
                return None
            if isinstance(x, tuple):
                return tuple(alpha_key(e) for e in x)
            return alpha_key(x)
        return (self.rel, self.typed, k(self.s), k(self.t), self.X, k(self.lhs), self.lhs_X)


@dataclass(frozen=True, eq=False)
class Derivation:
    goal: Goal
    case: str
    children: tuple = ()
    fresh: tuple = ()
    detail: object = None

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()


@dataclass
class Failure:
    goal: Goal
    children: list = field(default_factory=list)


class _Abort(Exception):
    pass


class Context:
    """Ingredients plus per-task state (memo table, fresh supply, depth)."""

    def __init__(self, signature: Signature, type_order: TypeOrder, precedence: Precedence,
                 status: Optional[Mapping[str, Status]] = None, definition: int = 2,
                 variant: Variant = Variant.SOUND, max_depth: int = 512,
                 avoid: Iterable[str] = ()):
        if definition not in (1, 2):
            raise ValueError("definition must be 1 or 2")
        if max_depth < 1:
            raise ValueError("depth limit must be at least 1")
        self.signature = signature
        self.types = type_order
        self.precedence = precedence
        self.status = dict(status or {})
        self.definition = definition
        self.variant = variant
        self.max_depth = max_depth
        self.memo: dict = {}
        self.supply = FreshSupply(avoid)
        self.depth = 0
        self.explaining = False
        self.failures: dict = {}
        self._frames: list = []
        self._budget = None
        self._acc = acc_table(signature, type_order) if definition == 2 else {}
        sys.setrecursionlimit(max(sys.getrecursionlimit(), 40 * max_depth + 1000))

    def derive(self, **changes) -> "Context":
        """A fresh context (empty memo) with some settings changed."""
        args = dict(signature=self.signature, type_order=self.types,
                    precedence=self.precedence, status=self.status,
                    definition=self.definition, variant=self.variant,
                    max_depth=self.max_depth, avoid=self.supply.used)
        args.update(changes)
        return Context(**args)

    def status_of(self, f: str) -> Status:
        return self.status.get(f, Status.MUL)

    @property
    def acc(self) -> dict:
        return self._acc

    # -- entry points ------------------------------------------------------

    def _enter(self, *terms):
        for t in terms:
            if t is None:
                continue
            if t.ty is None:
                raise IllTyped(f"ill-typed term {t!r}")
            self.supply.reserve_term(t)

    def gt(self, s: Term, t: Term, X: Iterable[Var] = EMPTY) -> Optional[Derivation]:
        X = frozenset(X)
        self._enter(s, t, *X)
        return self.prove(Goal(">", s, t, X))

    def gt_typed(self, s: Term, t: Term, X: Iterable[Var] = EMPTY) -> Optional[Derivation]:
        X = frozenset(X)
        self._enter(s, t, *X)
        return self.prove(Goal(">", s, t, X, typed=True))

    def acc_ord(self, s: Term, X: Iterable[Var], u: Term, t: Term) -> Optional[Derivation]:
        X = frozenset(X)
        self._enter(s, u, t, *X)
        return self.prove(Goal("acc", u, t, X, lhs=s))

    def orient(self, lhs: Term, rhs: Term) -> Optional[Derivation]:
        if not rhs.fv <= lhs.fv:
            missing = ", ".join(sorted(v.name for v in rhs.fv - lhs.fv))
            raise FreeVariableEscape(f"right-hand side variables {missing} do not occur on the left")
        return self.gt_typed(lhs, rhs)

    # -- search ------------------------------------------------------------

    def prove(self, goal: Goal) -> Optional[Derivation]:
        key = goal.key()
        if key in self.memo:
            result = self.memo[key]
            if result is None:
                self._note_failed(key)
            return result
        if self.depth >= self.max_depth:
            raise DepthLimitExceeded(f"comparison depth exceeded {self.max_depth}")
        if self._budget is not None:
            self._budget -= 1
            if self._budget < 0:
                raise _Abort()
        self.memo[key] = None
        if self.explaining:
            self._frames.append([])
        self.depth += 1
        try:
            result = self._dispatch(goal)
        finally:
            self.depth -= 1
            failed_children = self._frames.pop() if self.explaining else None
        self.memo[key] = result
        if result is None:
            if self.explaining:
                self.failures[key] = Failure(goal, failed_children)
            self._note_failed(key)
        return result

    def _note_failed(self, key):
        if self.explaining and self._frames:
            self._frames[-1].append(key)

    def _all(self, goals: list) -> Optional[list]:
        """Prove a conjunction; while explaining, keep going past failures."""
        out = []
        ok = True
        for g in goals:
            d = self.prove(g)
            if d is None:
                ok = False
                if not self.explaining:
                    return None
            out.append(d)
        return out if ok else None

    def _ge(self, s: Term, t: Term, X: frozenset, typed: bool) -> Optional[Derivation]:
        if alpha_eq(s, t):
            return Derivation(Goal(">=", s, t, X, typed), "refl")
        return self.prove(Goal(">", s, t, X, typed))

    def _dispatch(self, goal: Goal) -> Optional[Derivation]:
        if goal.rel == ">":
            s, t = goal.s, goal.t
            if goal.typed and not self.types.ge(s.ty, t.ty):
                return None
            if isinstance(s, Fun):
                return self._fun_left(goal)
            if isinstance(s, App):
                return self._app_left(goal)
            if isinstance(s, Abs):
                return self._abs_left(goal)
            return None
        if goal.rel in ("mul", "lex"):
            return self._extension(goal)
        if goal.rel == "acc":
            return self._acc_goal(goal)
        raise ValueError(f"unknown goal relation {goal.rel!r}")

    def _fresh(self, like: Var, ty=None) -> Var:
        return self.supply.fresh(like.name, like.type if ty is None else ty)

    def _subst(self, t: Term, x: Var, u: Term) -> Term:
        return substitute(t, x, u, self.supply, check=False)

    # clause group 1: s = f(ss)

    def _fun_left(self, goal: Goal) -> Optional[Derivation]:
        s, t, X = goal.s, goal.t, goal.X
        if isinstance(t, Var) and t in X:
            return Derivation(goal, "1a")
        if isinstance(t, Fun):
            cmp = self.precedence.compare(s.symbol, t.symbol)
            if cmp is Comparison.EQUIVALENT:
                d = self._case_1b(goal)
                if d:
                    return d
            elif cmp is Comparison.GREATER:
                kids = self._all([Goal(">", s, a, X) for a in t.args])
                if kids is not None:
                    return Derivation(goal, "1c", tuple(kids))
        elif isinstance(t, App):
            kids = self._all([Goal(">", s, t.fun, X), Goal(">", s, t.arg, X)])
            if kids is not None:
                return Derivation(goal, "1c", tuple(kids))
        elif isinstance(t, Abs):
            z = self._fresh(t.var)
            d = self.prove(Goal(">", s, self._subst(t.body, t.var, z), X | {z}))
            if d:
                return Derivation(goal, "1d", (d,), (z,))
        for u in s.args:
            d = self._ge(u, t, EMPTY, True)
            if d:
                return Derivation(goal, "1e", (d,))
        if self.definition == 2:
            seen = set()
            for u in self._accessible_in_args(s):
                k = alpha_key(u)
                if k in seen:
                    continue
                seen.add(k)
                d = self._ge(u, t, EMPTY, True)
                if d:
                    return Derivation(goal, "1f", (d,))
        return None

    def _accessible_in_args(self, s: Fun) -> list:
        out = []
        for arg in s.args:
            out.extend(acc_subterms(self._acc, arg))
        return out

    def _case_1b(self, goal: Goal) -> Optional[Derivation]:
        s, t, X = goal.s, goal.t, goal.X
        ext_X = X if self.variant is Variant.UNSOUND_STAT_X else EMPTY
        status = self.status_of(s.symbol)
        rel = "lex" if status is Status.LEX else "mul"
        if self.definition == 2:
            ext = Goal(rel, s.args, t.args, ext_X, True, lhs=s, lhs_X=X)
        else:
            ext = Goal(rel, s.args, t.args, ext_X, True)
        kids = self._all([ext] + [Goal(">", s, a, X) for a in t.args])
        if kids is None:
            return None
        return Derivation(goal, "1b", tuple(kids))

    # clause group 2: s = @(u, v)

    def _app_left(self, goal: Goal) -> Optional[Derivation]:
        s, t, X = goal.s, goal.t, goal.X
        u, v = s.fun, s.arg
        if isinstance(t, Var) and t in X:
            return Derivation(goal, "2a")
        if isinstance(t, App):
            d = self.prove(Goal("mul", (u, v), (t.fun, t.arg), EMPTY, True))
            if d:
                return Derivation(goal, "2b", (d,))
        if isinstance(t, Abs):
            z = self._fresh(t.var)
            inner_X = X | {z} if self.variant is Variant.UNSOUND_APPABS_Z else X
            d = self.prove(Goal(">", s, self._subst(t.body, t.var, z), inner_X))
            if d:
                return Derivation(goal, "2c", (d,), (z,))
        for side in (u, v):
            d = self._ge(side, t, X, True)
            if d:
                return Derivation(goal, "2d", (d,))
        if isinstance(u, Abs):
            d = self._ge(self._subst(u.body, u.var, v), t, X, False)
            if d:
                return Derivation(goal, "2e", (d,))
        return None

    # clause group 3: s = \x. u

    def _abs_left(self, goal: Goal) -> Optional[Derivation]:
        s, t, X = goal.s, goal.t, goal.X
        x, u = s.var, s.body
        if isinstance(t, Var) and t in X:
            return Derivation(goal, "3a")
        if isinstance(t, Abs):
            y, w = t.var, t.body
            if self.types.eq(x.type, y.type):
                z = self._fresh(y)
                d = self.prove(Goal(">", self._subst(u, x, z), self._subst(w, y, z), X))
                if d:
                    return Derivation(goal, "3b", (d,), (z,))
            else:
                z = self._fresh(y)
                d = self.prove(Goal(">", s, self._subst(w, y, z), X))
                if d:
                    return Derivation(goal, "3c", (d,), (z,))
        z = self._fresh(x)
        d = self._ge(self._subst(u, x, z), t, X, True)
        if d:
            return Derivation(goal, "3d", (d,), (z,))
        v = eta_view(s)
        if v is not None:
            d = self._ge(v, t, X, False)
            if d:
                return Derivation(goal, "3e", (d,))
        return None

    # extensions and the accessibility ordering

    def _element(self, goal: Goal):
        """Element comparison for status goals (union with acc in the extended ordering)."""
        def rel(a, b):
            d = self.prove(Goal(">", a, b, goal.X, True))
            if d is None and goal.lhs is not None:
                d = self.prove(Goal("acc", a, b, goal.lhs_X, lhs=goal.lhs))
            return d
        return rel

    def _extension(self, goal: Goal) -> Optional[Derivation]:
        rel = self._element(goal)
        if goal.rel == "mul":
            w = multiset_witness(rel, goal.s, goal.t, key=alpha_key)
            if w is None:
                return None
            order = sorted(w["replaced"])
            kids = tuple(w["replaced"][j][1] for j in order)
            detail = {"kept": tuple(w["kept"]),
                      "replaced": tuple((w["replaced"][j][0], j) for j in order)}
            return Derivation(goal, "mul", kids, detail=detail)
        try:
            w = lex_witness(rel, alpha_eq, goal.s, goal.t)
        except LengthMismatch:
            return None
        if w is None:
            return None
        return Derivation(goal, "lex", (w[1],), detail=w[0])

    def _acc_goal(self, goal: Goal) -> Optional[Derivation]:
        u, t, s, X = goal.s, goal.t, goal.lhs, goal.X
        if not self.types.ge(u.ty, t.ty):
            return None
        head, args = spine(t)
        if not args or not is_accessible(self._acc, u, head):
            return None
        kids = self._all([Goal(">", s, w, X) for w in args])
        if kids is None:
            return None
        return Derivation(goal, "acc", tuple(kids))

    # -- failure explanation ----------------------------------------------

    def explain(self, goal: Goal, budget: int = 200_000) -> tuple[list, dict]:
        """Re-run a failed goal exploring every conjunct.

        Returns ``(frontier, failures)``: the failed leaf goals and the full
        failure graph keyed by goal key.
        """
        ctx = self.derive()
        ctx.explaining = True
        ctx._budget = budget
        try:
            ctx.prove(goal)
        except (_Abort, DepthLimitExceeded):
            pass
        return ctx._frontier(goal.key()), ctx.failures

    def _frontier(self, root) -> list:
        out: list = []
        seen: set = set()
        stack = [root]
        while stack:
            key = stack.pop()
            if key in seen or key not in self.failures:
                continue
            seen.add(key)
            node = self.failures[key]
            g = node.goal
            if self._trivial(g):
                continue
            if self._leaf(g):
                out.append(g)
                continue
            kids = [c for c in node.children
                    if c in self.failures and not self._trivial(self.failures[c].goal)]
            if not kids:
                # an accessibility attempt whose side conditions failed is no route at all
                if g.rel != "acc":
                    out.append(g)
            else:
                stack.extend(reversed(kids))
        return out

    @staticmethod
    def _trivial(g: Goal) -> bool:
        # a variable on the left, or comparing two empty argument tuples
        if g.rel in ("mul", "lex"):
            return not g.s and not g.t
        return g.rel == ">" and isinstance(g.s, Var)

    def _leaf(self, g: Goal) -> bool:
        if g.rel != ">":
            return False
        return g.typed and not self.types.ge(g.s.ty, g.t.ty)


def failure_reason(ctx: Context, g: Goal) -> str:
    if g.rel == ">" and g.typed and not ctx.types.ge(g.s.ty, g.t.ty):
        return "type"
    if g.rel == ">" and isinstance(g.t, Var) and g.t not in g.X:
        return "lost-variable"
    return "no-clause"


# ---------------------------------------------------------------------------
# Functional interface


def cpo(ctx: Context, s: Term, t: Term, X: Iterable[Var] = EMPTY) -> Optional[Derivation]:
    return ctx.gt(s, t, X)


def cpo_typed(ctx: Context, s: Term, t: Term, X: Iterable[Var] = EMPTY) -> Optional[Derivation]:
    return ctx.gt_typed(s, t, X)


def cpo2(ctx: Context, s: Term, t: Term, X: Iterable[Var] = EMPTY) -> Optional[Derivation]:
    if ctx.definition != 2:
        ctx = ctx.derive(definition=2)
    return ctx.gt(s, t, X)


def acc_ord(ctx: Context, s: Term, X: Iterable[Var], u: Term, t: Term) -> Optional[Derivation]:
    if ctx.definition != 2:
        ctx = ctx.derive(definition=2)
    return ctx.acc_ord(s, X, u, t)


def orient_rule(ctx: Context, lhs: Term, rhs: Term) -> Optional[Derivation]:
    return ctx.orient(lhs, rhs)


# ---------------------------------------------------------------------------
# Replay: independent node-by-node validation of a derivation


def validate(ctx: Context, d: Derivation) -> None:
    """Raise :class:`ReplayError` unless every node of ``d`` is justified."""
    seen: set = set()
    stack = [d]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        _check_node(ctx, node)
        stack.extend(node.children)


def replay(ctx: Context, d: Derivation) -> bool:
    try:
        validate(ctx, d)
    except ReplayError:
        return False
    return True


def _same(a: Term, b: Term) -> bool:
    return alpha_eq(a, b)


def _expect(node, cond, reason):
    if not cond:
        raise ReplayError(node, reason)


def _proves(child: Derivation, s, t, X, typed: bool, strict: bool = True) -> bool:
    g = child.goal
    if child.case == "refl":
        return (not strict) and _same(g.s, s) and _same(g.t, t)
    return (g.rel == ">" and g.typed == typed and g.X == frozenset(X)
            and _same(g.s, s) and _same(g.t, t))


def _check_node(ctx: Context, node: Derivation) -> None:
    g, case, kids = node.goal, node.case, node.children
    _expect(node, case in CASES, "unknown case label")
    if case == "refl":
        _expect(node, g.rel == ">=" and _same(g.s, g.t), "terms are not alpha-equivalent")
        return
    if case in ("mul", "lex"):
        _check_extension(ctx, node)
        return
    if case == "acc":
        u, t = g.s, g.t
        _expect(node, ctx.types.ge(u.ty, t.ty), "type comparison fails")
        head, args = spine(t)
        _expect(node, bool(args), "right side is not an application")
        _expect(node, is_accessible(ctx.acc, u, head), "head is not accessible")
        _expect(node, len(kids) == len(args), "wrong number of premises")
        for k, w in zip(kids, args):
            _expect(node, _proves(k, g.lhs, w, g.X, False), "argument premise mismatch")
        return
    _expect(node, g.rel == ">", "case needs a strict goal")
    s, t, X = g.s, g.t, g.X
    if g.typed:
        _expect(node, ctx.types.ge(s.ty, t.ty), "type comparison fails")
    group = case[0]
    _expect(node, (group, type(s)) in (("1", Fun), ("2", App), ("3", Abs)),
            "clause does not match the head of the left side")
    if case in ("1a", "2a", "3a"):
        _expect(node, isinstance(t, Var) and t in X and not kids, "variable not in X")
    elif case == "1b":
        _expect(node, isinstance(t, Fun) and ctx.precedence.equiv(s.symbol, t.symbol),
                "heads are not equivalent")
        ext = kids[0]
        ext_X = X if ctx.variant is Variant.UNSOUND_STAT_X else EMPTY
        want = "lex" if ctx.status_of(s.symbol) is Status.LEX else "mul"
        eg = ext.goal
        _expect(node, ext.case == want and eg.rel == want and eg.X == ext_X,
                "status premise mismatch")
        _expect(node, len(eg.s) == len(s.args) and all(map(_same, eg.s, s.args))
                and len(eg.t) == len(t.args) and all(map(_same, eg.t, t.args)),
                "status premise compares the wrong arguments")
        if ctx.definition == 2:
            _expect(node, eg.lhs is not None and _same(eg.lhs, s) and eg.lhs_X == X,
                    "accessibility context mismatch")
        else:
            _expect(node, eg.lhs is None, "accessibility used by the base ordering")
        _expect(node, len(kids) == 1 + len(t.args), "wrong number of premises")
        for k, a in zip(kids[1:], t.args):
            _expect(node, _proves(k, s, a, X, False), "argument premise mismatch")
    elif case == "1c":
        if isinstance(t, Fun):
            _expect(node, ctx.precedence.gt(s.symbol, t.symbol), "precedence fails")
            args = t.args
        else:
            _expect(node, isinstance(t, App) and ctx.precedence.gt(s.symbol, AT),
                    "right side is not smaller in the precedence")
            args = (t.fun, t.arg)
        _expect(node, len(kids) == len(args), "wrong number of premises")
        for k, a in zip(kids, args):
            _expect(node, _proves(k, s, a, X, False), "argument premise mismatch")
    elif case in ("1d", "2c", "3c"):
        _expect(node, isinstance(t, Abs) and len(node.fresh) == 1 and len(kids) == 1,
                "malformed abstraction step")
        z = node.fresh[0]
        _expect(node, z.type == t.var.type and z not in X and z.name not in
                {v.name for v in s.fv | t.fv}, "variable is not fresh")
        if case == "3c":
            _expect(node, not ctx.types.eq(s.var.type, t.var.type), "binder types are equivalent")
        widen = case == "1d" or (case == "2c" and ctx.variant is Variant.UNSOUND_APPABS_Z)
        inner_X = X | {z} if widen else X
        w = substitute(t.body, t.var, z, check=False)
        _expect(node, _proves(kids[0], s, w, inner_X, False), "premise mismatch")
    elif case == "1e":
        _expect(node, len(kids) == 1 and any(
            _proves(kids[0], u, t, EMPTY, True, strict=False) for u in s.args),
            "no argument dominates")
    elif case == "1f":
        _expect(node, ctx.definition == 2, "accessible subterm case in the base ordering")
        cands = [u for a in s.args for u in acc_subterms(ctx.acc, a)]
        _expect(node, len(kids) == 1 and any(
            _proves(kids[0], u, t, EMPTY, True, strict=False) for u in cands),
            "no accessible subterm dominates")
    elif case == "2b":
        _expect(node, isinstance(t, App) and len(kids) == 1, "malformed application step")
        eg = kids[0].goal
        _expect(node, kids[0].case == "mul" and eg.X == EMPTY and eg.lhs is None
                and all(map(_same, eg.s, (s.fun, s.arg)))
                and all(map(_same, eg.t, (t.fun, t.arg))), "multiset premise mismatch")
    elif case == "2d":
        _expect(node, len(kids) == 1 and any(
            _proves(kids[0], side, t, X, True, strict=False) for side in (s.fun, s.arg)),
            "no side dominates")
    elif case == "2e":
        _expect(node, isinstance(s.fun, Abs) and len(kids) == 1, "not a beta-redex")
        r = substitute(s.fun.body, s.fun.var, s.arg, check=False)
        _expect(node, _proves(kids[0], r, t, X, False, strict=False), "premise mismatch")
    elif case == "3b":
        _expect(node, isinstance(t, Abs) and len(node.fresh) == 1 and len(kids) == 1,
                "malformed abstraction step")
        _expect(node, ctx.types.eq(s.var.type, t.var.type), "binder types not equivalent")
        z = node.fresh[0]
        _expect(node, z not in X and z.name not in {v.name for v in s.fv | t.fv},
                "variable is not fresh")
        left = substitute(s.body, s.var, z, check=False)
        right = substitute(t.body, t.var, z, check=False)
        _expect(node, _proves(kids[0], left, right, X, False), "premise mismatch")
    elif case == "3d":
        _expect(node, len(node.fresh) == 1 and len(kids) == 1, "malformed step")
        z = node.fresh[0]
        _expect(node, z.type == s.var.type and z not in X
                and z.name not in {v.name for v in s.fv | t.fv}, "variable is not fresh")
        left = substitute(s.body, s.var, z, check=False)
        _expect(node, _proves(kids[0], left, t, X, True, strict=False), "premise mismatch")
    elif case == "3e":
        v = eta_view(s)
        _expect(node, v is not None and len(kids) == 1, "not an eta-redex")
        _expect(node, _proves(kids[0], v, t, X, False, strict=False), "premise mismatch")
    else:
        raise ReplayError(node, "unexpected case label")


def _check_extension(ctx: Context, node: Derivation) -> None:
    g = node.goal

    def element_ok(k: Derivation, a, b) -> bool:
        if _proves(k, a, b, g.X, True):
            return True
        kg = k.goal
        return (g.lhs is not None and k.case == "acc" and kg.rel == "acc"
                and _same(kg.s, a) and _same(kg.t, b) and _same(kg.lhs, g.lhs)
                and kg.X == g.lhs_X)

    if node.case == "lex":
        i = node.detail
        _expect(node, g.rel == "lex" and len(g.s) == len(g.t) and 0 <= i < len(g.s),
                "malformed lexicographic step")
        _expect(node, all(_same(a, b) for a, b in zip(g.s[:i], g.t[:i])),
                "prefix is not equal")
        _expect(node, len(node.children) == 1 and element_ok(node.children[0], g.s[i], g.t[i]),
                "decisive position not justified")
        return
    _expect(node, g.rel == "mul", "malformed multiset step")
    kept = node.detail["kept"]
    replaced = node.detail["replaced"]
    used_m = [i for i, _ in kept]
    covered = [j for _, j in kept] + [j for _, j in replaced]
    _expect(node, len(set(used_m)) == len(used_m), "left element kept twice")
    _expect(node, sorted(covered) == list(range(len(g.t))), "right side not covered exactly")
    _expect(node, all(_same(g.s[i], g.t[j]) for i, j in kept), "kept elements differ")
    removed = set(range(len(g.s))) - set(used_m)
    _expect(node, bool(removed), "nothing was removed")
    _expect(node, len(node.children) == len(replaced), "wrong number of premises")
    for k, (i, j) in zip(node.children, replaced):
        _expect(node, i in removed, "dominating element was kept")
        _expect(node, element_ok(k, g.s[i], g.t[j]), "replacement not dominated")
