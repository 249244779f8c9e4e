"""Rendering derivations.

``paper`` style is the numbered trace: every goal in pre-order with its
clause, one line each, shared goals referring back to their first number.  ``compact`` style is line-oriented and
complete enough to be read back with :func:`parse_compact` and replayed.
"""

from __future__ import annotations

from typing import Optional

from .engine import RewriteSystem
from .ordering import Derivation, Goal
from .syntax import ParseError, Parser, parse_term, print_term, print_type
from .terms import App, Var

CASE_TEXT = {
    "refl": "by reflexivity",
    "mul": "by the multiset extension",
    "lex": "by the lexicographic extension",
    "acc": "by the accessibility ordering",
}


def case_text(case: str) -> str:
    if case in CASE_TEXT:
        return CASE_TEXT[case]
    return f"by Case {case[0]}({case[1]})"


def _xs(X) -> str:
    return ", ".join(sorted(v.name for v in X))


def format_goal(g: Goal) -> str:
    sub = f"_{{{_xs(g.X)}}}" if g.X else ""
    if g.rel in (">", ">="):
        op = g.rel + ("typed" if g.typed else "") + sub
        s, t = print_term(g.s), print_term(g.t)
        if g.typed:
            return f"{s} : {print_type(g.s.ty)} {op} {t} : {print_type(g.t.ty)}"
        return f"{s} {op} {t}"
    if g.rel in ("mul", "lex"):
        left = ", ".join(map(print_term, g.s))
        right = ", ".join(map(print_term, g.t))
        open_, close = ("{", "}") if g.rel == "mul" else ("(", ")")
        rel = f">typed{sub}"
        if g.lhs is not None:
            acc_sub = f"_{{{_xs(g.lhs_X)}}}" if g.lhs_X else ""
            rel = f"{rel} ∪ >acc{acc_sub}"
        rel = f"({rel})"
        return f"{open_}{left}{close} {rel}_{g.rel} {open_}{right}{close}"
    if g.rel == "acc":
        return f"{print_term(g.s)} >acc{sub} {print_term(g.t)}"
    return repr(g)


def print_derivation(d: Derivation, style: str = "paper") -> str:
    if style == "paper":
        return _numbered(d)
    if style == "compact":
        return _compact(d)
    raise ValueError(f"unknown trace style {style!r}")


def _numbered(d: Derivation) -> str:
    lines = []
    numbers: dict = {}

    def walk(node: Derivation, depth: int):
        indent = "  " * depth
        if id(node) in numbers:
            lines.append(f"{indent}{len(lines) + 1}. {format_goal(node.goal)}, "
                         f"already solved as goal {numbers[id(node)]}")
            return
        numbers[id(node)] = len(lines) + 1
        extra = ""
        if node.fresh:
            extra = " with fresh " + ", ".join(
                f"{z.name}:{print_type(z.type)}" for z in node.fresh)
        lines.append(f"{indent}{len(lines) + 1}. {format_goal(node.goal)} "
                     f"{case_text(node.case)}{extra}")
        for c in node.children:
            walk(c, depth + 1)

    walk(d, 0)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# compact format

_REL_CODE = {(">", False): ">", (">", True): ">T", (">=", False): ">=", (">=", True): ">=T"}
_CODE_REL = {v: k for k, v in _REL_CODE.items()}


def _fresh_vars(d: Derivation) -> list:
    out: dict = {}
    for node in d.nodes():
        for z in node.fresh:
            out.setdefault(z.name, z)
    return list(out.values())


def _side(x) -> str:
    if isinstance(x, tuple):
        return " ; ".join(map(print_term, x))
    return print_term(x)


def _detail(node: Derivation) -> str:
    if node.case == "mul":
        kept = ",".join(f"{i}:{j}" for i, j in node.detail["kept"])
        rep = ",".join(f"{i}:{j}" for i, j in node.detail["replaced"])
        return f"k={kept};r={rep}"
    if node.case == "lex":
        return f"i={node.detail}"
    return "-"


def _compact(d: Derivation) -> str:
    lines = [f"fresh {z.name} : {print_type(z.type)}" for z in _fresh_vars(d)]

    def walk(node: Derivation, depth: int):
        g = node.goal
        code = _REL_CODE.get((g.rel, g.typed), g.rel)
        fields = [node.case, code, _xs(g.X) or "-",
                  ",".join(z.name for z in node.fresh) or "-",
                  _detail(node), _side(g.s), _side(g.t)]
        if g.lhs is not None:
            fields += [print_term(g.lhs), _xs(g.lhs_X or ()) or "-"]
        lines.append("  " * depth + " | ".join(fields))
        for c in node.children:
            walk(c, depth + 1)

    walk(d, 0)
    return "\n".join(lines) + "\n"


def _parse_type(text: str, system: RewriteSystem):
    p = Parser(text)
    p.sig = system.signature
    p.system = system
    ty = p.type_()
    if p.tok.kind != "eof":
        raise p.error("trailing input after type")
    return ty


def parse_compact(text: str, system: RewriteSystem) -> Derivation:
    """Read back the output of ``print_derivation(d, "compact")``."""
    fresh: dict = {}
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        if raw.startswith("fresh "):
            name, _, ty = raw[len("fresh "):].partition(" : ")
            fresh[name.strip()] = Var(name.strip(), _parse_type(ty, system))
            continue
        depth = (len(raw) - len(raw.lstrip(" "))) // 2
        rows.append((depth, raw.strip().split(" | "), lineno))

    def var(name: str) -> Var:
        v = fresh.get(name) or system.variables.get(name)
        if v is None:
            raise ParseError(f"unknown variable {name} in compact trace", 0, 0)
        return v

    def xs(field: str) -> frozenset:
        if field == "-":
            return frozenset()
        return frozenset(var(n.strip()) for n in field.split(",") if n.strip())

    def side(field: str, tupled: bool):
        if tupled:
            if not field.strip():
                return ()
            return tuple(parse_term(p, system, fresh) for p in field.split(" ; "))
        return parse_term(field, system, fresh)

    def detail(case: str, field: str):
        if case == "mul":
            k, r = field[2:].split(";r=")
            pairs = lambda f: tuple(tuple(map(int, p.split(":"))) for p in f.split(",") if p)
            return {"kept": pairs(k), "replaced": pairs(r)}
        if case == "lex":
            return int(field[2:])
        return None

    def build(pos: int, depth: int) -> tuple[Derivation, int]:
        d, fields, lineno = rows[pos]
        if d != depth:
            raise ParseError("bad indentation in compact trace", lineno, 1)
        case, code, X, fr, det, s, t, *rest = fields
        if code in _CODE_REL:
            rel, typed = _CODE_REL[code]
        else:
            rel, typed = code, code in ("mul", "lex")
        tupled = rel in ("mul", "lex")
        lhs = parse_term(rest[0], system, fresh) if rest else None
        lhs_X: Optional[frozenset] = xs(rest[1]) if rest and rel != "acc" else None
        goal = Goal(rel, side(s, tupled), side(t, tupled), xs(X), typed, lhs, lhs_X)
        children = []
        pos += 1
        while pos < len(rows) and rows[pos][0] > depth:
            child, pos = build(pos, depth + 1)
            children.append(child)
        fresh_vars = tuple(var(n) for n in fr.split(",") if n and fr != "-")
        return Derivation(goal, case, tuple(children), fresh_vars, detail(case, det)), pos

    root, end = build(0, 0)
    if end != len(rows):
        raise ParseError("trailing lines in compact trace", rows[end][2], 1)
    return root


# ---------------------------------------------------------------------------
# case sequences


def case_sequence(d: Derivation, skip=("refl",), collapse_spines: bool = True) -> list:
    """Pre-order clause labels.

    With ``collapse_spines`` a ``1c`` step whose target is the function part
    of its parent's ``1c`` application target is merged into the parent, so
    ``@(W, F, t)`` decomposes in one step as when applications are n-ary.
    """
    out = []

    def walk(node: Derivation, parent: Optional[Derivation]):
        merged = (collapse_spines and parent is not None and node.case == "1c"
                  and parent.case == "1c" and isinstance(parent.goal.t, App)
                  and node.goal.t is parent.goal.t.fun)
        if node.case not in skip and not merged:
            out.append(node.case)
        for c in node.children:
            walk(c, node)

    walk(d, None)
    return out
