"""Quasi-orderings on simple types.

A :class:`TypeOrder` is the reflexive-transitive closure of user-declared
ground pairs ``a >= b`` together with ``s -> t >= t`` for every arrow in a
finite universe of types, closed so that arrows with equivalent components
are equivalent.  Construction validates the four type-ordering
axioms over that universe and reports a concrete witness on failure.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .terms import Arrow, CPOError, Sort, Type, is_data_type, subtypes

WELL_FOUNDEDNESS = "well-foundedness"
RIGHT_ARROW_SUBTERM = "right-arrow-subterm"
ARROW_PRESERVATION = "arrow-preservation"
ARROW_DECREASINGNESS = "arrow-decreasingness"
AXIOMS = (WELL_FOUNDEDNESS, RIGHT_ARROW_SUBTERM, ARROW_PRESERVATION, ARROW_DECREASINGNESS)

AXIOM_HELP = {
    WELL_FOUNDEDNESS: "the strict order together with 'a -> b is above a' admits no cycle",
    RIGHT_ARROW_SUBTERM: "a -> b is strictly above b",
    ARROW_PRESERVATION: "a -> b is equivalent to c iff c = a' -> b' with a' ~ a and b' ~ b",
    ARROW_DECREASINGNESS: (
        "a -> b strictly above c implies b >= c, or c = a' -> b' with a' ~ a and b > b'"
    ),
}
# An older axiom set replaced right-arrow-subterm by "arrow monotonicity"; it is
# known to be inconsistent and is deliberately not offered here.

DEFAULT_DEPTH = 2
DEFAULT_MAX_UNIVERSE = 50_000


class AxiomViolation(CPOError):
    def __init__(self, axiom: str, witness, report: "AxiomReport | None" = None):
        self.axiom = axiom
        self.witness = witness
        self.report = report
        super().__init__(f"type ordering violates {axiom}: {format_witness(witness)}")


class UniverseOverflow(CPOError):
    pass


class OutsideUniverse(CPOError):
    pass


def format_witness(witness) -> str:
    if isinstance(witness, tuple) and witness and witness[0] == "cycle":
        return "; ".join(f"{a} {rel} {b}" for a, rel, b in witness[1])
    if isinstance(witness, tuple):
        return ", ".join(map(str, witness))
    return str(witness)


@dataclass
class AxiomReport:
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def first_failure(self) -> Optional[str]:
        for ax in AXIOMS:
            if not self.verdicts.get(ax, True):
                return ax
        return None


def build_universe(problem_types: Iterable[Type], depth: int = DEFAULT_DEPTH,
                   max_size: int = DEFAULT_MAX_UNIVERSE) -> frozenset:
    """Problem types with their subtypes, plus every type over the problem's
    nullary sorts whose arrow nesting is at most ``depth``."""
    base: set = set()
    for ty in problem_types:
        base.update(subtypes(ty))
    sorts = sorted({t for t in base if isinstance(t, Sort) and not t.args}, key=str)
    layer = list(sorts)
    for _ in range(depth):
        projected = len(sorts) + len(layer) ** 2
        if projected > max_size:
            raise UniverseOverflow(
                f"type universe of depth {depth} would hold {projected} types (limit {max_size})"
            )
        layer = sorts + [Arrow(a, b) for a in layer for b in layer]
    universe = base | set(layer)
    if len(universe) > max_size:
        raise UniverseOverflow(f"type universe holds {len(universe)} types (limit {max_size})")
    return frozenset(universe)


def _sccs(nodes, succ) -> dict:
    """Tarjan's algorithm, iterative.  Returns node -> component id."""
    index: dict = {}
    low: dict = {}
    comp: dict = {}
    on_stack: set = set()
    stack: list = []
    counter = 0
    ncomp = 0
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(succ(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(succ(nxt))))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp[w] = ncomp
                    if w == node:
                        break
                ncomp += 1
    return comp


class TypeOrder:
    """Validated quasi-ordering on a bounded universe of types."""

    def __init__(self, declared: Iterable[tuple], universe: frozenset):
        self.declared = tuple(declared)
        self.universe = universe
        for a, b in self.declared:
            if a not in universe or b not in universe:
                raise OutsideUniverse(f"declared pair {a} >= {b} lies outside the universe")
        self._edges: dict = {t: [] for t in universe}
        for a, b in self.declared:
            self._edges[a].append(b)
        for t in universe:
            if isinstance(t, Arrow):
                self._edges[t].append(t.cod)
        self._ge = {t: self._reach(t) for t in universe}
        self._congruence()
        self.report = self._check()

    def _congruence(self):
        # Arrow preservation is an equivalence: a ~ a' and b ~ b' force
        # a -> b ~ a' -> b'.  Add those edges until nothing changes.
        arrows = sorted((t for t in self.universe if isinstance(t, Arrow)), key=str)
        while True:
            classes = {t: frozenset(b for b in self._ge[t] if t in self._ge[b])
                       for t in self.universe}
            added = False
            for t in arrows:
                if len(classes[t.dom]) == 1 and len(classes[t.cod]) == 1:
                    continue
                for d in classes[t.dom]:
                    for c in classes[t.cod]:
                        other = Arrow(d, c)
                        if other in self._ge and other not in self._ge[t]:
                            self._edges[t].append(other)
                            self._edges[other].append(t)
                            added = True
            if not added:
                return
            self._ge = {t: self._reach(t) for t in self.universe}

    def _reach(self, start) -> frozenset:
        seen = {start}
        todo = [start]
        while todo:
            for nxt in self._edges[todo.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    todo.append(nxt)
        return frozenset(seen)

    # -- queries -----------------------------------------------------------

    def _need(self, *types):
        for t in types:
            if t not in self._ge:
                raise OutsideUniverse(f"type {t} is outside the type universe")

    def ge(self, a: Type, b: Type) -> bool:
        if a == b:
            self._need(a)
            return True
        self._need(a, b)
        return b in self._ge[a]

    def gt(self, a: Type, b: Type) -> bool:
        return self.ge(a, b) and a not in self._ge[b]

    def eq(self, a: Type, b: Type) -> bool:
        return self.ge(a, b) and a in self._ge[b]

    def above(self, a: Type) -> frozenset:
        """Every ``b`` with ``a >= b``."""
        self._need(a)
        return self._ge[a]

    def cls(self, a: Type) -> frozenset:
        """Equivalence class of ``a``."""
        return frozenset(b for b in self.above(a) if a in self._ge[b])

    def __contains__(self, ty) -> bool:
        return ty in self._ge

    # -- validation --------------------------------------------------------

    def _check(self) -> AxiomReport:
        report = AxiomReport()
        for ax, witness in ((WELL_FOUNDEDNESS, self._well_founded()),
                            (RIGHT_ARROW_SUBTERM, self._right_subterm()),
                            (ARROW_PRESERVATION, self._preservation()),
                            (ARROW_DECREASINGNESS, self._decreasing())):
            report.verdicts[ax] = witness is None
            if witness is not None:
                report.witnesses[ax] = witness
        return report

    def _well_founded(self):
        # Declared pairs are non-strict; the right and left arrow components
        # must be strict, so any cycle through one of them is fatal.
        labelled: dict = {t: [] for t in self.universe}
        for a, b in self.declared:
            labelled[a].append((b, ">="))
        for t in self.universe:
            if isinstance(t, Arrow):
                labelled[t].append((t.cod, ">"))
                labelled[t].append((t.dom, "|>"))
        order = sorted(self.universe, key=str)
        comp = _sccs(order, lambda n: [b for b, _ in labelled[n]])
        for a in order:
            for b, rel in labelled[a]:
                if rel != ">=" and comp[a] == comp[b]:
                    path = self._path(labelled, comp, b, a)
                    return ("cycle", [(a, rel, b)] + path)
        return None

    @staticmethod
    def _path(labelled, comp, src, dst) -> list:
        prev = {src: None}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            if node == dst:
                break
            for nxt, rel in labelled[node]:
                if comp[nxt] == comp[src] and nxt not in prev:
                    prev[nxt] = (node, rel)
                    queue.append(nxt)
        steps = []
        node = dst
        while prev[node] is not None:
            parent, rel = prev[node]
            steps.append((parent, rel, node))
            node = parent
        return steps[::-1]

    def _arrows(self):
        return sorted((t for t in self.universe if isinstance(t, Arrow)), key=str)

    def _right_subterm(self):
        for t in self._arrows():
            if not self.gt(t, t.cod):
                return (t, t.cod)
        return None

    def _preservation(self):
        for t in self._arrows():
            for other in sorted(self.cls(t), key=str):
                if not (isinstance(other, Arrow) and self.eq(other.dom, t.dom)
                        and self.eq(t.cod, other.cod)):
                    return (t, other)
            for d in self.cls(t.dom):
                for c in self.cls(t.cod):
                    cand = Arrow(d, c)
                    if cand in self._ge and not self.eq(t, cand):
                        return (t, cand)
        return None

    def _decreasing(self):
        for t in self._arrows():
            for other in sorted(self._ge[t], key=str):
                if not self.gt(t, other):
                    continue
                if self.ge(t.cod, other):
                    continue
                if (isinstance(other, Arrow) and self.eq(other.dom, t.dom)
                        and self.gt(t.cod, other.cod)):
                    continue
                return (t, other)
        return None

    def separate_world_violation(self):
        """A simple (nullary) sort that is above a parameterised data type."""
        for t in sorted(self.universe, key=str):
            if isinstance(t, Sort) and not t.args:
                for other in self._ge[t]:
                    if isinstance(other, Arrow):
                        continue
                    if is_data_type(other) and other.args:
                        return (t, other)
        return None


def build_type_order(declared: Iterable[tuple], problem_types: Iterable[Type],
                     depth: int = DEFAULT_DEPTH,
                     max_size: int = DEFAULT_MAX_UNIVERSE) -> TypeOrder:
    """Close and validate ``declared`` over the bounded universe.

    Raises :class:`AxiomViolation` for the first failing axiom.
    """
    declared = list(declared)
    types = list(problem_types)
    for a, b in declared:
        types.extend((a, b))
    universe = build_universe(types, depth, max_size)
    order = TypeOrder(declared, universe)
    failed = order.report.first_failure()
    if failed is not None:
        raise AxiomViolation(failed, order.report.witnesses[failed], order.report)
    return order
