"""Independent brute-force oracles used to freeze expected values."""

from __future__ import annotations

import itertools

from cpo.properties import multiset_brute
from cpo.terms import Arrow, Sort


# the reference enumeration lives next to the sweeps so scripts can use it
multiset_gt_brute = multiset_brute


def lex_gt_brute(rel, s, t) -> bool:
    for i in range(len(s)):
        if all(s[j] == t[j] for j in range(i)) and rel(s[i], t[i]):
            return True
    return False


def all_multisets(carrier, max_size):
    for k in range(max_size + 1):
        yield from itertools.combinations_with_replacement(carrier, k)


def _closure(n, succ):
    """Transitive closure by Floyd-Warshall on integer bit rows."""
    rows = list(succ)
    for k in range(n):
        bit = 1 << k
        row_k = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= row_k
    return rows


def naive_closure(universe, declared):
    """Reflexive-transitive closure of the declared pairs plus ``s -> t >= t``,
    made a congruence for equivalence on arrows by naive iteration."""
    items = sorted(universe, key=str)
    index = {t: i for i, t in enumerate(items)}
    succ = [1 << i for i in range(len(items))]
    for a, b in declared:
        succ[index[a]] |= 1 << index[b]
    for t in items:
        if isinstance(t, Arrow) and t.cod in index:
            succ[index[t]] |= 1 << index[t.cod]
    while True:
        ge = _closure(len(items), succ)
        eq = lambda a, b: ge[index[a]] >> index[b] & 1 and ge[index[b]] >> index[a] & 1
        changed = False
        for s in items:
            for t in items:
                if (isinstance(s, Arrow) and isinstance(t, Arrow) and not eq(s, t)
                        and eq(s.dom, t.dom) and eq(s.cod, t.cod)):
                    succ[index[s]] |= 1 << index[t]
                    changed = True
        if not changed:
            return items, index, ge


def brute_axioms(universe, declared) -> dict:
    """Check the four type-order axioms pair by pair over a finite universe.

    Returns axiom name -> list of witnesses.  Relations come from
    :func:`naive_closure`, independently of the library.  Well-foundedness
    on a finite set means: the union of the strict order and the
    left-arrow-subterm relation has no cycle.
    """
    items, index, ge = naive_closure(universe, declared)
    n = len(items)

    def GE(a, b):
        return bool(ge[index[a]] >> index[b] & 1)

    def GT(a, b):
        return GE(a, b) and not GE(b, a)

    def EQ(a, b):
        return GE(a, b) and GE(b, a)

    bad = {"well-founded": [], "right-subterm": [], "preservation": [], "decreasing": []}
    strict = [0] * n
    for i, a in enumerate(items):
        for j, b in enumerate(items):
            if GT(a, b):
                strict[i] |= 1 << j
        if isinstance(a, Arrow) and a.dom in index:
            strict[i] |= 1 << index[a.dom]
    reach = _closure(n, strict)
    bad["well-founded"] = [a for i, a in enumerate(items) if reach[i] >> i & 1]
    for t in items:
        if isinstance(t, Arrow) and t.cod in index and not GT(t, t.cod):
            bad["right-subterm"].append(t)
    for s in items:
        if not isinstance(s, Arrow):
            continue
        for t in items:
            if EQ(s, t) and not (isinstance(t, Arrow) and EQ(s.dom, t.dom) and EQ(s.cod, t.cod)):
                bad["preservation"].append((s, t))
            if isinstance(t, Arrow) and EQ(s.dom, t.dom) and EQ(s.cod, t.cod) and not EQ(s, t):
                bad["preservation"].append((s, t))
    for s in items:
        if not isinstance(s, Arrow):
            continue
        for t in items:
            if not GT(s, t) or GE(s.cod, t):
                continue
            if isinstance(t, Arrow) and EQ(s.dom, t.dom) and GT(s.cod, t.cod):
                continue
            bad["decreasing"].append((s, t))
    return bad


def consequence_violations(universe, order) -> list:
    """Pairs breaking data-type invariance under equivalence or the
    codomain consequence for ordered arrows."""
    out = []
    items = list(universe)
    for s in items:
        for t in items:
            if order.eq(s, t) and isinstance(s, Sort) != isinstance(t, Sort):
                out.append(("data", s, t))
            if (isinstance(s, Arrow) and isinstance(t, Arrow) and order.ge(s, t)
                    and not order.ge(s.cod, t.cod)):
                out.append(("codomain", s, t))
    return out
