"""Precedences over function symbols and ``@``, statuses, and the multiset
and lexicographic extensions of a comparison."""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from typing import Callable, Hashable, Iterable, Mapping, Optional, Sequence

from .terms import CPOError, UndeclaredSymbol

AT = "@"


class PrecedenceError(CPOError):
    pass


class LengthMismatch(CPOError):
    pass


class Status(enum.Enum):
    MUL = "mul"
    LEX = "lex"


class Comparison(enum.Enum):
    GREATER = "greater"
    EQUIVALENT = "equivalent"
    NOT_GE = "not-ge"


class Precedence:
    """Quasi-order on ``symbols | {@}`` with ``@`` strictly below every symbol.

    ``pairs`` holds ``(f, ">", g)`` and ``(f, "=", g)`` declarations.
    """

    def __init__(self, symbols: Iterable[str], pairs: Iterable[tuple] = ()):
        self.symbols = tuple(dict.fromkeys(symbols))
        if AT in self.symbols:
            raise PrecedenceError("@ is not a function symbol")
        self.pairs = tuple(pairs)
        known = set(self.symbols) | {AT}
        ge = {f: {f} for f in known}
        for f, rel, g in self.pairs:
            for h in (f, g):
                if h not in known:
                    raise UndeclaredSymbol(f"precedence mentions undeclared symbol {h}")
            if rel not in (">", "="):
                raise PrecedenceError(f"unknown precedence relation {rel!r}")
            if AT in (f, g) and not (f != AT and g == AT and rel == ">"):
                raise PrecedenceError(f"{f} {rel} {g}: @ must stay strictly below every symbol")
            ge[f].add(g)
            if rel == "=":
                ge[g].add(f)
        for f in self.symbols:
            ge[f].add(AT)
        changed = True
        while changed:
            changed = False
            for f in known:
                extra = set().union(*(ge[g] for g in ge[f])) - ge[f]
                if extra:
                    ge[f] |= extra
                    changed = True
        self._ge = {f: frozenset(s) for f, s in ge.items()}
        for f, rel, g in self.pairs:
            if rel == ">" and f in self._ge[g]:
                raise PrecedenceError(f"declared {f} > {g} lies on a precedence cycle")

    def _need(self, f):
        if f not in self._ge:
            raise UndeclaredSymbol(f"undeclared symbol {f}")

    def compare(self, f: str, g: str) -> Comparison:
        self._need(f)
        self._need(g)
        if g in self._ge[f]:
            return Comparison.EQUIVALENT if f in self._ge[g] else Comparison.GREATER
        return Comparison.NOT_GE

    def gt(self, f: str, g: str) -> bool:
        return self.compare(f, g) is Comparison.GREATER

    def equiv(self, f: str, g: str) -> bool:
        return self.compare(f, g) is Comparison.EQUIVALENT

    def strict_pairs(self) -> frozenset:
        return frozenset((f, g) for f in self.symbols for g in self.symbols
                         if self.gt(f, g))

    def __repr__(self):
        return f"Precedence({list(self.symbols)!r}, {list(self.pairs)!r})"


def validate_statuses(prec: Precedence, status: Mapping[str, Status],
                      arities: Mapping[str, int]) -> None:
    """Equivalent symbols share a status, and lexicographic ones an arity."""
    if status.get(AT, Status.MUL) is not Status.MUL:
        raise PrecedenceError("@ must have multiset status")
    for f, g in itertools.combinations(prec.symbols, 2):
        if not prec.equiv(f, g):
            continue
        sf, sg = status.get(f, Status.MUL), status.get(g, Status.MUL)
        if sf is not sg:
            raise PrecedenceError(f"equivalent symbols {f} and {g} have different statuses")
        if sf is Status.LEX and arities.get(f) != arities.get(g):
            raise PrecedenceError(f"equivalent lexicographic symbols {f} and {g} differ in arity")


def precedence_compare(prec: Precedence, f: str, g: str) -> Comparison:
    return prec.compare(f, g)


# ---------------------------------------------------------------------------
# Extensions

Rel = Callable[[object, object], object]


def multiset_witness(rel: Rel, m: Sequence, n: Sequence,
                     key: Callable[[object], Hashable] = lambda x: x) -> Optional[dict]:
    """Decide ``m (rel)_mul n`` and return a witness.

    ``n`` must equal ``m`` with a non-empty part removed and replaced by
    elements each below some removed element.  Elements are identified up to
    ``key``.  The witness maps each replacement index of ``n`` to
    ``(index in m, rel result)``; ``kept`` lists the matched index pairs.
    """
    mk = [key(x) for x in m]
    nk = [key(y) for y in n]
    mcount, ncount = Counter(mk), Counter(nk)
    shared = [k for k in dict.fromkeys(mk) if k in ncount]
    first_m = {k: mk.index(k) for k in mcount}
    first_n = {k: nk.index(k) for k in ncount}
    cache: dict = {}

    def dominated(xk, yk):
        if (xk, yk) not in cache:
            cache[(xk, yk)] = rel(m[first_m[xk]], n[first_n[yk]])
        return cache[(xk, yk)]

    ranges = [range(min(mcount[k], ncount[k]), -1, -1) for k in shared]
    for keep in itertools.product(*ranges):
        kept = dict(zip(shared, keep))
        rest_m = [k for k in mcount if mcount[k] - kept.get(k, 0) > 0]
        if not rest_m:
            continue
        rest_n = [k for k in ncount if ncount[k] - kept.get(k, 0) > 0]
        proof = {}
        for yk in rest_n:
            for xk in rest_m:
                r = dominated(xk, yk)
                if r:
                    proof[yk] = (xk, r)
                    break
            else:
                break
        else:
            return _witness(m, n, mk, nk, kept, proof)
    return None


def _witness(m, n, mk, nk, kept, proof) -> dict:
    left = dict(kept)
    matched = []
    used_m: set = set()
    replaced = {}
    for j, yk in enumerate(nk):
        if left.get(yk, 0) > 0:
            i = next(i for i, xk in enumerate(mk) if xk == yk and i not in used_m)
            used_m.add(i)
            matched.append((i, j))
            left[yk] -= 1
        else:
            xk, r = proof[yk]
            replaced[j] = (mk.index(xk), r)
    return {"kept": matched, "replaced": replaced}


def multiset_ext(rel: Rel, m: Sequence, n: Sequence,
                 key: Callable[[object], Hashable] = lambda x: x) -> bool:
    return multiset_witness(rel, m, n, key) is not None


def lex_witness(rel: Rel, gel: Callable[[object, object], bool], s: Sequence,
                t: Sequence) -> Optional[tuple]:
    """Left-to-right lexicographic extension: ``(i, rel result)`` or None."""
    if len(s) != len(t):
        raise LengthMismatch(f"lexicographic comparison of lengths {len(s)} and {len(t)}")
    for i, (a, b) in enumerate(zip(s, t)):
        r = rel(a, b)
        if r:
            return (i, r)
        if not gel(a, b):
            return None
    return None


def lex_ext(rel: Rel, gel: Callable[[object, object], bool], s: Sequence, t: Sequence) -> bool:
    return lex_witness(rel, gel, s, t) is not None
