"""Polarity of sort occurrences, accessible argument positions and the
accessible-subterm relation used by the extended ordering."""

from __future__ import annotations

import enum
from typing import Mapping

from .terms import Arrow, CPOError, Fun, Signature, Sort, Term, Type, alpha_key
from .typeorder import TypeOrder


class NonSimpleType(CPOError):
    pass


class NonSimpleOutput(CPOError):
    pass


class Polarity(enum.Enum):
    POSITIVE = 1
    NEGATIVE = -1

    def __neg__(self):
        return Polarity(-self.value)

    def __mul__(self, other: "Polarity") -> "Polarity":
        return Polarity(self.value * other.value)


EPSILON = ()


def positions(ty: Type, polarity: Polarity = Polarity.POSITIVE) -> frozenset:
    """Positions of the given polarity; positions are tuples over {1, 2}."""
    if isinstance(ty, Sort):
        if ty.args:
            raise NonSimpleType(f"{ty} is not built from simple data types")
        return frozenset({EPSILON}) if polarity is Polarity.POSITIVE else frozenset()
    return frozenset({(1,) + p for p in positions(ty.dom, -polarity)}
                     | {(2,) + p for p in positions(ty.cod, polarity)})


def positive_positions(ty: Type) -> frozenset:
    return positions(ty, Polarity.POSITIVE)


def negative_positions(ty: Type) -> frozenset:
    return positions(ty, Polarity.NEGATIVE)


def occurrences(sort: Sort, ty: Type, prefix: tuple = EPSILON) -> set:
    """Positions at which ``sort`` occurs in ``ty``."""
    if isinstance(ty, Arrow):
        return occurrences(sort, ty.dom, prefix + (1,)) | occurrences(sort, ty.cod, prefix + (2,))
    return {prefix} if ty == sort else set()


def sort_positions(ty: Type, prefix: tuple = EPSILON) -> set:
    if isinstance(ty, Arrow):
        return sort_positions(ty.dom, prefix + (1,)) | sort_positions(ty.cod, prefix + (2,))
    return {prefix}


def leaf_sorts(ty: Type) -> set:
    if isinstance(ty, Arrow):
        return leaf_sorts(ty.dom) | leaf_sorts(ty.cod)
    return {ty}


def occurs_only_positively(sort: Sort, ty: Type) -> bool:
    return occurrences(sort, ty) <= positive_positions(ty)


def acc_positions(sig: Signature, order: TypeOrder, f: str) -> frozenset:
    """1-based accessible argument positions of ``f``."""
    decl = sig.funs[f]
    out = decl.out_type
    if not (isinstance(out, Sort) and not out.args):
        raise NonSimpleOutput(f"output type {out} of {f} is not a simple data type")
    acc = set()
    for i, arg in enumerate(decl.arg_types, start=1):
        try:
            positive_positions(arg)
        except NonSimpleType:
            continue
        sorts = leaf_sorts(arg)
        if any(order.gt(s, out) for s in sorts):
            continue
        if all(occurs_only_positively(s, arg) for s in sorts if order.eq(s, out)):
            acc.add(i)
    return frozenset(acc)


def acc_table(sig: Signature, order: TypeOrder) -> dict:
    """``Acc(f)`` for every symbol with a simple output type."""
    table = {}
    for name, decl in sig.funs.items():
        out = decl.out_type
        if isinstance(out, Sort) and not out.args:
            table[name] = acc_positions(sig, order, name)
    return table


def acc_subterms(table: Mapping[str, frozenset], v: Term) -> list:
    """Terms accessible in ``v``, in depth-first order without repeats."""
    found: list = []
    seen: set = set()

    def walk(u: Term):
        if not isinstance(u, Fun):
            return
        for i in sorted(table.get(u.symbol, ())):
            s = u.args[i - 1]
            k = alpha_key(s)
            if k not in seen:
                seen.add(k)
                found.append(s)
            walk(s)

    walk(v)
    return found


def is_accessible(table: Mapping[str, frozenset], v: Term, u: Term) -> bool:
    k = alpha_key(u)
    return any(alpha_key(w) == k for w in acc_subterms(table, v))
