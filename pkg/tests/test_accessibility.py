import random

import pytest

from cpo.accessibility import (NonSimpleOutput, acc_positions, acc_subterms, acc_table,
                               is_accessible, negative_positions, positive_positions,
                               sort_positions)
from cpo.generate import random_type
from cpo.terms import Arrow, Signature, Sort, Var, subterms
from cpo.typeorder import build_type_order

from conftest import load

N, O, A, Q = Sort("N"), Sort("O"), Sort("A"), Sort("Q")


def test_positions_flip_left_of_arrow():
    ty = Arrow(Arrow(N, O), O)
    assert positive_positions(ty) == {(1, 1), (2,)}
    assert negative_positions(ty) == {(1, 2)}


def test_brouwer_accessible_positions():
    system = load("brouwer")
    table = acc_table(system.signature, system.type_order())
    assert table["lim"] == {1}
    assert table["S"] == {1}
    assert table["rec"] == {1, 2}


def test_greater_sort_blocks_accessibility():
    sig = Signature()
    for s in "NO":
        sig.add_sort(s)
    sig.add_fun("c", [Arrow(N, O)], O)
    order = build_type_order([(N, O)], sig.types())
    assert acc_positions(sig, order, "c") == frozenset()
    order = build_type_order([], sig.types())
    assert acc_positions(sig, order, "c") == {1}


def test_negative_occurrence_blocks_accessibility():
    sig = Signature()
    sig.add_sort("O")
    sig.add_fun("bad", [Arrow(O, O)], O)
    order = build_type_order([], sig.types())
    assert acc_positions(sig, order, "bad") == frozenset()


def test_arrow_output_has_no_table_entry():
    sig = Signature()
    sig.add_sort("o")
    o = Sort("o")
    sig.add_fun("B", [], Arrow(o, o))
    order = build_type_order([], sig.types())
    assert "B" not in acc_table(sig, order)
    with pytest.raises(NonSimpleOutput):
        acc_positions(sig, order, "B")


def test_accessible_subterms_are_strict_subterms():
    system = load("brouwer")
    table = acc_table(system.signature, system.type_order())
    sig = system.signature
    F = system.variables["F"]
    n = system.variables["n"]
    t = sig("S", sig("lim", F))
    found = acc_subterms(table, t)
    assert found == [sig("lim", F), F]
    strict = [u for u in subterms(t) if u is not t]
    assert all(any(u == v for v in strict) for u in found)
    assert is_accessible(table, sig("lim", F), F)
    assert not is_accessible(table, n, n)


def test_pos_partition_random_types():
    rng = random.Random(3)
    for _ in range(2000):
        ty = random_type(rng, 4, (N, O, A))
        pos, neg = positive_positions(ty), negative_positions(ty)
        assert not pos & neg
        assert pos | neg == sort_positions(ty)


def _replace_some(ty, rng):
    if isinstance(ty, Arrow):
        return Arrow(_replace_some(ty.dom, rng), _replace_some(ty.cod, rng))
    if ty == O and rng.random() < 0.5:
        return Q
    return ty


def test_acc_positions_respect_type_equivalence():
    rng = random.Random(11)
    for _ in range(300):
        arg = random_type(rng, 3, (N, O))
        sig = Signature()
        for s in "NOQ":
            sig.add_sort(s)
        sig.add_fun("c1", [arg], O)
        sig.add_fun("c2", [_replace_some(arg, rng)], O)
        order = build_type_order([(O, Q), (Q, O)], sig.types(), depth=1)
        assert acc_positions(sig, order, "c1") == acc_positions(sig, order, "c2")
