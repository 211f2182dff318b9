from itertools import combinations_with_replacement, product

import pytest
from hypothesis import given, strategies as st

from opcal import base_cat as bc
from opcal.algebras import (
    AlgebraStructure,
    Undefined,
    adjunction_bijection,
    check_algebra,
    enumerate_algebras,
    free_algebra,
    monoid_algebra,
    nullary_algebra,
    restrict_algebra,
    terminal_algebra,
    word_algebra,
)
from opcal.collection import ColorFamily, ColorMap
from opcal.groupoids import CompositionIndex, Corolla
from opcal.operads import (
    associative_operad,
    commutative_operad,
    free_operad,
    generator_collection,
    pullback_operad,
)

from conftest import semigroup_tables

A0 = Corolla((), "a")
A2 = Corolla(("a", "a"), "a")


def family(sizes, base=bc.FINSET):
    colors = tuple(sizes)
    return ColorFamily(colors, {x: bc.BaseObject(base, [f"{x}{i}" for i in range(k)])
                                for x, k in sizes.items()}, base)


def test_terminal_algebra_passes():
    for op in (commutative_operad(colors=("a", "b"), arity_bound=3),
               associative_operad(arity_bound=3)):
        assert check_algebra(terminal_algebra(op)).passed


def test_word_algebra_passes():
    op = associative_operad(arity_bound=3)
    A = word_algebra(op, "xy", 3)
    report = check_algebra(A)
    assert report.passed, report.first()
    assert report.counts["associativity"] > 0


def test_word_algebra_concatenates_in_operation_order():
    op = associative_operad(arity_bound=2)
    A = word_algebra(op, "xy", 2)
    labels = A.carrier["a"].labels
    x, y = labels.index("x"), labels.index("y")
    got = {op.value(A2).labels[o]: labels[A.act(A2, (x, y), o)] for o in range(2)}
    assert got == {"[1,2]": "xy", "[2,1]": "yx"}
    with pytest.raises(Undefined):
        A.act(A2, (labels.index("xy"), y), 0)


def test_swapped_action_outputs_are_reported():
    op = associative_operad(arity_bound=3)
    A = monoid_algebra(op, [0, 1], lambda a, b: a ^ b, 0)

    def action(c, elems, o):
        v = A.act(c, elems, o)
        if c.arity == 2 and elems == (0, 1) and o == 0:
            return 1 - v
        return v

    report = check_algebra(AlgebraStructure(op, A.carrier, action))
    assert not report.passed
    assert {v["law"] for v in report.violations} & {"equivariance", "associativity"}


@pytest.mark.parametrize("s", [1, 2, 3])
def test_free_assoc_grade_sizes(s):
    F = free_algebra(associative_operad(arity_bound=5), family({"a": s}), 5)
    words = [len(list(product(range(s), repeat=n))) for n in range(6)]
    assert F.grade_sizes("a") == [0] + words[1:]


@pytest.mark.parametrize("s", [1, 2, 3])
def test_free_com_grade_sizes(s):
    F = free_algebra(commutative_operad(arity_bound=5), family({"a": s}), 5)
    multisets = [len(list(combinations_with_replacement(range(s), n))) for n in range(6)]
    assert F.grade_sizes("a") == multisets


def test_free_algebra_vectq_dimensions_match():
    for build in (commutative_operad, associative_operad):
        sizes = []
        for base in (bc.FINSET, bc.VECTQ):
            op = build(base=base, arity_bound=4)
            sizes.append(free_algebra(op, family({"a": 2}, base), 4).grade_sizes("a"))
        assert sizes[0] == sizes[1]


@pytest.mark.parametrize("build", [commutative_operad, associative_operad])
def test_free_algebra_laws_and_grading(build):
    F = free_algebra(build(arity_bound=3), family({"a": 2}), 3)
    report = check_algebra(F)
    assert report.passed, report.first()
    assert F.check_grading() == []


def test_free_algebra_two_colors():
    op = commutative_operad(colors=("a", "b"), arity_bound=3)
    F = free_algebra(op, family({"a": 1, "b": 1}), 3)
    # monomials in two variables of degree n
    assert F.grade_sizes("a") == [1, 2, 3, 4]
    assert check_algebra(F, arity_bound=2).passed


def test_adjunction_empty_family():
    op = commutative_operad(arity_bound=2)
    A = monoid_algebra(op, [0, 1], lambda a, b: a & b, 1, commutative=True)
    w = adjunction_bijection(op, family({"a": 0}), A, 2)
    assert len(w.algebra_maps) == len(w.family_maps) == 1
    assert w.bijective


def test_adjunction_free_binary_into_terminal():
    gens = generator_collection("a", {A0: ["e"], A2: ["m"]})
    op = free_operad(gens, arity_bound=2, size_bound=2)
    w = adjunction_bijection(op, family({"a": 1}), terminal_algebra(op), 2)
    assert len(w.algebra_maps) == len(w.family_maps) == 1
    assert w.bijective


@pytest.mark.parametrize("mul, unit", [(lambda a, b: a ^ b, 0), (lambda a, b: a & b, 1)])
def test_adjunction_truncated_assoc(mul, unit):
    op = associative_operad(arity_bound=2)
    A = monoid_algebra(op, [0, 1], mul, unit)
    w = adjunction_bijection(op, family({"a": 1}), A, 2)
    assert len(w.algebra_maps) == len(w.family_maps) == 2
    assert w.bijective


def test_adjunction_two_colors():
    op = commutative_operad(colors=("a", "b"), arity_bound=2)
    A = terminal_algebra(op)
    w = adjunction_bijection(op, family({"a": 2, "b": 1}), A, 2)
    assert w.bijective and len(w.family_maps) == 1


def test_adjunction_refuses_vectq():
    from opcal.operads import InfiniteEnumeration

    op = commutative_operad(base=bc.VECTQ, arity_bound=2)
    with pytest.raises(InfiniteEnumeration):
        adjunction_bijection(op, family({"a": 1}, bc.VECTQ), terminal_algebra(op), 2)


def test_nullary_algebra_of_com_is_terminal():
    op = commutative_operad(colors=("a", "b"), arity_bound=3)
    Z = nullary_algebra(op)
    assert all(len(Z.carrier[x]) == 1 for x in op.colors)
    assert Z.table(3) == terminal_algebra(op).table(3)
    assert check_algebra(Z).passed


def test_nullary_algebra_of_assoc_is_empty():
    op = associative_operad(arity_bound=3)
    Z = nullary_algebra(op)
    assert len(Z.carrier["a"]) == 0
    assert check_algebra(Z).passed


def test_nullary_algebra_grafts_closed_trees():
    gens = generator_collection("a", {A0: ["e"], A2: ["m"]})
    op = free_operad(gens, arity_bound=2, size_bound=3)
    Z = nullary_algebra(op)
    closed = Z.carrier["a"].labels
    assert set(closed) == {"e()", "m(e(),e())", "⊥"}
    m12 = op.value(A2).labels.index("m(x1,x2)")
    e = closed.index("e()")
    assert closed[Z.act(A2, (e, e), m12)] == "m(e(),e())"
    big = closed.index("m(e(),e())")
    assert closed[Z.act(A2, (big, e), m12)] == "⊥"
    assert check_algebra(Z).passed


def test_nullary_action_is_gamma_at_empty_fibers():
    gens = generator_collection("a", {A0: ["e"], A2: ["m"]})
    op = free_operad(gens, arity_bound=2, size_bound=3)
    Z = nullary_algebra(op)
    k = len(Z.carrier["a"])
    idx = CompositionIndex(2, (), ("a", "a"))
    for a, b in product(range(k), repeat=2):
        for o in range(len(op.value(A2))):
            assert Z.act(A2, (a, b), o) == op.gamma(A0, idx, (a, b), o)


def test_restrict_along_identity():
    op = associative_operad(arity_bound=3)
    A = word_algebra(op, "xy", 2)
    ident = ColorMap(("a",), ("a",), {"a": "a"})
    assert restrict_algebra(ident, A).table(3) == A.table(3)


def test_restrict_along_inclusion_forgets_other_color():
    op = commutative_operad(colors=("a", "b"), arity_bound=2)
    A = terminal_algebra(op)
    i = ColorMap(("a",), ("a", "b"), {"a": "a"})
    R = restrict_algebra(i, A)
    assert R.colors == ("a",)
    assert check_algebra(R).passed


def test_restrict_along_fold_duplicates_carrier():
    op = associative_operad(arity_bound=3, color="c")
    A = monoid_algebra(op, [0, 1, 2], lambda a, b: (a + b) % 3, 0)
    fold = ColorMap(("a", "b"), ("c",), {"a": "c", "b": "c"})
    R = restrict_algebra(fold, A)
    assert len(R.carrier["a"]) == len(R.carrier["b"]) == 3
    assert R.operad.colors == pullback_operad(fold, op).colors
    report = check_algebra(R)
    assert report.passed, report.first()


def test_enumerated_com_algebras_match_commutative_monoids():
    op = commutative_operad(arity_bound=3)
    algs = enumerate_algebras(op, family({"a": 2}), 3)
    assert len(algs) == len(semigroup_tables(2, commutative=True, unital=True)) == 4
    for A in algs:
        assert check_algebra(A).passed


def test_enumerated_assoc_algebras_match_semigroups():
    # Assoc has no nullary operations, so no unit is required.
    op = associative_operad(arity_bound=3)
    algs = enumerate_algebras(op, family({"a": 2}), 3)
    assert len(algs) == len(semigroup_tables(2)) == 8


@given(st.lists(st.integers(0, 2), min_size=3, max_size=3))
def test_monoid_algebra_assoc_law(xs):
    op = associative_operad(arity_bound=3)
    A = monoid_algebra(op, [0, 1, 2], lambda a, b: (a + b) % 3, 0)
    c = Corolla(("a",) * 3, "a")
    for o in range(6):
        assert A.act(c, tuple(xs), o) == sum(xs) % 3
