from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from opcal import base_cat as bc
from opcal.groupoids import ActionGroupoid, GroupoidDiagram, all_perms, permute, transposition

from conftest import orbit_count


def test_product_labels_roundtrip():
    a, b = bc.finset(["x", "y"]), bc.finset(["p", "q", "r"])
    t = bc.tensor(a, b)
    assert len(t) == 6
    assert t.labels[4] == "(y,q)"
    for i in range(6):
        assert t.labels.encode(t.labels.decode(i)) == i


def test_empty_tensor_is_unit():
    u = bc.tensor_unit(bc.FINSET, [])
    assert len(u) == 1
    assert u == bc.unit(bc.FINSET)


def test_mixed_base_rejected():
    with pytest.raises(bc.MixedBase):
        bc.tensor(bc.finset(["x"]), bc.vectq(["x"]))


def test_vectq_morphism_composition_and_inverse():
    v = bc.vectq(["e1", "e2"])
    f = bc.from_matrix(v, v, [[1, 1], [0, 2]])
    g = f.inverse()
    assert g.after(f).equals(bc.identity(v))
    assert f.after(g).equals(bc.identity(v))
    assert g(1) == {0: Fraction(-1, 2), 1: Fraction(1, 2)}


def test_singular_matrix_not_invertible():
    v = bc.vectq(["e1", "e2"])
    f = bc.from_matrix(v, v, [[1, 2], [2, 4]])
    assert not f.is_invertible()
    with pytest.raises(bc.NotInvertible):
        f.inverse()


def test_internal_hom_sizes():
    a, b = bc.finset(["0", "1", "2"]), bc.finset(["x", "y"])
    assert len(bc.internal_hom(a, b)) == 2 ** 3
    va, vb = bc.vectq(["0", "1", "2"]), bc.vectq(["x", "y"])
    assert len(bc.internal_hom(va, vb)) == 6


@pytest.mark.parametrize("base", [bc.FINSET, bc.VECTQ])
def test_curry_uncurry_roundtrip(base):
    s = bc.BaseObject(base, ["s0", "s1"])
    a = bc.BaseObject(base, ["a0", "a1", "a2"])
    b = bc.BaseObject(base, ["b0", "b1"])
    sa = bc.tensor(s, a)
    if base == bc.FINSET:
        f = bc.BaseMorphism(sa, b, table=[(i * 7 + 3) % 2 for i in range(len(sa))])
    else:
        f = bc.BaseMorphism(sa, b, table=[{i % 2: i + 1} for i in range(len(sa))])
    g = bc.curry(f, s, a)
    assert bc.uncurry(g, a).equals(f)


def _swap_groupoid(n):
    """Σ_n acting on words of length n over {0, 1}."""
    words = list(product(range(2), repeat=n))
    gens = [transposition(n, i) for i in range(n - 1)]
    return ActionGroupoid(words, lambda w, g: permute(g, w), gens), words


def _point_diagram(base):
    u = bc.unit(base)
    ident = (lambda i: i) if base == bc.FINSET else (lambda i: {i: 1})
    return GroupoidDiagram(base, lambda x: u, lambda x, g: bc.BaseMorphism(u, u, fn=ident))


@pytest.mark.parametrize("base", [bc.FINSET, bc.VECTQ])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_colimit_of_points_counts_components(base, n):
    G, words = _swap_groupoid(n)
    col = bc.groupoid_colimit(G, _point_diagram(base))
    # components of Σ_n on binary words: one per number of ones
    assert len(col.obj) == n + 1


def _regular_diagram(base, n):
    """Σ_n acting on itself by left multiplication, at one object."""
    perms = all_perms(n)
    obj = bc.BaseObject(base, ["".join(map(str, p)) for p in perms])
    pos = {p: i for i, p in enumerate(perms)}

    def act(x, g):
        def fn(i):
            j = pos[tuple(g[v] for v in perms[i])]
            return j if base == bc.FINSET else {j: 1}
        return bc.BaseMorphism(obj, obj, fn=fn)

    G = ActionGroupoid(["*"], lambda x, g: x, [transposition(n, i) for i in range(n - 1)])
    return G, GroupoidDiagram(base, lambda x: obj, act)


@pytest.mark.parametrize("base", [bc.FINSET, bc.VECTQ])
def test_free_action_has_one_orbit(base):
    G, D = _regular_diagram(base, 3)
    col = bc.groupoid_colimit(G, D)
    assert len(col.obj) == 1


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=2, max_value=3))
def test_orbit_count_matches_search(n, k):
    """Σ_n on words over k letters; FINSET orbits and VECTQ coinvariants agree."""
    words = list(product(range(k), repeat=n))
    gens = [transposition(n, i) for i in range(n - 1)]
    expected = orbit_count(words, gens, permute)
    obj_f = bc.finset(["".join(map(str, w)) for w in words])
    obj_v = bc.vectq(obj_f.labels)
    pos = {w: i for i, w in enumerate(words)}
    for base, obj in [(bc.FINSET, obj_f), (bc.VECTQ, obj_v)]:
        def act(x, g, obj=obj, base=base):
            def fn(i):
                j = pos[permute(g, words[i])]
                return j if base == bc.FINSET else {j: 1}
            return bc.BaseMorphism(obj, obj, fn=fn)
        G = ActionGroupoid(["*"], lambda x, g: x, gens)
        col = bc.groupoid_colimit(G, GroupoidDiagram(base, lambda x, obj=obj: obj, act))
        assert len(col.obj) == expected


def test_sign_representation_coinvariants_vanish():
    # Σ_2 acting on Q by -1: coinvariants are zero
    v = bc.vectq(["e"])

    def act(x, g):
        sign = -1 if g == (1, 0) else 1
        return bc.BaseMorphism(v, v, table=[{0: sign}])

    G = ActionGroupoid(["*"], lambda x, g: x, [(1, 0)])
    col = bc.groupoid_colimit(G, GroupoidDiagram(bc.VECTQ, lambda x: v, act))
    assert len(col.obj) == 0


def test_descend_detects_non_invariant_cocone():
    G, D = _regular_diagram(bc.FINSET, 2)
    col = bc.groupoid_colimit(G, D)
    target = bc.finset(["a", "b"])
    good = bc.descend(col, lambda x: bc.BaseMorphism(D.value(x), target, table=[0, 0]), target)
    assert good(0) == 0
    with pytest.raises(bc.DescentError):
        bc.descend(col, lambda x: bc.BaseMorphism(D.value(x), target, table=[0, 1]), target)


def test_leg_then_descend_recovers_cocone():
    G, words = _swap_groupoid(3)
    D = _point_diagram(bc.FINSET)
    col = bc.groupoid_colimit(G, D)
    weight = bc.finset([str(i) for i in range(4)])

    def cocone(w):
        return bc.BaseMorphism(D.value(w), weight, table=[sum(w)])

    m = bc.descend(col, cocone, weight)
    for w in words:
        assert m.after(col.leg(w)).equals(cocone(w))
