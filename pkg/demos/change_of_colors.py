"""Pushing collections and operads along color maps.

Along an injective color map the pushforward commutes with the
composition product and preserves operad hom-sets.  Along the fold map
{a, b} -> {c} it does not: a nullary Φ and a unary Ψ give 4 elements on
one side of the comparison and 8 on the other.
"""

from itertools import product

from opcal import FINSET, Collection, ColorMap, Corolla
from opcal import associative_operad, commutative_operad, enumerate_operad_maps
from opcal import pushforward_monoidal_comparison, pushforward_operad
from opcal import base_cat as bc

pt, empty = bc.unit(FINSET), bc.initial(FINSET)
phi = Collection("ab", FINSET, lambda c: pt if c.arity == 0 else empty,
                 support={0}, arity_bound=3)
psi = Collection("ab", FINSET, lambda c: pt if c.arity == 1 else empty,
                 support={1}, arity_bound=3)
fold = ColorMap("ab", "c", {"a": "c", "b": "c"})
cmp = pushforward_monoidal_comparison(fold, phi, psi, m_bound=1)
sizes = cmp.sizes(Corolla((), "c"))[1]
print(f"fold: grade-1 sizes at (;c) are {sizes}, invertible: "
      f"{cmp.invertible(Corolla((), 'c'))}")

inc = ColorMap(("a",), ("a", "b"), {"a": "a"})
ops = {"Com": commutative_operad(arity_bound=3), "Assoc": associative_operad(arity_bound=3)}
for (p, O), (q, P) in product(ops.items(), repeat=2):
    before = len(enumerate_operad_maps(O, P))
    after = len(enumerate_operad_maps(pushforward_operad(inc, O), pushforward_operad(inc, P)))
    print(f"maps {p} -> {q}: {before} over {{a}}, {after} over {{a, b}}")
