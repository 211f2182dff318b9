"""Algebra structures as maps into an endomorphism operad.

On the two-point set, operad maps Com -> End({0,1}) and Com-algebra
structures are enumerated independently; uncurrying a map gives the
algebra's action, and the two lists match.  The four structures are the
commutative monoids AND, OR, XOR and XNOR.
"""

from opcal import ColorFamily, FINSET, Corolla, commutative_operad, finset
from opcal.endomorphism import algebra_from_map, algebra_map_correspondence

M = ColorFamily(("a",), {"a": finset(["0", "1"])}, FINSET)
com = commutative_operad(arity_bound=3)
w = algebra_map_correspondence(com, M, 3)
print(f"operad maps: {len(w.maps)}, algebra structures: {len(w.algebras)}, "
      f"bijective: {w.bijective}")

binary = Corolla(("a", "a"), "a")
nullary = Corolla((), "a")
for phi in w.maps:
    A = algebra_from_map(phi, M)
    unit = A.act(nullary, (), 0)
    mul = {(x, y): A.act(binary, (x, y), 0) for x in (0, 1) for y in (0, 1)}
    print(f"  unit {unit}, table {[mul[k] for k in sorted(mul)]}")
