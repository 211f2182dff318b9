"""Free algebras on a two-letter family.

Free Assoc-algebras are words and free Com-algebras are multisets; the
degree-n parts are colimits over arity-n corollas and their sizes are
2^n and n + 1.  The unit sends a letter to its degree-one class; the
two binary operations of Assoc send (x, y) to two different degree-two
classes, the words xy and yx.
"""

from opcal import ColorFamily, FINSET, Corolla, associative_operad, commutative_operad, finset
from opcal.algebras import free_algebra

S = ColorFamily(("a",), {"a": finset(["x", "y"])}, FINSET)

for name, build in (("Assoc", associative_operad), ("Com", commutative_operad)):
    F = free_algebra(build(arity_bound=4), S, 4)
    print(f"free {name}-algebra on {{x, y}}: grade sizes {F.grade_sizes('a')}")

ass = associative_operad(arity_bound=4)
F = free_algebra(ass, S, 4)
x, y = (F.unit_map("a")(i) for i in range(2))
c = Corolla(("a", "a"), "a")
labels = F.carrier["a"].labels
for o, order in enumerate(ass.value(c).labels):
    print(f"  {order} applied to (x, y) -> {labels[F.act(c, (x, y), o)]}")
