"""The composition product graded by block count.

Prints the grade tables of Com⊙Com and Assoc⊙Assoc in one color, in
both bases, next to closed formulas: set partitions into at most m
blocks, and surjections weighted by orderings of their fibers (Assoc
has no nullary operations, so its table starts at one input).
"""

from itertools import product
from math import factorial, prod

from opcal import FINSET, VECTQ, Corolla, associative_operad, commutative_operad, compose


def stirling2(n, k):
    if n == k:
        return 1
    if n == 0 or k == 0:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


def weighted_surjections(n, m):
    total = 0
    for f in product(range(m), repeat=n):
        sizes = [f.count(j) for j in range(m)]
        if 0 not in sizes:
            total += prod(factorial(s) for s in sizes)
    return total


def table(title, prod_, bound, formula, low=0):
    print(title)
    for n in range(low, bound + 1):
        c = Corolla(("a",) * n, "a")
        got = [len(prod_.grade(c, m)) for m in prod_.grade_range(c)]
        want = [formula(n, m) for m in prod_.grade_range(c)]
        print(f"  n={n}: {got}  formula {want}")
    print()


for base in (FINSET, VECTQ):
    com = commutative_operad(base=base, arity_bound=5).carrier
    table(f"Com⊙Com over {base}, grades m = 0..5",
          compose(com, com, m_bound=5), 5,
          lambda n, m: sum(stirling2(n, k) for k in range(m + 1)))

    ass = associative_operad(base=base, arity_bound=4).carrier
    table(f"Assoc⊙Assoc over {base}", compose(ass, ass), 4, weighted_surjections, low=1)
