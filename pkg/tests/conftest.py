from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def stirling2(n, k):
    """Stirling numbers of the second kind by the triangle recurrence."""
    table = [[0] * (k + 1) for _ in range(n + 1)]
    table[0][0] = 1
    for i in range(1, n + 1):
        for j in range(1, min(i, k) + 1):
            table[i][j] = j * table[i - 1][j] + table[i - 1][j - 1]
    return table[n][k]


def catalan(n):
    return comb(2 * n, n) // (n + 1)


def orbit_count(points, gens, act):
    """Orbits of a group action by plain graph search."""
    seen, count = set(), 0
    for p in points:
        if p in seen:
            continue
        count += 1
        stack = [p]
        seen.add(p)
        while stack:
            q = stack.pop()
            for g in gens:
                r = act(g, q)
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
    return count


@pytest.fixture
def fr():
    return Fraction


def random_collection(rng, colors, base, max_arity=3, max_size=3, reduced=True, name=None,
                      density=1.0):
    """A random collection with trivial points and free ``Aut``-orbits.

    At each sorted corolla the value is some fixed points plus possibly
    one free orbit of the automorphism group of the corolla.  ``density``
    is the chance that a sorted corolla of arity above one gets a value
    at all.
    """
    from opcal import base_cat as bc
    from opcal.collection import Collection
    from opcal.groupoids import all_corollas, closure, perm_inverse, sort_corolla, young_generators

    colors = tuple(colors)
    cidx = {x: i for i, x in enumerate(colors)}
    shape = {}
    for n in range(0 if not reduced else 1, max_arity + 1):
        for c in all_corollas(colors, n):
            rep, _ = sort_corolla(c, cidx)
            if rep in shape:
                continue
            aut = closure(young_generators(rep.inputs), n)
            if n > 1 and rng.random() >= density:
                shape[rep] = (0, [])
                continue
            free = len(aut) <= max_size and rng.random() < 0.4
            points = rng.randint(0, max_size - (len(aut) if free else 0))
            shape[rep] = (points, aut if free else [])

    def labels(c):
        rep, _ = sort_corolla(c, cidx)
        points, aut = shape.get(rep, (0, []))
        return [f"p{i}" for i in range(points)] + [f"o{k}" for k in range(len(aut))]

    def value(c):
        return bc.BaseObject(base, labels(c))

    def act(g, c):
        rep, s = sort_corolla(c, cidx)
        points, aut = shape.get(rep, (0, []))
        c2 = c.permuted(g)
        _, s2 = sort_corolla(c2, cidx)
        t = tuple(s2[g[perm_inverse(s)[v]]] for v in range(c.arity))
        pos = {a: k for k, a in enumerate(aut)}

        def fn(i):
            if i < points:
                j = i
            else:
                a = aut[i - points]
                j = points + pos[tuple(t[v] for v in a)]
            return j if base == bc.FINSET else {j: 1}

        return bc.BaseMorphism(value(c), value(c2), fn=fn)

    support = {rep.arity for rep, (p, aut) in shape.items() if p + len(aut)}
    return Collection(colors, base, value, act=act, arity_bound=max_arity,
                      support=support, name=name)


def semigroup_tables(k, commutative=False, unital=False):
    """Associative binary tables on ``range(k)``, by brute force."""
    out = []
    for flat in product(range(k), repeat=k * k):
        mul = lambda a, b: flat[a * k + b]
        if any(mul(mul(a, b), c) != mul(a, mul(b, c)) for a, b, c in product(range(k), repeat=3)):
            continue
        if commutative and any(mul(a, b) != mul(b, a) for a, b in product(range(k), repeat=2)):
            continue
        if unital and not any(all(mul(e, a) == a == mul(a, e) for a in range(k)) for e in range(k)):
            continue
        out.append(flat)
    return out
