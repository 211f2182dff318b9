"""Endomorphism operads and their universal property."""

from fractions import Fraction
from itertools import product

from . import base_cat as bc
from .algebras import AlgebraStructure, enumerate_algebras, nullary_algebra
from .collection import Collection, ColorFamily, pullback
from .groupoids import Corolla, sort_corolla
from .operads import (
    InfiniteEnumeration,
    Operad,
    OperadMap,
    enumerate_operad_maps,
    pullback_operad,
)


def _hom_value(M, c):
    return bc.internal_hom(bc.tensor_unit(M.base, [M[x] for x in c.inputs]), M[c.output])


def endomorphism_operad(M, arity_bound):
    """``End(M)(x_1..x_n; z) = hom(M(x_1) ⊗ ... ⊗ M(x_n), M(z))``.

    ``σ`` sends ``φ`` to ``b ↦ φ(a)`` with ``a_i = b_{σ(i)}``; composition
    feeds the block outputs, fibers read in increasing order, into the
    outer map.
    """
    base = M.base
    colors = M.colors

    def value(c):
        return _hom_value(M, c)

    carrier = Collection(colors, base, value, arity_bound=arity_bound, name="End")

    def act(g, c):
        src = value(c)
        c2 = c.permuted(g)
        tgt = value(c2)
        in1 = bc.tensor_unit(M.base, [M[x] for x in c.inputs]).labels
        in2 = bc.tensor_unit(M.base, [M[x] for x in c2.inputs]).labels
        n2 = len(in2)
        # a_i = b_{g(i)}: the index of a for every index of b
        pull = [in1.encode([in2.decode(b)[g[i]] for i in range(c.arity)]) for b in range(n2)]
        if base == bc.FINSET:
            fl, fl2 = src.labels, tgt.labels
            return bc.BaseMorphism(
                src, tgt, fn=lambda i: fl2.encode([fl.decode(i)[pull[b]] for b in range(n2)]))
        # (a*, z) goes to (b*, z) for the unique b with pull[b] = a
        nz = len(M[c.output])
        push = {a: b for b, a in enumerate(pull)}

        def fn(i):
            a, z = divmod(i, nz)
            return {push[a] * nz + z: Fraction(1)}

        return bc.BaseMorphism(src, tgt, fn=fn)

    carrier._act = act
    plans = {}

    def plan(c, idx):
        """Per input tuple: the block input indices, plus decoders."""
        key = (c, idx)
        if key not in plans:
            fibers = idx.fibers()
            ins = bc.tensor_unit(base, [M[x] for x in c.inputs]).labels
            block_in = [bc.tensor_unit(base, [M[c.inputs[i]] for i in fib]).labels
                        for fib in fibers]
            rows = []
            for k in range(len(ins)):
                a = ins.decode(k)
                rows.append(tuple(block_in[j].encode([a[i] for i in fib])
                                  for j, fib in enumerate(fibers)))
            mid = bc.tensor_unit(base, [M[y] for y in idx.mids]).labels
            bvals = [carrier.value(Corolla(tuple(c.inputs[i] for i in fib), y)).labels
                     for fib, y in zip(fibers, idx.mids)]
            oval = carrier.value(Corolla(idx.mids, c.output)).labels
            plans[key] = (fibers, ins, block_in, rows, mid, bvals, oval)
        return plans[key]

    def gamma(c, idx, blocks, outer):
        fibers, ins, block_in, rows, mid, bvals, oval = plan(c, idx)
        if base == bc.FINSET:
            bfun = [bl.decode(b) for bl, b in zip(bvals, blocks)]
            ofun = oval.decode(outer)
            table = [ofun[mid.encode([bfun[j][r] for j, r in enumerate(row)])]
                     for row in rows]
            return carrier.value(c).labels.encode(table)
        # matrix units compose to a matrix unit or to zero
        ys, ins_parts = [], {}
        for j, (fib, y, b) in enumerate(zip(fibers, idx.mids, blocks)):
            ny = len(M[y])
            src_j, tgt_j = divmod(b, ny)
            ys.append(tgt_j)
            for p, v in zip(fib, block_in[j].decode(src_j)):
                ins_parts[p] = v
        nz = len(M[c.output])
        o_src, o_tgt = divmod(outer, nz)
        if mid.encode(ys) != o_src:
            return {}
        a = ins.encode([ins_parts[i] for i in range(c.arity)])
        return {a * nz + o_tgt: Fraction(1)}

    units = {}
    for x in colors:
        n = len(M[x])
        h = value(Corolla((x,), x))
        if base == bc.FINSET:
            units[x] = h.labels.encode(list(range(n)))
        else:
            units[x] = {i * n + i: Fraction(1) for i in range(n)}
    return Operad(carrier, units, gamma, name="End")


def evaluate(E, M, c, phi, elems):
    """Value of ``φ ∈ End(M)(c)`` (a basis element) at basis inputs."""
    a = bc.tensor_unit(M.base, [M[x] for x in c.inputs]).labels.encode(list(elems))
    if M.base == bc.FINSET:
        return E.value(c).labels.decode(phi)[a]
    nz = len(M[c.output])
    src, tgt = divmod(phi, nz)
    return {tgt: Fraction(1)} if src == a else {}


def algebra_from_map(phi, M):
    """Uncurry an operad map ``O -> End(M)`` to an action on ``M``."""
    O, E = phi.source, phi.target

    def action(c, elems, o):
        img = phi.component(c)(o)
        if M.base == bc.FINSET:
            return evaluate(E, M, c, img, elems)
        a = bc.tensor_unit(M.base, [M[x] for x in c.inputs]).labels.encode(list(elems))
        nz = len(M[c.output])
        out = {}
        for k, x in img.items():
            src, tgt = divmod(k, nz)
            if src == a:
                out[tgt] = out.get(tgt, 0) + x
        return out

    return AlgebraStructure(O, M, action, name="uncurried")


def map_from_algebra(A, arity_bound):
    """Curry an action into an operad map ``O -> End(M)``."""
    O, M = A.operad, A.carrier
    E = endomorphism_operad(M, arity_bound)

    def component(c):
        return bc.curry(_swap_last(A, c), O.value(c),
                        bc.tensor_unit(M.base, [M[x] for x in c.inputs]))

    return OperadMap(O, E, component)


def _swap_last(A, c):
    """The action as ``O(c) ⊗ (M(x_1) ⊗ ... ⊗ M(x_n)) -> M(z)``."""
    O, M = A.operad, A.carrier
    ins = bc.tensor_unit(M.base, [M[x] for x in c.inputs])
    src = bc.tensor(O.value(c), ins)
    n = c.arity

    def fn(i):
        o, a = src.labels.decode(i)
        return A.act(c, ins.labels.decode(a) if n else (), o)

    return bc.BaseMorphism(src, M[c.output], fn=fn)


class Correspondence:
    def __init__(self, maps, algebras, curried, arity_bound):
        self.maps = maps
        self.algebras = algebras
        self.curried = curried
        self.arity_bound = arity_bound

    @property
    def bijective(self):
        alg_tables = [A.table(self.arity_bound) for A in self.algebras]
        return (len(set(self.curried)) == len(self.curried)
                and set(self.curried) == set(alg_tables)
                and len(set(alg_tables)) == len(alg_tables))

    def to_json(self):
        return {"operad_maps": len(self.maps), "algebras": len(self.algebras),
                "bijective": self.bijective}


def algebra_map_correspondence(O, M, arity_bound):
    """Operad maps ``O -> End(M)`` versus algebra structures on ``M``.

    Both sides are enumerated independently; maps are uncurried and the
    resulting action tables compared with the enumerated algebras.
    """
    if O.base != bc.FINSET:
        raise InfiniteEnumeration("the correspondence is only enumerated over finset")
    E = endomorphism_operad(M, arity_bound)
    maps = enumerate_operad_maps(O, E, arity_bound)
    algebras = enumerate_algebras(O, M, arity_bound)
    curried = [algebra_from_map(phi, M).table(arity_bound) for phi in maps]
    return Correspondence(maps, algebras, curried, arity_bound)


def canonical_nullary_map(O, arity_bound=None):
    """``O -> End(Z(O))`` by currying the action on nullary operations."""
    bound = O.arity_bound if arity_bound is None else arity_bound
    return map_from_algebra(nullary_algebra(O), bound)


def pullback_end_comparison(f, M, arity_bound):
    """``f*End(M) -> End(f*M)``: both sides have the same values.

    Returns the map and the verdict that every component is an identity
    between equal objects.
    """
    E = endomorphism_operad(M, arity_bound)
    fE = pullback_operad(f, E)
    fM = ColorFamily(f.source, {x: M[f(x)] for x in f.source}, M.base)
    E2 = endomorphism_operad(fM, arity_bound)

    def component(c):
        return bc.BaseMorphism(fE.value(c), E2.value(c), fn=lambda i: bc.element(E2.value(c), i))

    phi = OperadMap(fE, E2, component)

    def verdict():
        for n in range(arity_bound + 1):
            for c in fE.carrier.corollas(n):
                if fE.value(c) != E2.value(c):
                    return False
        return True

    return phi, verdict()


def cartesian_operad(family, arity_bound):
    """Finite sets as colors, ``Map(X_1 × ... × X_n, Y)`` as operations.

    Built directly from Cartesian products and function tables: a
    function is its value tuple over the product in lexicographic order.
    """
    colors = tuple(range(len(family)))
    sets = [tuple(s) for s in family]

    point_cache = {}

    def points(c):
        if c.inputs not in point_cache:
            point_cache[c.inputs] = list(product(*[range(len(sets[x])) for x in c.inputs]))
        return point_cache[c.inputs]

    def value(c):
        tgt = [str(v) for v in sets[c.output]]
        return bc.BaseObject(bc.FINSET, bc.FunctionLabels(len(points(c)), tgt))

    def act(g, c):
        c2 = c.permuted(g)
        pts, pts2 = points(c), points(c2)
        where = {p: k for k, p in enumerate(pts)}
        src, tgt = value(c), value(c2)
        pull = [where[tuple(q[g[i]] for i in range(c.arity))] for q in pts2]
        return bc.BaseMorphism(
            src, tgt, fn=lambda i: tgt.labels.encode([src.labels.decode(i)[k] for k in pull]))

    plans = {}

    def plan(c, idx):
        key = (c, idx)
        if key not in plans:
            fibers = idx.fibers()
            oc = Corolla(idx.mids, c.output)
            opts = {p: k for k, p in enumerate(points(oc))}
            blabels = [carrier.value(Corolla(tuple(c.inputs[i] for i in fib), y)).labels
                       for fib, y in zip(fibers, idx.mids)]
            rows = []
            for p in points(c):
                rows.append(tuple(
                    {q: k for k, q in enumerate(points(
                        Corolla(tuple(c.inputs[i] for i in fib), y)))}[tuple(p[i] for i in fib)]
                    for fib, y in zip(fibers, idx.mids)))
            plans[key] = (blabels, carrier.value(oc).labels, opts, rows)
        return plans[key]

    def gamma(c, idx, blocks, outer):
        blabels, olabels, opts, rows = plan(c, idx)
        tabs = [bl.decode(b) for bl, b in zip(blabels, blocks)]
        ofun = olabels.decode(outer)
        out = [ofun[opts[tuple(tab[r] for tab, r in zip(tabs, row))]] for row in rows]
        return carrier.value(c).labels.encode(out)

    carrier = Collection(colors, bc.FINSET, value, act=act, arity_bound=arity_bound,
                         name="Cart")
    units = {x: value(Corolla((x,), x)).labels.encode(list(range(len(sets[x]))))
             for x in colors}
    return Operad(carrier, units, gamma, name="Cart")


def family_of_sets(family):
    """The inclusion family ``x ↦ X_x`` of a list of finite sets."""
    colors = tuple(range(len(family)))
    return ColorFamily(colors, {x: bc.finset([str(v) for v in family[x]]) for x in colors},
                       bc.FINSET)


def compare_cartesian(family, arity_bound, max_elements=2000, seed=0):
    """Agreement of the Cartesian and endomorphism operads of ``family``.

    Values and units are compared literally.  Permutation actions and
    composition are compared on every element when a domain has at most
    ``max_elements`` elements and on a seeded sample otherwise.  Composition
    is compared at sorted corollas and one factorisation per isomorphism
    class; both operads are equivariant, so this determines the rest.
    Returns ``(mismatches, exhaustive)``.
    """
    import random

    from .composition import block_corollas, outer_corolla
    from .groupoids import CompositionIndexGroupoid, transposition

    rng = random.Random(seed)
    C = cartesian_operad(family, arity_bound)
    E = endomorphism_operad(family_of_sets(family), arity_bound)
    bad = []
    exhaustive = True

    def elements(sizes):
        nonlocal exhaustive
        total = 1
        for s in sizes:
            total *= s
        if total == 0:
            return []
        if total <= max_elements:
            return product(*[range(s) for s in sizes])
        exhaustive = False
        return [tuple(rng.randrange(s) for s in sizes) for _ in range(max_elements)]

    if C.units != E.units:
        bad.append(("units",))
    for n in range(arity_bound + 1):
        for c in C.carrier.corollas(n):
            if C.value(c) != E.value(c):
                bad.append(("value", str(c)))
                continue
            size = len(C.value(c))
            for i in range(n - 1):
                t = transposition(n, i)
                ca, ea = C.act(t, c), E.act(t, c)
                if any(ca(e) != ea(e) for (e,) in elements([size])):
                    bad.append(("action", str(c), t))
            if c != sort_corolla(c, C.carrier.color_index)[0]:
                continue
            for idx in CompositionIndexGroupoid(n, C.colors, arity_bound).components():
                sizes = ([len(C.value(b)) for b in block_corollas(c, idx)]
                         + [len(C.value(outer_corolla(c, idx)))])
                for parts in elements(sizes):
                    if (C.gamma(c, idx, parts[:-1], parts[-1])
                            != E.gamma(c, idx, parts[:-1], parts[-1])):
                        bad.append(("gamma", str(c), idx))
                        break
    return bad, exhaustive
