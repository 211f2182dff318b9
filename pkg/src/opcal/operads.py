"""Operads as monoids for the composition product.

An operad stores its composition on ordered representatives: for each
target corolla ``c`` and factorisation ``idx`` of ``c`` a map

    γ: ⊗_j O(x_{f^-1(j)}; y_j) ⊗ O(y_1..y_m; z) -> O(c)

given on basis elements.  Equivariance is not assumed; it is what the
descent check verifies, and the monoid multiplication ``O ⊙ O -> O`` is
obtained from the γ family by descent.
"""

import random
from dataclasses import dataclass, field
from itertools import permutations, product

from . import base_cat as bc
from .collection import (
    Collection,
    CollectionMap,
    ColorMap,
    NotMono,
    pullback,
    pushforward_mono,
)
from .composition import (
    CompositionDiagram,
    block_corollas,
    compose,
    fiber_transport,
    outer_corolla,
)
from .groupoids import (
    CompositionIndex,
    CompositionIndexGroupoid,
    Corolla,
    closure,
    perm_inverse,
    permute,
    restricted_growth,
    sort_corolla,
    transposition,
    young_generators,
)


class InfiniteEnumeration(ValueError):
    pass


class Operad:
    """A collection with units and composition maps.

    ``units`` maps a color to an element of ``O(x; x)``; colors without a
    unit are allowed (pushforwards along non-surjective color maps are
    non-unital there).  ``gamma(c, idx, blocks, outer)`` takes basis
    indices and returns an element of ``O(c)``.
    """

    def __init__(self, carrier, units, gamma, name=None):
        self.carrier = carrier
        self.units = dict(units)
        self._gamma = gamma
        self.name = name or carrier.name

    def __repr__(self):
        return f"Operad({self.name}, colors={list(self.colors)}, base={self.base})"

    @property
    def colors(self):
        return self.carrier.colors

    @property
    def base(self):
        return self.carrier.base

    @property
    def arity_bound(self):
        return self.carrier.arity_bound

    @property
    def reduced(self):
        return self.carrier.reduced

    def value(self, c):
        return self.carrier.value(c)

    def act(self, g, c):
        return self.carrier.act(g, c)

    def unit(self, x):
        """``η_x: 1 -> O(x; x)``."""
        u = bc.unit(self.base)
        e = self.units[x]
        tgt = self.value(Corolla((x,), x))
        return bc.BaseMorphism(u, tgt, table=[e])

    def domain(self, c, idx):
        return bc.tensor_all([self.value(b) for b in block_corollas(c, idx)]
                             + [self.value(outer_corolla(c, idx))])

    def gamma(self, c, idx, blocks, outer):
        return self._gamma(c, idx, tuple(blocks), outer)

    def compose_elements(self, c, idx, blocks, outer):
        """γ extended multilinearly to arbitrary elements."""
        if self.base == bc.FINSET:
            return self._gamma(c, idx, tuple(blocks), outer)
        return bc.multi_apply(
            bc.VECTQ, lambda *ks: self._gamma(c, idx, ks[:-1], ks[-1]),
            list(blocks) + [outer])

    def comp(self, c, idx):
        """γ at ``(c, idx)`` as a morphism out of the ordered tensor product."""
        dom = self.domain(c, idx)
        dl = dom.labels
        m = idx.m
        return bc.BaseMorphism(
            dom, self.value(c),
            fn=lambda i: (lambda p: self._gamma(c, idx, p[:m], p[m]))(dl.decode(i)))


# ---------------------------------------------------------------------------
# builders


def _unit_elem(base):
    return 0 if base == bc.FINSET else {0: 1}


def commutative_operad(colors=("a",), base=bc.FINSET, arity_bound=4):
    """Every value is the unit object."""
    u = bc.unit(base)
    carrier = Collection(colors, base, lambda c: u, arity_bound=arity_bound, name="Com")
    return Operad(carrier, {x: _unit_elem(base) for x in colors},
                  lambda c, idx, blocks, outer: _unit_elem(base), name="Com")


def _order_label(w):
    return "[" + ",".join(str(i + 1) for i in w) + "]"


def associative_operad(base=bc.FINSET, arity_bound=4, color="a"):
    """Linear orders of the inputs, composed by substitution.

    ``O(n)`` has one basis element per ordering ``w`` (read the inputs
    ``w[0], w[1], ...``), so ``Σ_n`` acts freely.
    """
    orders = {}

    def _orders(n):
        if n not in orders:
            ws = sorted(permutations(range(n)))
            orders[n] = (ws, {w: i for i, w in enumerate(ws)})
        return orders[n]

    def value(c):
        ws, _ = _orders(c.arity)
        return bc.BaseObject(base, [_order_label(w) for w in ws])

    def act(g, c):
        ws, index = _orders(c.arity)
        src = value(c)
        if base == bc.FINSET:
            fn = lambda i: index[tuple(g[x] for x in ws[i])]
        else:
            fn = lambda i: {index[tuple(g[x] for x in ws[i])]: 1}
        return bc.BaseMorphism(src, src, fn=fn)

    def gamma(c, idx, blocks, outer):
        fibers = idx.fibers()
        ws_m, _ = _orders(idx.m)
        word = []
        for j in ws_m[outer]:
            wj = _orders(len(fibers[j]))[0][blocks[j]]
            word.extend(fibers[j][p] for p in wj)
        i = _orders(c.arity)[1][tuple(word)]
        return i if base == bc.FINSET else {i: 1}

    carrier = Collection((color,), base, value, act=act, arity_bound=arity_bound,
                         support=range(1, arity_bound + 1), name="Assoc")
    op = Operad(carrier, {color: _unit_elem(base)}, gamma, name="Assoc")
    op.orders = lambda n: _orders(n)[0]
    return op


def unit_operad(colors=("a",), base=bc.FINSET):
    """The trivial operad: only identities."""
    from .collection import unit_collection

    carrier = unit_collection(colors, base)
    return Operad(carrier, {x: _unit_elem(base) for x in colors},
                  lambda c, idx, blocks, outer: _unit_elem(base), name="1")


# free operads ---------------------------------------------------------------

BOTTOM = "⊥"


def _tree_key(t):
    if isinstance(t, int):
        return (0, t)
    return (1, tuple(_tree_key(ch) for ch in t[2]), str(t[0]), t[1])


def _tree_size(t):
    if isinstance(t, int):
        return 0
    return 1 + sum(_tree_size(ch) for ch in t[2])


def _tree_leaves(t):
    if isinstance(t, int):
        return (t,)
    return tuple(x for ch in t[2] for x in _tree_leaves(ch))


class FreeOperad(Operad):
    """Free operad on a collection of generators.

    Elements are rooted trees whose vertices carry generator elements and
    whose leaves are the inputs.  Composition grafts trees into leaves.
    With ``size_bound`` the trees with more vertices than the bound are
    collapsed to a single absorbing element ``⊥`` at each corolla; the
    result is still an operad (the quotient by an ideal).
    """

    def __init__(self, generators, arity_bound, size_bound=None):
        if generators.base != bc.FINSET:
            raise ValueError("free operads are built over finset")
        low = [k for k in generators.support if k < 2]
        if size_bound is None and low:
            raise ValueError("nullary or unary generators need a size_bound")
        self.gens = generators
        self.size_bound = size_bound
        self._trees = {}
        self._canon = {}
        colors = generators.colors
        carrier = Collection(colors, bc.FINSET, self._value, act=self._act,
                             arity_bound=arity_bound, name="Free")
        units = {x: self._index(Corolla((x,), x))[0][0] for x in colors}
        super().__init__(carrier, units, self._gamma_impl, name="Free")

    # canonical forms
    def canon(self, t):
        if isinstance(t, int):
            return t
        hit = self._canon.get(t)
        if hit is not None:
            return hit
        cg, gi, children = t
        children = tuple(self.canon(ch) for ch in children)
        best = None
        for s in permutations(range(cg.arity)):
            c2 = cg.permuted(s)
            gi2 = self.gens.act(s, cg)(gi)
            ch2 = permute(s, children)
            cand = (c2, gi2, ch2)
            key = (tuple(_tree_key(x) for x in ch2), str(c2), gi2)
            if best is None or key < best[0]:
                best = (key, cand)
        self._canon[t] = best[1]
        return best[1]

    def _gen_corollas(self, out, k):
        from .groupoids import all_corollas

        for cg in all_corollas(self.gens.colors, k, [out]):
            if len(self.gens.value(cg)):
                yield cg

    def _build(self, leaves, colors_of, out, budget, memo):
        key = (leaves, out, budget)
        if key in memo:
            return memo[key]
        res = set()
        if len(leaves) == 1 and colors_of[leaves[0]] == out:
            res.add(leaves[0])
        if budget > 0:
            ks = [k for k in sorted(self.gens.support)
                  if self.gens.arity_bound is None or k <= self.gens.arity_bound]
            for k in ks:
                if k == 0 and leaves:
                    continue
                for cg in self._gen_corollas(out, k):
                    for assign in product(range(k), repeat=len(leaves)):
                        parts = [tuple(l for l, a in zip(leaves, assign) if a == j)
                                 for j in range(k)]
                        if k > 0 and any(not p for p in parts) and 0 not in self.gens.support:
                            continue
                        subs = [self._build(p, colors_of, cg.inputs[j], budget - 1, memo)
                                for j, p in enumerate(parts)]
                        for combo in product(*subs):
                            if 1 + sum(_tree_size(x) for x in combo) > budget:
                                continue
                            for gi in range(len(self.gens.value(cg))):
                                res.add(self.canon((cg, gi, combo)))
        memo[key] = res
        return res

    def _budget(self, n):
        if self.size_bound is not None:
            return self.size_bound
        return max(n - 1, 0) if n else 0

    def _index(self, c):
        if c not in self._trees:
            colors_of = dict(enumerate(c.inputs))
            trees = self._build(tuple(range(c.arity)), colors_of, c.output,
                                self._budget(c.arity), {})
            trees = sorted(trees, key=_tree_key)
            if self.size_bound is not None:
                trees.append(BOTTOM)
            self._trees[c] = (trees, {t: i for i, t in enumerate(trees)})
        return self._trees[c][1], self._trees[c][0]

    def tree_label(self, t):
        if t == BOTTOM:
            return BOTTOM
        if isinstance(t, int):
            return f"x{t + 1}"
        cg, gi, children = t
        name = self.gens.value(cg).labels[gi]
        return name + "(" + ",".join(self.tree_label(ch) for ch in children) + ")"

    def trees(self, c):
        return self._index(c)[1]

    def _value(self, c):
        return bc.finset([self.tree_label(t) for t in self.trees(c)])

    def _relabel(self, t, mapping):
        if isinstance(t, int):
            return mapping[t]
        return (t[0], t[1], tuple(self._relabel(ch, mapping) for ch in t[2]))

    def _act(self, g, c):
        index, trees = self._index(c)
        c2 = c.permuted(g)
        index2, _ = self._index(c2)

        def fn(i):
            t = trees[i]
            if t == BOTTOM:
                return index2[BOTTOM]
            return index2[self.canon(self._relabel(t, g))]

        return bc.BaseMorphism(self.value(c), self.value(c2), fn=fn)

    def graft(self, outer, blocks):
        """Substitute ``blocks[j]`` for leaf ``j`` of ``outer``."""
        if isinstance(outer, int):
            return blocks[outer]
        return (outer[0], outer[1], tuple(self.graft(ch, blocks) for ch in outer[2]))

    def _gamma_impl(self, c, idx, blocks, outer):
        index, _ = self._index(c)
        fibers = idx.fibers()
        bts = []
        for j, b in enumerate(block_corollas(c, idx)):
            t = self._index(b)[1][blocks[j]]
            if t == BOTTOM:
                return index[BOTTOM]
            bts.append(self._relabel(t, dict(enumerate(fibers[j]))))
        ot = self._index(outer_corolla(c, idx))[1][outer]
        if ot == BOTTOM:
            return index[BOTTOM]
        t = self.graft(ot, bts)
        if self.size_bound is not None and _tree_size(t) > self.size_bound:
            return index[BOTTOM]
        return index[self.canon(t)]


def free_operad(generators, arity_bound=4, size_bound=None):
    return FreeOperad(generators, arity_bound, size_bound)


def generator_collection(colors, entries, arity_bound=None):
    """Generators with a free permutation action.

    ``entries`` maps a sorted corolla to a list of names; every permuted
    corolla gets the permuted copies ``name·g``.
    """
    colors = tuple(colors)
    cidx = {x: i for i, x in enumerate(colors)}
    bound = max((c.arity for c in entries), default=0) if arity_bound is None else arity_bound

    def orbit_name(name, c, g):
        return name if all(i == x for i, x in enumerate(g)) else f"{name}{''.join(str(v + 1) for v in g)}"

    def lookup(c):
        rep, g = sort_corolla(c, cidx)
        names = entries.get(rep, [])
        if not names:
            return [], rep, g
        aut = closure(young_generators(rep.inputs), rep.arity)
        return names, rep, g, aut

    def value(c):
        rep, g = sort_corolla(c, cidx)
        names = entries.get(rep, [])
        aut = closure(young_generators(rep.inputs), rep.arity)
        inv = perm_inverse(g)
        labels = []
        for nm in names:
            for a in aut:
                # element (nm, a) of the rep, transported back to c
                labels.append(orbit_name(nm, c, tuple(inv[x] for x in a)))
        return bc.finset(labels)

    def act(g, c):
        # elements are pairs (name, a in Aut(rep)); c = rep·g^-1
        rep, s = sort_corolla(c, cidx)
        c2 = c.permuted(g)
        rep2, s2 = sort_corolla(c2, cidx)
        aut = closure(young_generators(rep.inputs), rep.arity)
        pos = {a: i for i, a in enumerate(aut)}
        k = len(aut)
        # x in c corresponds to (nm, a); g moves it to c2 where its rep
        # coordinate is s2 ∘ g ∘ s^-1 ∘ a
        t = tuple(s2[g[perm_inverse(s)[v]]] for v in range(c.arity))

        def fn(i):
            nm_i, ai = divmod(i, k)
            a = aut[ai]
            return nm_i * k + pos[tuple(t[v] for v in a)]

        return bc.BaseMorphism(value(c), value(c2), fn=fn)

    support = {c.arity for c, names in entries.items() if names}
    return Collection(colors, bc.FINSET, value, act=act, arity_bound=bound,
                      support=support, name="G")


# ---------------------------------------------------------------------------
# law checking


@dataclass
class LawReport:
    passed: bool = True
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    exhaustive: bool = True

    def fail(self, law, **detail):
        self.passed = False
        self.violations.append({"law": law, **{k: str(v) for k, v in detail.items()}})

    def count(self, law, k=1):
        self.counts[law] = self.counts.get(law, 0) + k

    def first(self):
        return self.violations[0] if self.violations else None

    def to_json(self):
        return {
            "passed": self.passed,
            "exhaustive": self.exhaustive,
            "counts": dict(sorted(self.counts.items())),
            "first_violation": self.first(),
            "violations": len(self.violations),
        }


def _element_tuples(sizes, cap, rng, report):
    total = 1
    for s in sizes:
        total *= s
    if total == 0:
        return []
    if total <= cap:
        return product(*[range(s) for s in sizes])
    report.exhaustive = False
    return [tuple(rng.randrange(s) for s in sizes) for _ in range(cap)]


def _elem(base, i):
    return i if base == bc.FINSET else {i: 1}


def _canonical_corollas(colors, n):
    from itertools import combinations_with_replacement

    for ms in combinations_with_replacement(colors, n):
        for z in colors:
            yield Corolla(ms, z)


def _all_indices(n, colors, bound, surjective):
    g = CompositionIndexGroupoid(n, colors, bound, surjective=surjective)
    return g.objects()


def _index_reps(n, colors, bound, surjective):
    g = CompositionIndexGroupoid(n, colors, bound, surjective=surjective)
    return g.components()


def _f_reps(n, m, surjective):
    """One ``f: n -> m`` per Σ_m-orbit of the underlying function."""
    ks = [m] if surjective else range(min(n, m) + 1)
    for k in ks:
        for f in restricted_growth(n, k):
            yield f


def _check_bound(O, arity_bound):
    b = O.arity_bound if arity_bound is None else arity_bound
    if b is None:
        b = O.carrier.max_arity()
    if O.arity_bound is not None:
        b = min(b, O.arity_bound)
    return b


def check_descent(O, arity_bound=None, max_elements=2000, seed=0, report=None,
                  raise_on_error=False):
    """γ is a cocone over factorisations and compatible with input permutations."""
    report = report or LawReport()
    rng = random.Random(seed)
    bound = _check_bound(O, arity_bound)
    base = O.base
    colors = O.colors
    for n in range(bound + 1):
        for c in O.carrier.corollas(n):
            D = CompositionDiagram(O.carrier, O.carrier, c)
            out_c = O.value(c)
            for idx in _all_indices(n, colors, bound, O.reduced):
                dom = D.value(idx)
                if not len(dom):
                    continue
                blocks = block_corollas(c, idx)
                tuples = list(_element_tuples(
                    [len(O.value(b)) for b in blocks] + [len(O.value(outer_corolla(c, idx)))],
                    max_elements, rng, report))
                dl = dom.labels
                # block relabelling
                for j in range(idx.m - 1):
                    s = transposition(idx.m, j)
                    idx2 = idx.relabel(s)
                    d_s = D.act(idx, s)
                    tl = D.value(idx2).labels
                    for parts in tuples:
                        e = dl.encode(parts)
                        lhs = _gamma_vec(O, c, idx2, tl, d_s(e))
                        rhs = O.gamma(c, idx, parts[:-1], parts[-1])
                        report.count("descent")
                        if lhs != rhs:
                            report.fail("descent", corolla=c, index=idx, arrow=s, element=dl[e])
                            if raise_on_error:
                                raise bc.DescentError((c, idx, s), f"element {dl[e]}")
                            break
                # input permutations
                for i in range(n - 1):
                    t = transposition(n, i)
                    c2 = c.permuted(t)
                    idx2 = idx.precompose(t)
                    maps = [O.act(fiber_transport(fib, t), b)
                            for fib, b in zip(idx.fibers(), blocks)]
                    maps.append(bc.identity(O.value(outer_corolla(c, idx))))
                    D2 = CompositionDiagram(O.carrier, O.carrier, c2)
                    tm = bc.tensor_maps(maps, source=dom, target=D2.value(idx2))
                    act_c = O.act(t, c)
                    tl = D2.value(idx2).labels
                    for parts in tuples:
                        e = dl.encode(parts)
                        lhs = _gamma_vec(O, c2, idx2, tl, tm(e))
                        rhs = act_c.apply(O.gamma(c, idx, parts[:-1], parts[-1]))
                        report.count("equivariance")
                        if lhs != rhs:
                            report.fail("equivariance", corolla=c, index=idx, arrow=t,
                                        element=dl[e])
                            if raise_on_error:
                                raise bc.DescentError((c, idx, t), f"element {dl[e]}")
                            break
            del out_c
    return report


def _gamma_vec(O, c, idx, labels, x):
    """γ applied to an element of the ordered tensor product."""
    m = idx.m
    if O.base == bc.FINSET:
        p = labels.decode(x)
        return O.gamma(c, idx, p[:m], p[m])
    out = {}
    for k, coeff in x.items():
        p = labels.decode(k)
        bc.vadd(out, O.gamma(c, idx, p[:m], p[m]), coeff)
    return out


def check_units(O, arity_bound=None, report=None):
    report = report or LawReport()
    bound = _check_bound(O, arity_bound)
    base = O.base
    for n in range(bound + 1):
        for c in O.carrier.corollas(n):
            if any(x not in O.units for x in c.inputs) or c.output not in O.units:
                continue
            left_idx = CompositionIndex(n, tuple(range(n)), c.inputs)
            right_idx = CompositionIndex(1, (0,) * n, (c.output,))
            if n > bound or 1 > bound:
                continue
            etas = [O.units[x] for x in c.inputs]
            for o in range(len(O.value(c))):
                e = _elem(base, o)
                report.count("unit")
                if O.compose_elements(c, left_idx, etas, e) != e:
                    report.fail("left unit", corolla=c, element=O.value(c).labels[o])
                if O.compose_elements(c, right_idx, [e], O.units[c.output]) != e:
                    report.fail("right unit", corolla=c, element=O.value(c).labels[o])
    return report


def two_level_instances(colors, n, bound, reduced):
    """Factorisations ``n -f-> m1 -h-> m2`` hitting every Σ_m1 × Σ_m2 orbit."""
    for m1 in range(bound + 1):
        for f in _f_reps(n, m1, reduced):
            for y in product(colors, repeat=m1):
                for m2 in range(bound + 1):
                    for h in _f_reps(m1, m2, reduced):
                        for w in product(colors, repeat=m2):
                            yield m1, f, y, m2, h, w


def check_associativity(O, arity_bound=None, max_elements=2000, seed=0, report=None):
    report = report or LawReport()
    rng = random.Random(seed)
    bound = _check_bound(O, arity_bound)
    colors = O.colors
    for n in range(bound + 1):
        for c in _canonical_corollas(colors, n):
            for m1, f, y, m2, h, w in two_level_instances(colors, n, bound, O.reduced):
                _check_assoc_instance(O, c, m1, f, y, m2, h, w, max_elements, rng, report)
    return report


def split_two_level(c, m1, f, y, m2, h, w):
    """Index data for both evaluation orders of a two-level composite."""
    idx_f = CompositionIndex(m1, f, y)
    mid_c = Corolla(y, c.output)
    idx_h = CompositionIndex(m2, h, w)
    hf = tuple(h[b] for b in f)
    idx_hf = CompositionIndex(m2, hf, w)
    inner = []
    for k in range(m2):
        J = tuple(j for j in range(m1) if h[j] == k)
        S = tuple(i for i in range(len(f)) if hf[i] == k)
        pos = {j: p for p, j in enumerate(J)}
        ck = Corolla(tuple(c.inputs[i] for i in S), w[k])
        idx_k = CompositionIndex(len(J), tuple(pos[f[i]] for i in S), tuple(y[j] for j in J))
        inner.append((J, ck, idx_k))
    return idx_f, mid_c, idx_h, idx_hf, inner


def _check_assoc_instance(O, c, m1, f, y, m2, h, w, cap, rng, report):
    base = O.base
    idx_f, mid_c, idx_h, idx_hf, inner = split_two_level(c, m1, f, y, m2, h, w)
    inner_cs = block_corollas(c, idx_f)
    mid_cs = block_corollas(mid_c, idx_h)
    top_c = Corolla(w, c.output)
    sizes = ([len(O.value(b)) for b in inner_cs] + [len(O.value(b)) for b in mid_cs]
             + [len(O.value(top_c))])
    for parts in _element_tuples(sizes, cap, rng, report):
        os_ = [_elem(base, p) for p in parts[:m1]]
        ps = [_elem(base, p) for p in parts[m1:m1 + m2]]
        q = _elem(base, parts[-1])
        r = O.compose_elements(mid_c, idx_h, ps, q)
        lhs = O.compose_elements(c, idx_f, os_, r)
        ss = [O.compose_elements(ck, idx_k, [os_[j] for j in J], ps[k])
              for k, (J, ck, idx_k) in enumerate(inner)]
        rhs = O.compose_elements(c, idx_hf, ss, q)
        report.count("associativity")
        if lhs != rhs:
            report.fail("associativity", corolla=c, f=f, h=h, y=y, w=w, element=parts)
            return


def check_operad(O, arity_bound=None, max_elements=2000, seed=0):
    """Descent/equivariance, unit and associativity laws up to ``arity_bound``.

    ``exhaustive`` is false when some instance had more element tuples
    than ``max_elements`` and was sampled instead.
    """
    report = LawReport()
    for fail in O.carrier.check_functorial(_check_bound(O, arity_bound)):
        report.fail("functoriality", detail=fail)
    check_descent(O, arity_bound, max_elements, seed, report)
    check_units(O, arity_bound, report)
    check_associativity(O, arity_bound, max_elements, seed, report)
    return report


def assemble_multiplication(O, m_bound=None):
    """``μ: O ⊙ O -> O`` grade-wise, induced from γ by descent."""
    from .composition import GradedMap

    if m_bound is None and not O.reduced:
        m_bound = O.arity_bound
    prod_ = compose(O.carrier, O.carrier, m_bound)

    def grade_map(c, m):
        col = prod_.colimit(c, m)
        return bc.descend(col, lambda idx: O.comp(c, idx), O.value(c), check="full")

    return GradedMap(prod_, None, grade_map)


# ---------------------------------------------------------------------------
# operad maps


class OperadMap:
    """A collection map compatible with units and composition."""

    def __init__(self, source, target, component):
        self.source = source
        self.target = target
        self.map = CollectionMap(source.carrier, target.carrier, component)

    def component(self, c):
        return self.map.component(c)

    __call__ = component

    def signature(self, arity_bound):
        """Images of every element at every sorted corolla, for comparisons."""
        out = []
        for n in range(arity_bound + 1):
            for c in _canonical_corollas(self.source.colors, n):
                out.append(tuple(self.component(c).table()))
        return tuple(out)


def identity_operad_map(O):
    return OperadMap(O, O, lambda c: bc.identity(O.value(c)))


def compose_operad_maps(psi, phi):
    """``ψ ∘ φ``."""
    return OperadMap(phi.source, psi.target,
                     lambda c: psi.component(c).after(phi.component(c)))


def check_operad_map(phi, arity_bound=None, max_elements=2000, seed=0):
    O, P = phi.source, phi.target
    report = LawReport()
    rng = random.Random(seed)
    bound = _check_bound(O, arity_bound)
    for fail in phi.map.check_natural(bound):
        report.fail("naturality", detail=fail)
    for x, e in O.units.items():
        report.count("unit")
        if x not in P.units or phi.component(Corolla((x,), x)).apply(e) != P.units[x]:
            report.fail("unit", color=x)
    for n in range(bound + 1):
        for c in _canonical_corollas(O.colors, n):
            phic = phi.component(c)
            for idx in _index_reps(n, O.colors, bound, O.reduced):
                blocks = block_corollas(c, idx)
                oc = outer_corolla(c, idx)
                sizes = [len(O.value(b)) for b in blocks] + [len(O.value(oc))]
                bmaps = [phi.component(b) for b in blocks]
                omap = phi.component(oc)
                for parts in _element_tuples(sizes, max_elements, rng, report):
                    els = [_elem(O.base, p) for p in parts]
                    lhs = phic.apply(O.compose_elements(c, idx, els[:-1], els[-1]))
                    rhs = P.compose_elements(
                        c, idx, [m.apply(e) for m, e in zip(bmaps, els[:-1])],
                        omap.apply(els[-1]))
                    report.count("composition")
                    if lhs != rhs:
                        report.fail("composition", corolla=c, index=idx, element=parts)
                        break
    return report


class _Unassigned(Exception):
    pass


class _EquivariantTable:
    """Orbit bookkeeping for equivariant maps out of an operad.

    Unknowns are indexed by (sorted corolla, orbit representative) and the
    value at any (corolla, element) is recovered by transport.
    """

    def __init__(self, O, bound):
        self.O = O
        self.cidx = O.carrier.color_index
        self.vars = []
        self.var_pos = {}
        self.orbit_of = {}
        self.stabilisers = {}
        self._act_cache = {}
        for n in range(bound + 1):
            for c in _canonical_corollas(O.colors, n):
                size = len(O.value(c))
                if not size:
                    continue
                aut = closure(young_generators(c.inputs), n)
                acts = [self._act(O.carrier, a, c) for a in aut]
                seen = {}
                for o in range(size):
                    if o in seen:
                        continue
                    for a, m in zip(aut, acts):
                        img = m(o)
                        if img not in seen:
                            seen[img] = (o, a)
                    self.var_pos[(c, o)] = len(self.vars)
                    self.vars.append((c, o))
                    self.stabilisers[(c, o)] = [a for a, m in zip(aut, acts) if m(o) == o]
                self.orbit_of[c] = seen

    def _act(self, coll, g, c):
        key = (id(coll), g, c)
        m = self._act_cache.get(key)
        if m is None:
            m = self._act_cache[key] = coll.act(g, c)
        return m

    def locate(self, c, o):
        """``(var, a, s)``: ``o = s^-1 · (a · rep)`` with ``c = rep corolla · s^-1``."""
        rep_c, s = sort_corolla(c, self.cidx)
        o2 = self._act(self.O.carrier, s, c)(o)
        r, a = self.orbit_of[rep_c][o2]
        return (rep_c, r), a, s, rep_c

    def evaluate(self, target, assignment, c, o):
        """Image of ``o ∈ O(c)`` in ``target(c)`` given images of representatives."""
        var, a, s, rep_c = self.locate(c, o)
        pos = self.var_pos[var]
        img = assignment[pos]
        if img is None:
            raise _Unassigned
        img = self._act(target, a, rep_c)(img)
        return self._act(target, perm_inverse(s), rep_c)(img)

    def var_of(self, c, o):
        return self.var_pos[self.locate(c, o)[0]]

    def candidates(self, target, var):
        c, o = self.vars[var]
        stab = self.stabilisers[(c, o)]
        acts = [self._act(target, a, c) for a in stab]
        return [p for p in range(len(target.value(c))) if all(m(p) == p for m in acts)]


def _backtrack(n_vars, candidates, buckets, check):
    assignment = [None] * n_vars
    out = []

    def rec(t):
        if t == n_vars:
            out.append(list(assignment))
            return
        for p in candidates[t]:
            assignment[t] = p
            if all(check(con, assignment) for con in buckets[t]):
                rec(t + 1)
        assignment[t] = None

    rec(0)
    return out


def enumerate_operad_maps(O, P, arity_bound=None):
    """All operad maps ``O -> P`` up to ``arity_bound`` (finset only).

    Unknowns are the images of orbit representatives; unit and composition
    constraints are checked as soon as all their unknowns are assigned.
    """
    if O.base != bc.FINSET or P.base != bc.FINSET:
        raise InfiniteEnumeration("map enumeration is only finite over finset")
    if tuple(O.colors) != tuple(P.colors):
        raise ValueError("operads over different colors")
    bound = _check_bound(O, arity_bound)
    table = _EquivariantTable(O, bound)
    nv = len(table.vars)
    cands = [table.candidates(P.carrier, v) for v in range(nv)]
    constraints = []
    for x, e in O.units.items():
        c = Corolla((x,), x)
        if x not in P.units:
            constraints.append(((table.var_of(c, e),), ("nounit",)))
        else:
            constraints.append(((table.var_of(c, e),), ("unit", c, e, P.units[x])))
    for n in range(bound + 1):
        for c in _canonical_corollas(O.colors, n):
            for idx in _index_reps(n, O.colors, bound, O.reduced):
                blocks = block_corollas(c, idx)
                oc = outer_corolla(c, idx)
                sizes = [len(O.value(b)) for b in blocks] + [len(O.value(oc))]
                if 0 in sizes:
                    continue
                for parts in product(*[range(s) for s in sizes]):
                    res = O.gamma(c, idx, parts[:-1], parts[-1])
                    vs = {table.var_of(b, p) for b, p in zip(blocks, parts[:-1])}
                    vs.add(table.var_of(oc, parts[-1]))
                    vs.add(table.var_of(c, res))
                    constraints.append((tuple(vs), ("gamma", c, idx, blocks, oc, parts, res)))
    buckets = [[] for _ in range(nv)]
    for vs, con in constraints:
        buckets[max(vs)].append(con)

    def check(con, assignment):
        kind = con[0]
        if kind == "nounit":
            return False
        if kind == "unit":
            _, c, e, target = con
            return table.evaluate(P.carrier, assignment, c, e) == target
        _, c, idx, blocks, oc, parts, res = con
        lhs = table.evaluate(P.carrier, assignment, c, res)
        bimgs = [table.evaluate(P.carrier, assignment, b, p) for b, p in zip(blocks, parts[:-1])]
        oimg = table.evaluate(P.carrier, assignment, oc, parts[-1])
        return lhs == P.gamma(c, idx, bimgs, oimg)

    solutions = _backtrack(nv, cands, buckets, check)
    maps = []
    for sol in solutions:
        def component(c, sol=sol):
            return bc.BaseMorphism(
                O.value(c), P.value(c),
                fn=lambda o: table.evaluate(P.carrier, sol, c, o))
        maps.append(OperadMap(O, P, component))
    return maps


# ---------------------------------------------------------------------------
# change of colors


def pushforward_operad(i, O):
    """``i_!O`` along an injective color map; units only at image colors."""
    if not i.injective:
        raise NotMono("pushforward_operad needs an injective color map")
    carrier = pushforward_mono(i, O.carrier)
    back = {i(x): x for x in i.source}

    def pre(c):
        return Corolla(tuple(back[y] for y in c.inputs), back[c.output])

    def gamma(c, idx, blocks, outer):
        idx_x = CompositionIndex(idx.m, idx.f, tuple(back[y] for y in idx.mids))
        return O.gamma(pre(c), idx_x, blocks, outer)

    units = {i(x): e for x, e in O.units.items()}
    return Operad(carrier, units, gamma, name=f"i!{O.name}")


def pullback_operad(f, O):
    """``f*O``: re-index along ``f``."""
    carrier = pullback(f, O.carrier)

    def gamma(c, idx, blocks, outer):
        idx_y = CompositionIndex(idx.m, idx.f, tuple(f(x) for x in idx.mids))
        return O.gamma(f.corolla(c), idx_y, blocks, outer)

    units = {x: O.units[f(x)] for x in f.source if f(x) in O.units}
    return Operad(carrier, units, gamma, name=f"f*{O.name}")
