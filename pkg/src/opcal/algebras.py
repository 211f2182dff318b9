"""Algebras over an operad: families with equivariant action maps.

An action is stored on ordered representatives: for a corolla
``c = (y_1..y_m; z)`` it sends basis elements ``a_i ∈ M(y_i)`` and
``o ∈ O(c)`` to an element of ``M(z)``.
"""

import random
from itertools import product

from . import base_cat as bc
from .collection import ColorFamily
from .composition import TruncationRequired
from .groupoids import (
    CompositionIndex,
    Corolla,
    CorollaGroupoid,
    GroupoidDiagram,
    closure,
    permute,
    sort_corolla,
    transposition,
    young_generators,
)
from .operads import (
    InfiniteEnumeration,
    LawReport,
    _backtrack,
    _canonical_corollas,
    _element_tuples,
    _elem,
    _f_reps,
    pullback_operad,
)


class Undefined(Exception):
    """The action leaves the computed truncation."""


class UnboundedSupport(ValueError):
    pass


class AlgebraStructure:
    def __init__(self, operad, carrier, action, name=None):
        if tuple(carrier.colors) != tuple(operad.colors):
            raise ValueError("carrier and operad have different colors")
        self.operad = operad
        self.carrier = carrier
        self._action = action
        self.name = name

    def __repr__(self):
        return f"AlgebraStructure({self.name or '?'} over {self.operad.name})"

    @property
    def colors(self):
        return self.operad.colors

    @property
    def base(self):
        return self.operad.base

    def act(self, c, elems, o):
        """Action on basis elements; may raise :class:`Undefined`."""
        return self._action(c, tuple(elems), o)

    def act_elements(self, c, elems, o):
        if self.base == bc.FINSET:
            return self._action(c, tuple(elems), o)
        return bc.multi_apply(bc.VECTQ, lambda *ks: self._action(c, ks[:-1], ks[-1]),
                              list(elems) + [o])

    def action_map(self, c):
        """``M(y_1) ⊗ ... ⊗ M(y_m) ⊗ O(c) -> M(z)``."""
        src = bc.tensor_all([self.carrier[y] for y in c.inputs] + [self.operad.value(c)])
        m = c.arity
        return bc.BaseMorphism(
            src, self.carrier[c.output],
            fn=lambda i: (lambda p: self._action(c, p[:m], p[m]))(src.labels.decode(i)))

    def table(self, arity_bound):
        """Action values at every sorted corolla, in product order.

        Entries that leave a truncated carrier are ``None``.
        """
        out = []
        for n in range(arity_bound + 1):
            for c in _canonical_corollas(self.colors, n):
                sizes = [len(self.carrier[y]) for y in c.inputs] + [len(self.operad.value(c))]
                row = []
                for parts in product(*[range(s) for s in sizes]):
                    try:
                        v = self.act(c, parts[:-1], parts[-1])
                    except Undefined:
                        row.append(None)
                        continue
                    row.append(v if self.base == bc.FINSET else tuple(sorted(v.items())))
                out.append(tuple(row))
        return tuple(out)


def _bound(A, arity_bound):
    b = arity_bound
    if A.operad.arity_bound is not None:
        b = A.operad.arity_bound if b is None else min(b, A.operad.arity_bound)
    if b is None:
        raise UnboundedSupport("an arity bound is required")
    return b


def check_algebra(A, arity_bound=None, max_elements=2000, seed=0):
    """Equivariance, unit and associativity of the action up to ``arity_bound``.

    Instances that leave a truncated carrier are skipped.
    """
    report = LawReport()
    rng = random.Random(seed)
    O, M, base = A.operad, A.carrier, A.base
    bound = _bound(A, arity_bound)
    for n in range(bound + 1):
        for c in O.carrier.corollas(n):
            sizes = [len(M[y]) for y in c.inputs] + [len(O.value(c))]
            tuples = list(_element_tuples(sizes, max_elements, rng, report))
            for i in range(n - 1):
                s = transposition(n, i)
                c2 = c.permuted(s)
                act_o = O.act(s, c)
                for parts in tuples:
                    try:
                        lhs = A.act_elements(c2, [_elem(base, a) for a in permute(s, parts[:-1])],
                                             act_o.apply(_elem(base, parts[-1])))
                        rhs = A.act(c, parts[:-1], parts[-1])
                    except Undefined:
                        continue
                    report.count("equivariance")
                    if lhs != rhs:
                        report.fail("equivariance", corolla=c, arrow=s, element=parts)
                        break
    for x, eta in O.units.items():
        if bound < 1:
            break
        c = Corolla((x,), x)
        for a in range(len(M[x])):
            try:
                v = A.act_elements(c, [_elem(base, a)], eta)
            except Undefined:
                continue
            report.count("unit")
            if v != _elem(base, a):
                report.fail("unit", color=x, element=M[x].labels[a])
    for n in range(bound + 1):
        for c in _canonical_corollas(A.colors, n):
            for m in range(bound + 1):
                for h in _f_reps(n, m, O.reduced):
                    for w in product(A.colors, repeat=m):
                        _check_algebra_assoc(A, c, m, h, w, max_elements, rng, report)
    return report


def _assoc_data(c, m, h, w):
    idx = CompositionIndex(m, h, w)
    fibers = idx.fibers()
    inner = [Corolla(tuple(c.inputs[i] for i in fib), w[k]) for k, fib in enumerate(fibers)]
    return idx, fibers, inner, Corolla(tuple(w), c.output)


def _check_algebra_assoc(A, c, m, h, w, cap, rng, report):
    O, M, base = A.operad, A.carrier, A.base
    idx, fibers, inner, top = _assoc_data(c, m, h, w)
    sizes = ([len(M[x]) for x in c.inputs] + [len(O.value(b)) for b in inner]
             + [len(O.value(top))])
    n = c.arity
    for parts in _element_tuples(sizes, cap, rng, report):
        a = parts[:n]
        ps = parts[n:n + m]
        q = parts[-1]
        try:
            mids = [A.act(b, [a[i] for i in fib], p) for b, fib, p in zip(inner, fibers, ps)]
            lhs = A.act_elements(top, mids, _elem(base, q))
            r = O.compose_elements(c, idx, [_elem(base, p) for p in ps], _elem(base, q))
            rhs = A.act_elements(c, [_elem(base, x) for x in a], r)
        except Undefined:
            continue
        report.count("associativity")
        if lhs != rhs:
            report.fail("associativity", corolla=c, h=h, w=w, element=parts)
            return


# ---------------------------------------------------------------------------
# free algebras


class GradedAlgebra(AlgebraStructure):
    """Free algebra truncated at a total degree.

    The degree-``n`` part at color ``z`` is the colimit over corollas
    ``(x_1..x_n; z)`` of ``M(x_1) ⊗ ... ⊗ M(x_n) ⊗ O(x; z)``.
    """

    def __init__(self, operad, family, degree_bound):
        if degree_bound < 0:
            raise ValueError("degree_bound must be non-negative")
        if operad.arity_bound is not None and operad.arity_bound < degree_bound:
            raise TruncationRequired(
                f"operad is only known up to arity {operad.arity_bound}")
        self.family = family
        self.degree_bound = degree_bound
        self._colims = {}
        O = operad
        base = O.base
        grades = {z: [self.grade(O, z, n) for n in range(degree_bound + 1)]
                  for z in O.colors}
        self.grades = grades
        self._offsets = {}
        values = {}
        for z in O.colors:
            offs, labels = [], []
            for n, col in enumerate(grades[z]):
                offs.append(len(labels))
                labels.extend(f"{n}:{lab}" for lab in col.obj.labels)
            self._offsets[z] = offs
            values[z] = bc.BaseObject(base, labels)
        super().__init__(O, ColorFamily(O.colors, values, base), self._free_action,
                         name="F")

    def grade(self, O, z, n):
        key = (z, n)
        if key not in self._colims:
            G = CorollaGroupoid(O.colors, (z,), n)
            M = self.family

            def value(c):
                return bc.tensor_all([M[x] for x in c.inputs] + [O.value(c)])

            def act(c, g):
                maps = [bc.identity(M[x]) for x in c.inputs]
                # permuting the tensor factors of M alongside the operation
                src = value(c)
                c2 = c.permuted(g)
                tgt = value(c2)
                oa = O.act(g, c)
                sl, tl = src.labels, tgt.labels

                def fn(i):
                    p = sl.decode(i)
                    new = list(permute(g, p[:n]))
                    img = oa(p[n])
                    if O.base == bc.FINSET:
                        return tl.encode(new + [img])
                    return {tl.encode(new + [k]): x for k, x in img.items()}

                del maps
                return bc.BaseMorphism(src, tgt, fn=fn)

            self._colims[key] = bc.groupoid_colimit(G, GroupoidDiagram(O.base, value, act))
        return self._colims[key]

    def locate(self, z, i):
        """``(degree, representative corolla, parts)`` of basis element ``i``."""
        offs = self._offsets[z]
        n = max(k for k, off in enumerate(offs) if off <= i and
                i - off < len(self.grades[z][k].obj))
        col = self.grades[z][n]
        rep, e = col.section(i - offs[n])
        return n, rep, col.diagram.value(rep).labels.decode(e)

    def degree(self, z, i):
        return self.locate(z, i)[0]

    def include(self, z, n, rep_corolla, parts):
        """Class of ``parts ∈ M(x)^⊗ ⊗ O(x; z)`` (``parts[-1]`` may be a vector)."""
        col = self.grades[z][n]
        labels = col.diagram.value(rep_corolla).labels
        last = parts[-1]
        if self.base == bc.FINSET:
            elem = labels.encode(list(parts[:-1]) + [last])
            local = col.project(rep_corolla, elem)
            return local + self._offsets[z][n]
        vec = {labels.encode(list(parts[:-1]) + [k]): x for k, x in last.items()}
        local = col.project(rep_corolla, vec)
        return {k + self._offsets[z][n]: x for k, x in local.items()}

    def unit_map(self, x):
        """``M(x) -> F(M)(x)``: ``a ↦ [a; η_x]`` in degree 1."""
        eta = self.operad.units[x]
        c = Corolla((x,), x)
        src = self.family[x]
        return bc.BaseMorphism(src, self.carrier[x],
                               fn=lambda a: self.include(x, 1, c, (a, eta)))

    def _free_action(self, c, elems, o):
        O = self.operad
        parts = [self.locate(y, e) for y, e in zip(c.inputs, elems)]
        total = sum(n for n, _, _ in parts)
        if total > self.degree_bound:
            raise Undefined(f"degree {total} exceeds {self.degree_bound}")
        xs, a_all, f, ops = [], [], [], []
        for j, (n, rep, p) in enumerate(parts):
            xs.extend(rep.inputs)
            a_all.extend(p[:n])
            f.extend([j] * n)
            ops.append(_elem(self.base, p[n]))
        big = Corolla(tuple(xs), c.output)
        idx = CompositionIndex(c.arity, tuple(f), c.inputs)
        r = O.compose_elements(big, idx, ops, _elem(self.base, o))
        return self.include(c.output, total, big, tuple(a_all) + (r,))

    def check_grading(self, arity_bound=None):
        """Grade additivity of every defined action entry on basis elements."""
        bad = []
        bound = _bound(self, arity_bound)
        for n in range(bound + 1):
            for c in self.operad.carrier.corollas(n):
                sizes = [len(self.carrier[y]) for y in c.inputs] + [len(self.operad.value(c))]
                for parts in product(*[range(s) for s in sizes]):
                    want = sum(self.degree(y, e) for y, e in zip(c.inputs, parts[:-1]))
                    try:
                        v = self.act(c, parts[:-1], parts[-1])
                    except Undefined:
                        continue
                    keys = [v] if self.base == bc.FINSET else list(v)
                    if any(self.degree(c.output, k) != want for k in keys):
                        bad.append((c, parts))
        return bad

    def grade_sizes(self, z):
        return [len(col.obj) for col in self.grades[z]]


def free_algebra(O, M, degree_bound):
    return GradedAlgebra(O, M, degree_bound)


# ---------------------------------------------------------------------------
# hom-set enumeration and the adjunction


def family_maps(M, N):
    """All families of functions ``M(x) -> N(x)``, as tuples of tables."""
    per_color = [list(product(range(len(N[x])), repeat=len(M[x]))) for x in M.colors]
    return [tuple(t) for t in product(*per_color)]


def enumerate_algebra_maps(F, A, arity_bound=None):
    """Families ``φ(z): F(z) -> A(z)`` commuting with every defined action."""
    if F.base != bc.FINSET or A.base != bc.FINSET:
        raise InfiniteEnumeration("algebra maps are only enumerated over finset")
    O = F.operad
    bound = _bound(F, arity_bound)
    degree = getattr(F, "degree", lambda z, i: 0)
    gens = set()
    if isinstance(F, GradedAlgebra):
        for x in O.colors:
            if x in O.units:
                u = F.unit_map(x)
                gens.update((x, u(a)) for a in range(len(F.family[x])))
    elems = [(z, i) for z in O.colors for i in range(len(F.carrier[z]))]
    elems.sort(key=lambda e: (degree(*e), e not in gens, O.colors.index(e[0]), e[1]))
    pos = {e: k for k, e in enumerate(elems)}
    cands = [range(len(A.carrier[z])) for z, _ in elems]
    buckets = [[] for _ in elems]
    for n in range(bound + 1):
        for c in O.carrier.corollas(n):
            sizes = [len(F.carrier[y]) for y in c.inputs] + [len(O.value(c))]
            for parts in product(*[range(s) for s in sizes]):
                try:
                    r = F.act(c, parts[:-1], parts[-1])
                except Undefined:
                    continue
                vs = [pos[(y, e)] for y, e in zip(c.inputs, parts[:-1])]
                vs.append(pos[(c.output, r)])
                buckets[max(vs)].append((c, parts, vs))

    def check(con, assignment):
        c, parts, vs = con
        img = [assignment[v] for v in vs[:-1]]
        return A.act(c, img, parts[-1]) == assignment[vs[-1]]

    sols = _backtrack(len(elems), cands, buckets, check)
    out = []
    for sol in sols:
        out.append(tuple(tuple(sol[pos[(z, i)]] for i in range(len(F.carrier[z])))
                         for z in O.colors))
    return out


class AdjunctionWitness:
    def __init__(self, algebra_maps, family_maps_, correspondence):
        self.algebra_maps = algebra_maps
        self.family_maps = family_maps_
        self.correspondence = correspondence

    @property
    def bijective(self):
        images = [self.correspondence[k] for k in range(len(self.algebra_maps))]
        return (len(set(images)) == len(images)
                and set(images) == set(self.family_maps))

    def to_json(self):
        return {"algebra_maps": len(self.algebra_maps),
                "family_maps": len(self.family_maps),
                "bijective": self.bijective}


def adjunction_bijection(O, M, A, degree_bound):
    """``Hom_Alg(F M, A) ≅ Hom(M, U A)`` on enumerated hom-sets.

    Algebra maps go to their restriction along the unit ``M -> U F M``.
    """
    if O.base != bc.FINSET:
        raise InfiniteEnumeration("the adjunction is only enumerated over finset")
    if degree_bound is None:
        raise UnboundedSupport("a degree bound is required")
    F = free_algebra(O, M, degree_bound)
    alg = enumerate_algebra_maps(F, A)
    fam = family_maps(M, A.carrier)
    units = {x: F.unit_map(x) for x in O.colors}
    corr = []
    for phi in alg:
        corr.append(tuple(tuple(phi[k][units[x](a)] for a in range(len(M[x])))
                          for k, x in enumerate(O.colors)))
    return AdjunctionWitness(alg, fam, corr)


# ---------------------------------------------------------------------------
# other constructions


def nullary_algebra(O):
    """Nullary operations, acted on by composition."""
    carrier = ColorFamily(O.colors, {x: O.value(Corolla((), x)) for x in O.colors}, O.base)

    def action(c, elems, o):
        idx = CompositionIndex(c.arity, (), c.inputs)
        return O.gamma(Corolla((), c.output), idx, elems, o)

    return AlgebraStructure(O, carrier, action, name=f"Z({O.name})")


def restrict_algebra(f, A):
    """Restriction along a color map ``f``; the operad becomes ``f*O``."""
    O2 = pullback_operad(f, A.operad)
    carrier = ColorFamily(f.source, {x: A.carrier[f(x)] for x in f.source}, A.base)

    def action(c, elems, o):
        return A.act(f.corolla(c), elems, o)

    return AlgebraStructure(O2, carrier, action, name=f"f*{A.name}")


def terminal_algebra(O):
    u = bc.unit(O.base)
    carrier = ColorFamily(O.colors, {x: u for x in O.colors}, O.base)
    return AlgebraStructure(O, carrier, lambda c, elems, o: _elem(O.base, 0), name="*")


def monoid_algebra(O, elements, mul, unit, commutative=False):
    """A one-color Com- or Assoc-algebra from a monoid on ``elements``.

    ``mul`` takes and returns positions in ``elements``.  For Assoc the
    inputs are multiplied in the order given by the operation.
    """
    x = O.colors[0]
    carrier = ColorFamily(O.colors, {x: bc.finset([str(e) for e in elements])}, bc.FINSET)
    orders = getattr(O, "orders", None)

    def product_of(seq):
        v = unit
        for a in seq:
            v = mul(v, a)
        return v

    def action(c, elems, o):
        if commutative or orders is None:
            return product_of(elems)
        return product_of(elems[i] for i in orders(c.arity)[o])

    return AlgebraStructure(O, carrier, action, name="monoid")


def word_algebra(O, alphabet, max_length):
    """Assoc acting on words of length ``<= max_length`` by concatenation."""
    words = [()]
    for k in range(1, max_length + 1):
        words.extend(product(range(len(alphabet)), repeat=k))
    index = {w: i for i, w in enumerate(words)}
    labels = ["".join(alphabet[i] for i in w) or "ε" for w in words]
    x = O.colors[0]
    carrier = ColorFamily(O.colors, {x: bc.finset(labels)}, bc.FINSET)

    def action(c, elems, o):
        word = ()
        for i in O.orders(c.arity)[o]:
            word += words[elems[i]]
        if len(word) > max_length:
            raise Undefined("word too long")
        return index[word]

    return AlgebraStructure(O, carrier, action, name="words")


# ---------------------------------------------------------------------------
# enumerating algebra structures on a fixed family


class _Unassigned(Exception):
    pass


def enumerate_algebras(O, M, arity_bound):
    """All ``O``-algebra structures on the finite family ``M`` up to ``arity_bound``.

    Unknowns are action values on ``Aut(c)``-orbit representatives of
    pairs (inputs, operation) at sorted corollas, so equivariance holds by
    construction; unit and associativity prune the search.
    """
    if O.base != bc.FINSET:
        raise InfiniteEnumeration("algebra structures are only enumerated over finset")
    cidx = O.carrier.color_index
    vars_, orbit_of, reps = [], {}, {}
    act_cache = {}

    def oact(g, c):
        key = (g, c)
        if key not in act_cache:
            act_cache[key] = O.act(g, c)
        return act_cache[key]

    for n in range(arity_bound + 1):
        for c in _canonical_corollas(O.colors, n):
            aut = closure(young_generators(c.inputs), n)
            table = {}
            sizes = [len(M[y]) for y in c.inputs] + [len(O.value(c))]
            for parts in product(*[range(s) for s in sizes]):
                key = (parts[:-1], parts[-1])
                if key in table:
                    continue
                v = len(vars_)
                vars_.append((c, key))
                for g in aut:
                    table[(permute(g, key[0]), oact(g, c)(key[1]))] = v
            orbit_of[c] = table

    def var_of(c, a, o):
        rep, s = sort_corolla(c, cidx)
        return orbit_of[rep][(permute(s, a), oact(s, c)(o))]

    def value(assignment, c, a, o):
        v = assignment[var_of(c, a, o)]
        if v is None:
            raise _Unassigned
        return v

    cands = [range(len(M[c.output])) for c, _ in vars_]
    buckets = [[] for _ in vars_]
    final = []
    for x, eta in O.units.items():
        if arity_bound >= 1:
            c = Corolla((x,), x)
            for a in range(len(M[x])):
                buckets[var_of(c, (a,), eta)].append(("unit", c, a, eta))
    for n in range(arity_bound + 1):
        for c in _canonical_corollas(O.colors, n):
            for m in range(arity_bound + 1):
                for h in _f_reps(n, m, O.reduced):
                    for w in product(O.colors, repeat=m):
                        idx, fibers, inner, top = _assoc_data(c, m, h, w)
                        sizes = ([len(M[x]) for x in c.inputs]
                                 + [len(O.value(b)) for b in inner] + [len(O.value(top))])
                        for parts in product(*[range(s) for s in sizes]):
                            a, ps, q = parts[:n], parts[n:n + m], parts[-1]
                            r = O.gamma(c, idx, ps, q)
                            vs = [var_of(b, tuple(a[i] for i in fib), p)
                                  for b, fib, p in zip(inner, fibers, ps)]
                            vs.append(var_of(c, a, r))
                            con = ("assoc", c, a, ps, q, r, inner, fibers, top)
                            buckets[max(vs)].append(con)
                            final.append(con)

    def check(con, assignment, strict=False):
        if con[0] == "unit":
            _, c, a, eta = con
            return value(assignment, c, (a,), eta) == a
        _, c, a, ps, q, r, inner, fibers, top = con
        try:
            mids = tuple(value(assignment, b, tuple(a[i] for i in fib), p)
                         for b, fib, p in zip(inner, fibers, ps))
            return value(assignment, top, mids, q) == value(assignment, c, a, r)
        except _Unassigned:
            if strict:
                raise
            return True

    sols = _backtrack(len(vars_), cands, buckets, check)
    sols = [s for s in sols if all(check(con, s, strict=True) for con in final)]
    out = []
    for sol in sols:
        def action(c, elems, o, sol=sol):
            return value(sol, c, tuple(elems), o)
        out.append(AlgebraStructure(O, M, action, name="enumerated"))
    return out
