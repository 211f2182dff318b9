"""The composition product of colored collections.

``(Φ ⊙ Ψ)(x1..xn; z)`` is the colimit, over factorisations
``n -> m -> 1`` with mid colors ``(y1..ym)``, of
``⊗_j Φ(x_{f^-1(j)}; y_j) ⊗ Ψ(y1..ym; z)``.  Inputs inside a fibre are
taken in ascending order and blocks in ascending ``j``.

The product is kept graded by the block count ``m``.  When the left
factor has nullary values every ``m`` contributes, so grades are computed
up to an explicit ``m_bound`` and a corolla is marked exact only when the
omitted grades provably vanish.
"""

from fractions import Fraction
from itertools import product

from . import base_cat as bc
from .collection import (
    Collection,
    CollectionMap,
    ColorMismatch,
    pushforward_sum,
)
from .groupoids import (
    CompositionIndex,
    CompositionIndexGroupoid,
    Corolla,
    FiniteGroupoid,
    GroupoidDiagram,
    perm_identity,
    perm_inverse,
    restricted_growth,
    transposition,
)


class TruncationRequired(ValueError):
    pass


class InexactBracketing(ValueError):
    pass


def block_corollas(c, idx):
    return [Corolla(tuple(c.inputs[i] for i in fib), idx.mids[j])
            for j, fib in enumerate(idx.fibers())]


def outer_corolla(c, idx):
    return Corolla(idx.mids, c.output)


def fiber_transport(fiber, g):
    """Reordering of a sorted fibre after applying ``g`` to its elements.

    Returns ``rho`` with ``rho[a]`` the position of ``g(fiber[a])`` in
    ``sorted(g(fiber))``.
    """
    moved = [g[i] for i in fiber]
    order = sorted(moved)
    return tuple(order.index(v) for v in moved)


class CompositionDiagram(GroupoidDiagram):
    """The diagram over factorisations for one target corolla."""

    def __init__(self, left, right, c):
        self.left = left
        self.right = right
        self.c = c
        super().__init__(left.base, self._val, self._act_impl)

    def factors(self, idx):
        return ([self.left.value(b) for b in block_corollas(self.c, idx)]
                + [self.right.value(outer_corolla(self.c, idx))])

    def _val(self, idx):
        return bc.tensor_all(self.factors(idx))

    def _act_impl(self, idx, g):
        src = self.value(idx)
        tgt = self.value(idx.relabel(g))
        psi = self.right.act(g, outer_corolla(self.c, idx))
        m = idx.m
        sl, tl = src.labels, tgt.labels
        if self.base == bc.FINSET:
            def fn(i):
                parts = sl.decode(i)
                new = [0] * (m + 1)
                for j in range(m):
                    new[g[j]] = parts[j]
                new[m] = psi(parts[m])
                return tl.encode(new)
        else:
            def fn(i):
                parts = sl.decode(i)
                new = [0] * (m + 1)
                for j in range(m):
                    new[g[j]] = parts[j]
                out = {}
                for k, x in psi(parts[m]).items():
                    new[m] = k
                    out[tl.encode(new)] = x
                return out
        return bc.BaseMorphism(src, tgt, fn=fn)


def _support_sums(left, right):
    """Arities reachable when both factors have exact finite support."""
    sums = set()
    for m in right.support:
        for combo in product(sorted(left.support), repeat=m):
            sums.add(sum(combo))
    return sums


class GradedCollection:
    """``Φ ⊙ Ψ`` graded by the block count ``m``."""

    def __init__(self, left, right, m_bound=None):
        if tuple(left.colors) != tuple(right.colors):
            raise ColorMismatch("composition needs collections over the same colors")
        if left.base != right.base:
            raise bc.MixedBase("composition needs collections over the same base")
        if not left.reduced and m_bound is None:
            raise TruncationRequired(
                "left factor has nullary values; pass m_bound to truncate the grading")
        self.left = left
        self.right = right
        self.m_bound = m_bound
        self.colors = left.colors
        self.base = left.base
        self._colims = {}
        self._offsets = {}
        if left.arity_bound is not None:
            self.arity_bound = left.arity_bound
        else:
            self.arity_bound = right.arity_bound if left.support != {0} else None
        if self.arity_bound is not None:
            low = 1 if left.reduced and right.reduced else 0
            self.support = frozenset(range(low, self.arity_bound + 1))
        elif left.support == frozenset({0}):
            self.support = frozenset({0})
        else:
            self.support = frozenset(_support_sums(left, right))

    def __repr__(self):
        return f"GradedCollection({self.left.name} ⊙ {self.right.name}, m_bound={self.m_bound})"

    def grade_range(self, c):
        n = c.arity
        if self.left.reduced:
            top = n if self.m_bound is None else min(n, self.m_bound)
        else:
            top = self.m_bound
        if self.right.arity_bound is not None:
            top = min(top, self.right.arity_bound)
        elif self.right.support:
            top = min(top, max(self.right.support))
        return range(top + 1)

    def exact(self, c):
        """True when every grade beyond the computed range vanishes."""
        vanish_above = []
        if self.left.reduced:
            vanish_above.append(c.arity)
        if self.right.arity_bound is None:
            vanish_above.append(max(self.right.support, default=0))
        if not vanish_above:
            return False
        return max(self.grade_range(c), default=-1) >= min(vanish_above)

    def index_groupoid(self, c, m):
        return CompositionIndexGroupoid(c.arity, self.colors, m,
                                        surjective=self.left.reduced, grades=[m])

    def diagram(self, c):
        return CompositionDiagram(self.left, self.right, c)

    def colimit(self, c, m):
        key = (c, m)
        col = self._colims.get(key)
        if col is None:
            col = bc.groupoid_colimit(self.index_groupoid(c, m), self._diagram(c))
            self._colims[key] = col
        return col

    def _diagram(self, c):
        d = self._colims.get(("diagram", c))
        if d is None:
            d = self._colims[("diagram", c)] = self.diagram(c)
        return d

    def grade(self, c, m):
        return self.colimit(c, m).obj

    def components(self, c):
        return [(m, self.grade(c, m)) for m in self.grade_range(c)]

    def sizes(self, c):
        return {m: len(self.grade(c, m)) for m in self.grade_range(c)}

    def offsets(self, c):
        offs = self._offsets.get(c)
        if offs is None:
            offs = {}
            off = 0
            for m in self.grade_range(c):
                offs[m] = off
                off += len(self.grade(c, m))
            self._offsets[c] = offs
        return offs

    def total(self, c):
        ms = list(self.grade_range(c))
        return bc.coproduct([self.grade(c, m) for m in ms], tags=ms, base=self.left.base)

    def split(self, c, i):
        """``(m, local index)`` of element ``i`` of :meth:`total`."""
        offs = self.offsets(c)
        for m in reversed(list(offs)):
            if i >= offs[m]:
                return m, i - offs[m]
        raise IndexError(i)

    def section(self, c, i):
        """``(m, representative index, element of its value)`` for total index ``i``."""
        m, j = self.split(c, i)
        rep, e = self.colimit(c, m).section(j)
        return m, rep, e

    def act(self, g, c, m):
        """Grade-``m`` part of the Σ_n action, induced by precomposition."""
        c2 = c.permuted(g)
        src = self.colimit(c, m)
        tgt = self.colimit(c2, m)
        left = self.left
        D, D2 = self._diagram(c), self._diagram(c2)

        def cocone(idx):
            idx2 = idx.precompose(g)
            maps = [left.act(fiber_transport(fib, g), b)
                    for fib, b in zip(idx.fibers(), block_corollas(c, idx))]
            maps.append(bc.identity(self.right.value(outer_corolla(c, idx))))
            t = bc.tensor_maps(maps, source=D.value(idx), target=D2.value(idx2))
            return tgt.leg(idx2).after(t)

        return bc.descend(src, cocone, tgt.obj, check="aut")

    def as_collection(self):
        """The total collection; every requested corolla must be exact."""

        def value(c):
            if not self.exact(c):
                raise TruncationRequired(f"composition product is truncated at {c}")
            return self.total(c)

        def act(g, c):
            c2 = c.permuted(g)
            pieces = [self.act(g, c, m) for m in self.grade_range(c)]
            offs2 = self.offsets(c2)
            table = []
            for m, p in zip(self.grade_range(c), pieces):
                off = offs2[m]
                for i in range(len(p.source)):
                    img = p(i)
                    if self.base == bc.FINSET:
                        table.append(img + off)
                    else:
                        table.append({k + off: x for k, x in img.items()})
            return bc.BaseMorphism(value(c), value(c2), table=table)

        return Collection(self.colors, self.base, value, act=act,
                          arity_bound=self.arity_bound, support=self.support,
                          name=f"({self.left.name}⊙{self.right.name})")


def compose(left, right, m_bound=None):
    """``left ⊙ right`` as a :class:`GradedCollection`."""
    return GradedCollection(left, right, m_bound)


# ---------------------------------------------------------------------------
# functoriality


class GradedMap:
    """Grade-preserving map between graded collections."""

    def __init__(self, source, target, grade_map):
        self.source = source
        self.target = target
        self._grade_map = grade_map
        self._cache = {}

    def grade(self, c, m):
        key = (c, m)
        if key not in self._cache:
            self._cache[key] = self._grade_map(c, m)
        return self._cache[key]

    def total(self, c):
        return _coproduct_map(
            [self.grade(c, m) for m in self.source.grade_range(c)],
            self.source.total(c), self.target.total(c),
            [self.target.offsets(c)[m] for m in self.source.grade_range(c)])

    def as_collection_map(self, source=None, target=None):
        s = source or self.source.as_collection()
        t = target or self.target.as_collection()
        return CollectionMap(s, t, self.total)


def _coproduct_map(pieces, src, tgt, target_offsets):
    table = []
    for p, off in zip(pieces, target_offsets):
        for i in range(len(p.source)):
            img = p(i)
            if src.base == bc.FINSET:
                table.append(img + off)
            else:
                table.append({k + off: x for k, x in img.items()})
    return bc.BaseMorphism(src, tgt, table=table)


def compose_maps(phi, psi, m_bound=None, check="aut"):
    """``φ ⊙ ψ``, induced grade-wise through the colimits."""
    src = compose(phi.source, psi.source, m_bound)
    tgt = compose(phi.target, psi.target, m_bound)

    def grade_map(c, m):
        scol, tcol = src.colimit(c, m), tgt.colimit(c, m)
        Ds, Dt = src._diagram(c), tgt._diagram(c)

        def cocone(idx):
            maps = [phi.component(b) for b in block_corollas(c, idx)]
            maps.append(psi.component(outer_corolla(c, idx)))
            t = bc.tensor_maps(maps, source=Ds.value(idx), target=Dt.value(idx))
            return tcol.leg(idx).after(t)

        return bc.descend(scol, cocone, tcol.obj, check=check)

    return GradedMap(src, tgt, grade_map)


# ---------------------------------------------------------------------------
# associativity normal form


class TwoLevelIndex:
    """``n -f-> m1 -h-> m2 -> 1`` with colors ``y`` on ``m1`` and ``w`` on ``m2``."""

    __slots__ = ("m1", "m2", "f", "h", "y", "w")

    def __init__(self, m1, m2, f, h, y, w):
        self.m1, self.m2 = m1, m2
        self.f, self.h = tuple(f), tuple(h)
        self.y, self.w = tuple(y), tuple(w)

    def _t(self):
        return (self.m1, self.m2, self.f, self.h, self.y, self.w)

    def __eq__(self, other):
        return isinstance(other, TwoLevelIndex) and self._t() == other._t()

    def __hash__(self):
        return hash(self._t())

    def __repr__(self):
        return f"TwoLevelIndex(f={self.f}, h={self.h}, y={self.y}, w={self.w})"

    def split(self, g):
        s1 = g[: self.m1]
        s2 = tuple(x - self.m1 for x in g[self.m1:])
        return s1, s2

    def act(self, g):
        s1, s2 = self.split(g)
        inv1 = perm_inverse(s1)
        f = tuple(s1[b] for b in self.f)
        h = tuple(s2[self.h[inv1[j]]] for j in range(self.m1))
        y = [None] * self.m1
        for j, c in enumerate(self.y):
            y[s1[j]] = c
        w = [None] * self.m2
        for k, c in enumerate(self.w):
            w[s2[k]] = c
        return TwoLevelIndex(self.m1, self.m2, f, h, y, w)

    def inner_fibers(self):
        out = [[] for _ in range(self.m1)]
        for i, b in enumerate(self.f):
            out[b].append(i)
        return [tuple(x) for x in out]

    def outer_fibers(self):
        out = [[] for _ in range(self.m2)]
        for j, k in enumerate(self.h):
            out[k].append(j)
        return [tuple(x) for x in out]


def _first_appearance(f, m):
    g = [None] * m
    nxt = 0
    for b in f:
        if g[b] is None:
            g[b] = nxt
            nxt += 1
    return tuple(g)


class TwoLevelGroupoid(FiniteGroupoid):
    """Two-level factorisations with surjective levels (the reduced case).

    ``Σ_m1 × Σ_m2`` acts freely, so each component is a nested set
    partition and automorphism groups are trivial.
    """

    def __init__(self, n, colors):
        self.n = n
        self.colors = tuple(colors)
        self.cidx = {x: i for i, x in enumerate(self.colors)}

    def objects(self):
        n = self.n
        for m1 in range(n + 1):
            for f in product(range(m1), repeat=n):
                if len(set(f)) != m1:
                    continue
                for m2 in range(m1 + 1):
                    for h in product(range(m2), repeat=m1):
                        if len(set(h)) != m2:
                            continue
                        for y in product(self.colors, repeat=m1):
                            for w in product(self.colors, repeat=m2):
                                yield TwoLevelIndex(m1, m2, f, h, y, w)

    def generators(self, x):
        d = x.m1 + x.m2
        return ([transposition(d, i) for i in range(x.m1 - 1)]
                + [transposition(d, x.m1 + i) for i in range(x.m2 - 1)])

    def degree(self, x):
        return x.m1 + x.m2

    def act(self, x, g):
        return x.act(g)

    def key(self, x):
        return (x.m1, x.m2, x.f, x.h, tuple(self.cidx[c] for c in x.y),
                tuple(self.cidx[c] for c in x.w))

    def canonicalize(self, x):
        s1 = _first_appearance(x.f, x.m1)
        inv1 = perm_inverse(s1)
        h1 = tuple(x.h[inv1[j]] for j in range(x.m1))
        s2 = _first_appearance(h1, x.m2)
        g = s1 + tuple(v + x.m1 for v in s2)
        return x.act(g), g

    def components(self):
        out = []
        n = self.n
        for m1 in range(n + 1):
            for f in restricted_growth(n, m1):
                for m2 in range(m1 + 1):
                    for h in restricted_growth(m1, m2):
                        for y in product(self.colors, repeat=m1):
                            for w in product(self.colors, repeat=m2):
                                out.append(TwoLevelIndex(m1, m2, f, h, y, w))
        return sorted(out, key=self.key)

    def aut_generators(self, rep):
        return []


class TwoLevelDiagram(GroupoidDiagram):
    def __init__(self, phi, psi, xi, c):
        self.phi, self.psi, self.xi, self.c = phi, psi, xi, c
        super().__init__(phi.base, self._val, self._act_impl)

    def corollas(self, t):
        c = self.c
        inner = [Corolla(tuple(c.inputs[i] for i in fib), t.y[j])
                 for j, fib in enumerate(t.inner_fibers())]
        mid = [Corolla(tuple(t.y[j] for j in fib), t.w[k])
               for k, fib in enumerate(t.outer_fibers())]
        return inner, mid, Corolla(t.w, c.output)

    def _val(self, t):
        inner, mid, top = self.corollas(t)
        return bc.tensor_all([self.phi.value(b) for b in inner]
                             + [self.psi.value(b) for b in mid]
                             + [self.xi.value(top)])

    def _act_impl(self, t, g):
        s1, s2 = t.split(g)
        t2 = t.act(g)
        inner, mid, top = self.corollas(t)
        maps = [bc.identity(self.phi.value(b)) for b in inner]
        maps += [self.psi.act(fiber_transport(fib, s1), b)
                 for fib, b in zip(t.outer_fibers(), mid)]
        maps.append(self.xi.act(s2, top))
        src, tgt = self.value(t), self.value(t2)
        m1, m2 = t.m1, t.m2
        inner_t = bc.tensor_maps(maps, source=src)
        # then move factors: block j -> s1[j], middle k -> s2[k]
        mid_l = inner_t.target.labels
        tl = tgt.labels
        order = [0] * (m1 + m2 + 1)
        for j in range(m1):
            order[s1[j]] = j
        for k in range(m2):
            order[m1 + s2[k]] = m1 + k
        order[m1 + m2] = m1 + m2

        def move(i):
            parts = mid_l.decode(i)
            return tl.encode([parts[order[p]] for p in range(m1 + m2 + 1)])

        if self.base == bc.FINSET:
            return bc.BaseMorphism(src, tgt, fn=lambda i: move(inner_t(i)))
        return bc.BaseMorphism(
            src, tgt,
            fn=lambda i: {move(k): x for k, x in inner_t(i).items()})


class Coherence:
    """Associativity and unit comparison isomorphisms for three collections.

    Both bracketings are mapped into the colimit over two-level
    factorisations; the associator is the composite of one comparison
    with the inverse of the other.
    """

    def __init__(self, phi, psi, xi, check="full"):
        for coll in (phi, psi):
            if not coll.reduced:
                raise InexactBracketing(
                    "associativity comparison needs reduced inner factors")
        self.phi, self.psi, self.xi = phi, psi, xi
        self.check = check
        self.inner_left = compose(phi, psi)
        self.inner_right = compose(psi, xi)
        self.lhs = compose(self.inner_left.as_collection(), xi)
        self.rhs = compose(phi, self.inner_right.as_collection())
        self._nf = {}
        self._cache = {}

    def _exact_or_raise(self, c):
        for g in (self.lhs, self.rhs):
            if not g.exact(c):
                raise InexactBracketing(f"bracketing truncated at {c}")

    def normal_form(self, c):
        col = self._nf.get(c)
        if col is None:
            col = bc.groupoid_colimit(TwoLevelGroupoid(c.arity, self.phi.colors),
                                      TwoLevelDiagram(self.phi, self.psi, self.xi, c))
            self._nf[c] = col
        return col

    def _to_nf(self, graded, c, assemble):
        nf = self.normal_form(c)
        pieces = []
        for m in graded.grade_range(c):
            col = graded.colimit(c, m)
            D = graded._diagram(c)

            def cocone(idx, D=D):
                src = D.value(idx)
                sl = src.labels

                def fn(i):
                    t, parts = assemble(c, idx, sl.decode(i))
                    return nf.project(t, _elem(nf, t, parts))

                return bc.BaseMorphism(src, nf.obj, fn=fn)

            pieces.append(bc.descend(col, cocone, nf.obj, check=self.check))
        # every grade lands in the same normal-form object
        return _coproduct_map(pieces, graded.total(c), nf.obj, [0] * len(pieces))

    def _assemble_left(self, c, idx2, parts):
        # idx2: n -g-> m2 with colors w; parts: one element per (Φ⊙Ψ) factor, then Ξ
        m2 = idx2.m
        phi_parts, psi_parts = [], []
        f, y, h = [None] * c.arity, [], []
        for k, fib in enumerate(idx2.fibers()):
            bc_k = Corolla(tuple(c.inputs[i] for i in fib), idx2.mids[k])
            mk, rep, e = self.inner_left.section(bc_k, parts[k])
            sub = self.inner_left._diagram(bc_k).value(rep).labels.decode(e)
            offset = len(y)
            for local, i in enumerate(fib):
                f[i] = offset + rep.f[local]
            y.extend(rep.mids)
            h.extend([k] * mk)
            phi_parts.extend(sub[:mk])
            psi_parts.append(sub[mk])
        t = TwoLevelIndex(len(y), m2, f, h, y, idx2.mids)
        return t, phi_parts + psi_parts + [parts[m2]]

    def _assemble_right(self, c, idx1, parts):
        m1 = idx1.m
        top = Corolla(idx1.mids, c.output)
        m2, rep, e = self.inner_right.section(top, parts[m1])
        sub = self.inner_right._diagram(top).value(rep).labels.decode(e)
        t = TwoLevelIndex(m1, m2, idx1.f, rep.f, idx1.mids, rep.mids)
        return t, list(parts[:m1]) + list(sub)

    def left_comparison(self, c):
        self._exact_or_raise(c)
        return self._to_nf(self.lhs, c, self._assemble_left)

    def right_comparison(self, c):
        self._exact_or_raise(c)
        return self._to_nf(self.rhs, c, self._assemble_right)

    def assoc(self, c):
        """``(Φ⊙Ψ)⊙Ξ -> Φ⊙(Ψ⊙Ξ)`` at ``c``."""
        if ("assoc", c) not in self._cache:
            left = self.left_comparison(c)
            right = self.right_comparison(c)
            if not (left.is_invertible() and right.is_invertible()):
                raise bc.NotInvertible(f"comparison to normal form not invertible at {c}")
            self._cache[("assoc", c)] = right.inverse().after(left)
        return self._cache[("assoc", c)]

    def assoc_inverse(self, c):
        return self.assoc(c).inverse()

    def verify(self, corollas):
        """Per-corolla verdicts: both comparisons invertible and sizes equal."""
        report = []
        for c in corollas:
            left = self.left_comparison(c)
            right = self.right_comparison(c)
            report.append({
                "corolla": str(c),
                "lhs_size": len(left.source),
                "rhs_size": len(right.source),
                "normal_form_size": len(left.target),
                "invertible": left.is_invertible() and right.is_invertible(),
            })
        return report


def _elem(nf, t, parts):
    D = nf.diagram
    idx = D.value(t).labels.encode(parts)
    return bc.element(D.value(t), idx)


def coherence_isos(phi, psi, xi, m_bound=None, check="full"):
    """Associator for ``(Φ, Ψ, Ξ)`` and unitors for ``Φ``."""
    coh = Coherence(phi, psi, xi, check=check)
    return {
        "assoc": coh,
        "left_unit": left_unitor(phi, check=check),
        "right_unit": right_unitor(phi, m_bound=m_bound, check=check),
    }


class Unitor:
    """Componentwise iso between a composite with the unit and ``Φ``."""

    def __init__(self, graded, coll, grade_map):
        self.graded = graded
        self.coll = coll
        self._grade_map = grade_map
        self._cache = {}

    def component(self, c):
        if c not in self._cache:
            if not self.graded.exact(c):
                raise InexactBracketing(f"unit composite truncated at {c}")
            ms = list(self.graded.grade_range(c))
            pieces = [self._grade_map(c, m) for m in ms]
            self._cache[c] = _coproduct_map(pieces, self.graded.total(c),
                                            self.coll.value(c), [0] * len(pieces))
        return self._cache[c]

    __call__ = component

    def is_invertible(self, c):
        return self.component(c).is_invertible()

    def as_collection_map(self, source=None):
        s = source or self.graded.as_collection()
        return CollectionMap(s, self.coll, self.component)


def left_unitor(phi, check="full"):
    """``1 ⊙ Φ -> Φ``."""
    from .collection import unit_collection

    g = compose(unit_collection(phi.colors, phi.base), phi)

    def grade_map(c, m):
        col = g.colimit(c, m)
        D = g._diagram(c)

        def cocone(idx):
            src = D.value(idx)
            if not len(src):
                return bc.BaseMorphism(src, phi.value(c), table=[])
            # fibres are singletons: f is a bijection and mids = x ∘ f^-1
            sigma = tuple(idx.fiber(j)[0] for j in range(idx.m))
            outer = outer_corolla(c, idx)
            a = phi.act(sigma, outer)
            sl = src.labels
            return bc.BaseMorphism(src, phi.value(c), fn=lambda i: a(sl.decode(i)[-1]))

        return bc.descend(col, cocone, phi.value(c), check=check)

    return Unitor(g, phi, grade_map)


def right_unitor(phi, m_bound=None, check="full"):
    """``Φ ⊙ 1 -> Φ``."""
    from .collection import unit_collection

    if not phi.reduced and m_bound is None:
        m_bound = 1
    g = compose(phi, unit_collection(phi.colors, phi.base), m_bound)

    def grade_map(c, m):
        col = g.colimit(c, m)
        D = g._diagram(c)

        def cocone(idx):
            src = D.value(idx)
            if not len(src):
                return bc.BaseMorphism(src, phi.value(c), table=[])
            sl = src.labels
            return bc.BaseMorphism(src, phi.value(c), fn=lambda i: bc.element(
                phi.value(c), sl.decode(i)[0]))

        return bc.descend(col, cocone, phi.value(c), check=check)

    return Unitor(g, phi, grade_map)


# ---------------------------------------------------------------------------
# change of colors


class Comparison:
    """A grade-wise comparison map with a per-corolla invertibility verdict."""

    def __init__(self, grade_map, grades, source_total, target_total):
        self._grade_map = grade_map
        self._grades = grades
        self._source_total = source_total
        self._target_total = target_total
        self._cache = {}

    def grade(self, c, m):
        key = (c, m)
        if key not in self._cache:
            self._cache[key] = self._grade_map(c, m)
        return self._cache[key]

    def grades(self, c):
        return self._grades(c)

    def sizes(self, c):
        return {m: (len(self.grade(c, m).source), len(self.grade(c, m).target))
                for m in self.grades(c)}

    def invertible(self, c):
        return all(self.grade(c, m).is_invertible() for m in self.grades(c))

    def verdict(self, corollas):
        return {str(c): self.invertible(c) for c in corollas}


def lax_pullback_comparison(f, phi, psi, m_bound=None):
    """``f*Φ ⊙ f*Ψ -> f*(Φ ⊙ Ψ)``: apply ``f`` to the mid colors."""
    from .collection import pullback

    src = compose(pullback(f, phi), pullback(f, psi), m_bound)
    tgt = compose(phi, psi, m_bound)

    def grade_map(c, m):
        fc = f.corolla(c)
        scol = src.colimit(c, m)
        tcol = tgt.colimit(fc, m)

        def cocone(idx):
            idy = CompositionIndex(idx.m, idx.f, tuple(f(y) for y in idx.mids))
            return tcol.leg(idy)

        return bc.descend(scol, cocone, tcol.obj, check="aut")

    return Comparison(grade_map, src.grade_range, src.total,
                      lambda c: tgt.total(f.corolla(c)))


def pushforward_monoidal_comparison(i, phi, psi, m_bound=None):
    """``i_!(Φ ⊙ Ψ) -> i_!Φ ⊙ i_!Ψ`` with an invertibility verdict.

    Any color map is accepted; both sides are materialised as sums over
    fibres.  The map is invertible for injective ``i``.
    """
    inner = compose(phi, psi, m_bound)
    pphi, ppsi = pushforward_sum(i, phi), pushforward_sum(i, psi)
    outer = compose(pphi, ppsi, m_bound)

    def source_grade(c, m):
        from .collection import fiber_corollas

        ds = fiber_corollas(i, c)
        return ds, [inner.grade(d, m) for d in ds]

    def grade_map(c, m):
        ds, objs = source_grade(c, m)
        src = objs[0] if len(ds) == 1 else bc.coproduct(
            objs, tags=[str(d) for d in ds], base=phi.base)
        tcol = outer.colimit(c, m)
        Dt = outer._diagram(c)
        table = []
        for d in ds:
            scol = inner.colimit(d, m)
            Ds = inner._diagram(d)

            def cocone(idx, d=d, Ds=Ds):
                idy = CompositionIndex(idx.m, idx.f, tuple(i(y) for y in idx.mids))
                maps = [pphi.include(bc_y, bc_x) for bc_x, bc_y in
                        zip(block_corollas(d, idx), block_corollas(c, idy))]
                maps.append(ppsi.include(outer_corolla(c, idy), outer_corolla(d, idx)))
                t = bc.tensor_maps(maps, source=Ds.value(idx), target=Dt.value(idy))
                return tcol.leg(idy).after(t)

            piece = bc.descend(scol, cocone, tcol.obj, check="aut")
            table.extend(piece.table())
        return bc.BaseMorphism(src, tcol.obj, table=table)

    def grades(c):
        return outer.grade_range(c)

    return Comparison(grade_map, grades, None, outer.total)
