"""Finite index groupoids.

Every groupoid here is the action groupoid of a permutation group on a
finite set of objects.  An arrow out of ``x`` is a permutation ``g`` with
target ``act(x, g)``.  Permutations are tuples: ``g[i]`` is the image of
``i``, and ``g`` moves the entry at position ``i`` to position ``g[i]``.
"""

from dataclasses import dataclass
from itertools import combinations_with_replacement, product


# ---------------------------------------------------------------------------
# permutations


def perm_identity(n):
    return tuple(range(n))


def perm_compose(g, h):
    """``g ∘ h``."""
    return tuple(g[i] for i in h)


def perm_inverse(g):
    inv = [0] * len(g)
    for i, x in enumerate(g):
        inv[x] = i
    return tuple(inv)


def transposition(n, i):
    """Adjacent transposition swapping ``i`` and ``i + 1``."""
    g = list(range(n))
    g[i], g[i + 1] = i + 1, i
    return tuple(g)


def permute(g, seq):
    """Move the entry at position ``i`` to position ``g[i]``."""
    out = [None] * len(seq)
    for i, x in enumerate(seq):
        out[g[i]] = x
    return tuple(out)


def reduced_word(g):
    """Indices ``i1, ..., ik`` with ``g = s_i1 ∘ ... ∘ s_ik``."""
    cur = list(g)
    word = []
    # bubble sort cur into the identity by left multiplication
    n = len(cur)
    changed = True
    while changed:
        changed = False
        for i in range(n - 1):
            # left-multiplying by s_v swaps the values v, v+1
            pos_v = cur.index(i)
            pos_w = cur.index(i + 1)
            if pos_v > pos_w:
                cur[pos_v], cur[pos_w] = i + 1, i
                word.append(i)
                changed = True
    return word


def all_perms(n):
    from itertools import permutations

    return [tuple(p) for p in permutations(range(n))]


def closure(gens, n):
    ident = perm_identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = perm_compose(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(seen)


# ---------------------------------------------------------------------------
# groupoid interface


class FiniteGroupoid:
    """Base class; subclasses supply objects, generators, act and key.

    The default component machinery is orbit search; subclasses with a
    closed-form canonical form override :meth:`canonicalize`,
    :meth:`components` and :meth:`aut_generators`.
    """

    def objects(self):
        raise NotImplementedError

    def generators(self, x):
        raise NotImplementedError

    def act(self, x, g):
        raise NotImplementedError

    def key(self, x):
        return x

    def degree(self, x):
        gens = self.generators(x)
        return len(gens[0]) if gens else 0

    # generic orbit machinery -------------------------------------------
    def _orbit(self, x):
        """BFS orbit with transversal ``{y: g}`` such that ``act(x, g) == y``."""
        n = self.degree(x)
        trans = {x: perm_identity(n)}
        frontier = [x]
        while frontier:
            nxt = []
            for y in frontier:
                for s in self.generators(y):
                    z = self.act(y, s)
                    if z not in trans:
                        trans[z] = perm_compose(s, trans[y])
                        nxt.append(z)
            frontier = nxt
        return trans

    def _orbit_data(self):
        if not hasattr(self, "_od"):
            reps = {}
            to_rep = {}
            for x in self.objects():
                if x in to_rep:
                    continue
                trans = self._orbit(x)
                r = min(trans, key=self.key)
                tr = trans[r]
                # arrow y -> r is tr ∘ trans[y]^-1
                for y, g in trans.items():
                    to_rep[y] = (r, perm_compose(tr, perm_inverse(g)))
                reps[r] = None
            self._od = (sorted(reps, key=self.key), to_rep)
        return self._od

    def canonicalize(self, x):
        """``(rep, g)`` with ``act(x, g) == rep``."""
        return self._orbit_data()[1][x]

    def components(self):
        return self._orbit_data()[0]

    def aut_generators(self, rep):
        """Schreier generators of the stabiliser of ``rep``."""
        trans = self._orbit(rep)
        out = set()
        ident = perm_identity(self.degree(rep))
        for y, t in trans.items():
            for s in self.generators(y):
                z = self.act(y, s)
                sg = perm_compose(perm_inverse(trans[z]), perm_compose(s, t))
                if sg != ident:
                    out.add(sg)
        return sorted(out)

    # small-groupoid helpers ----------------------------------------------
    def aut(self, rep):
        n = self.degree(rep)
        return closure(self.aut_generators(rep), n)

    def hom(self, a, b):
        n = self.degree(a)
        return [g for g in all_perms(n) if self.act(a, g) == b and self._acts(a, g)]

    def _acts(self, a, g):
        return True


class ActionGroupoid(FiniteGroupoid):
    """Action groupoid of the group generated by ``generators`` on ``objects``."""

    def __init__(self, objects, act, generators, key=None):
        self._objects = list(objects)
        self._act = act
        self._gens = [tuple(g) for g in generators]
        self._key = key or repr

    def objects(self):
        return iter(self._objects)

    def generators(self, x):
        return self._gens

    def act(self, x, g):
        return self._act(x, g)

    def key(self, x):
        return self._key(x)

    def degree(self, x):
        return len(self._gens[0]) if self._gens else 0


class GroupoidDiagram:
    """A functor from a finite groupoid to a base category.

    ``value(x)`` is an object; ``act(x, g)`` the morphism
    ``value(x) -> value(groupoid.act(x, g))``.
    """

    def __init__(self, base, value, act):
        self.base = base
        self._value = value
        self._act = act
        self._vcache = {}
        self._acache = {}

    def value(self, x):
        v = self._vcache.get(x)
        if v is None:
            v = self._vcache[x] = self._value(x)
        return v

    def act(self, x, g):
        key = (x, tuple(g))
        m = self._acache.get(key)
        if m is None:
            m = self._acache[key] = self._act(x, g)
        return m


# ---------------------------------------------------------------------------
# corollas


@dataclass(frozen=True)
class Corolla:
    """An operation shape ``(x1, ..., xn; y)``."""

    inputs: tuple
    output: str

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))

    @property
    def arity(self):
        return len(self.inputs)

    def permuted(self, g):
        return Corolla(permute(g, self.inputs), self.output)

    def __str__(self):
        return "(" + ",".join(self.inputs) + ";" + self.output + ")"


def corolla_key(c, color_index):
    return (c.arity, tuple(color_index[x] for x in c.inputs), color_index.get(c.output, -1))


def sort_corolla(c, color_index):
    """``(sorted corolla, g)`` with ``c.permuted(g)`` sorted by color order."""
    order = sorted(range(c.arity), key=lambda i: (color_index[c.inputs[i]], i))
    g = [0] * c.arity
    for new, old in enumerate(order):
        g[old] = new
    g = tuple(g)
    return c.permuted(g), g


def young_generators(seq):
    """Adjacent transpositions preserving a sorted sequence."""
    n = len(seq)
    return [transposition(n, i) for i in range(n - 1) if seq[i] == seq[i + 1]]


def all_corollas(colors, n, outputs=None):
    outputs = colors if outputs is None else outputs
    for t in product(colors, repeat=n):
        for y in outputs:
            yield Corolla(t, y)


class CorollaGroupoid(FiniteGroupoid):
    """Corollas of arity ``n`` with inputs in ``X`` and output in ``Y``;
    arrows are input permutations."""

    def __init__(self, X, Y, n):
        self.X = tuple(X)
        self.Y = tuple(Y)
        self.n = n
        self.cidx = {x: i for i, x in enumerate(self.X)}
        self.yidx = {y: i for i, y in enumerate(self.Y)}

    def objects(self):
        return all_corollas(self.X, self.n, self.Y)

    def generators(self, x):
        return [transposition(self.n, i) for i in range(self.n - 1)]

    def degree(self, x):
        return self.n

    def act(self, x, g):
        return x.permuted(g)

    def key(self, x):
        return (tuple(self.cidx[c] for c in x.inputs), self.yidx[x.output])

    def canonicalize(self, x):
        return sort_corolla(x, self.cidx)

    def components(self):
        out = []
        for ms in combinations_with_replacement(self.X, self.n):
            for y in self.Y:
                out.append(Corolla(ms, y))
        return sorted(out, key=self.key)

    def aut_generators(self, rep):
        return young_generators(rep.inputs)


def corolla_groupoid(X, Y, n):
    return CorollaGroupoid(X, Y, n)


# ---------------------------------------------------------------------------
# composition indices


@dataclass(frozen=True)
class CompositionIndex:
    """A factorisation ``n -> m -> 1`` with mid colors.

    ``f[i]`` is the block of input ``i``; ``mids[j]`` the color of block ``j``.
    """

    m: int
    f: tuple
    mids: tuple

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "mids", tuple(self.mids))

    def fiber(self, j):
        return tuple(i for i, b in enumerate(self.f) if b == j)

    def fibers(self):
        out = [[] for _ in range(self.m)]
        for i, b in enumerate(self.f):
            out[b].append(i)
        return [tuple(x) for x in out]

    def relabel(self, g):
        """Action of ``g`` in ``Σ_m``: ``(g ∘ f, g · mids)``."""
        return CompositionIndex(self.m, tuple(g[b] for b in self.f), permute(g, self.mids))

    def precompose(self, tau):
        """Index at ``c.permuted(tau)``: ``f ∘ tau^-1``."""
        inv = perm_inverse(tau)
        return CompositionIndex(self.m, tuple(self.f[inv[i]] for i in range(len(self.f))), self.mids)

    def is_surjective(self):
        return len(set(self.f)) == self.m


def restricted_growth(n, k):
    """Restricted growth strings of length ``n`` using exactly ``k`` values."""
    if n == 0:
        if k == 0:
            yield ()
        return

    def rec(prefix, top):
        if len(prefix) == n:
            if top == k:
                yield tuple(prefix)
            return
        remaining = n - len(prefix)
        if top + remaining < k:
            return
        for v in range(min(top + 1, k)):
            prefix.append(v)
            yield from rec(prefix, max(top, v + 1))
            prefix.pop()

    yield from rec([], 0)


def canonical_index(idx, cidx):
    """``(rep, g)`` with ``idx.relabel(g) == rep``.

    The representative is the lexicographically smallest encoding
    ``(f, mids)``: blocks are renumbered by first appearance in ``f``, and
    the empty blocks follow, sorted by color.
    """
    m = idx.m
    g = [None] * m
    nxt = 0
    for b in idx.f:
        if g[b] is None:
            g[b] = nxt
            nxt += 1
    empty = sorted((j for j in range(m) if g[j] is None), key=lambda j: (cidx[idx.mids[j]], j))
    for j in empty:
        g[j] = nxt
        nxt += 1
    g = tuple(g)
    return idx.relabel(g), g


class CompositionIndexGroupoid(FiniteGroupoid):
    """Factorisations ``n -> m -> 1`` of a fixed arity with mid colors.

    ``grades`` selects the block counts ``m``.  With ``surjective`` only
    factorisations without empty fibres are included; this is exact when
    the inner factor has no nullary values.  Otherwise ``truncated`` is
    set: the full groupoid has objects for every ``m``.
    """

    def __init__(self, n, colors, m_bound, surjective=False, grades=None):
        self.n = n
        self.colors = tuple(colors)
        self.cidx = {x: i for i, x in enumerate(self.colors)}
        self.m_bound = m_bound
        self.surjective = surjective
        self.grades = tuple(range(m_bound + 1)) if grades is None else tuple(grades)
        self.truncated = not surjective
        self.exact = surjective and m_bound >= n

    def objects(self):
        for m in self.grades:
            for f in product(range(m), repeat=self.n):
                if self.surjective and len(set(f)) != m:
                    continue
                for mids in product(self.colors, repeat=m):
                    yield CompositionIndex(m, f, mids)

    def generators(self, x):
        return [transposition(x.m, i) for i in range(x.m - 1)]

    def degree(self, x):
        return x.m

    def act(self, x, g):
        return x.relabel(g)

    def key(self, x):
        return (x.m, x.f, tuple(self.cidx[c] for c in x.mids))

    def canonicalize(self, x):
        return canonical_index(x, self.cidx)

    def components(self):
        out = []
        for m in self.grades:
            ks = [m] if self.surjective else range(min(self.n, m) + 1)
            for k in ks:
                if k > self.n or (self.n > 0 and k == 0):
                    continue
                for f in restricted_growth(self.n, k):
                    for top in product(self.colors, repeat=k):
                        for rest in combinations_with_replacement(self.colors, m - k):
                            out.append(CompositionIndex(m, f, top + rest))
        return sorted(out, key=self.key)

    def aut_generators(self, rep):
        k = len(set(rep.f))
        m = rep.m
        return [
            transposition(m, j)
            for j in range(k, m - 1)
            if rep.mids[j] == rep.mids[j + 1]
        ]


def composition_index_groupoid(n, colors, m_bound, surjective=False):
    return CompositionIndexGroupoid(n, colors, m_bound, surjective=surjective)
