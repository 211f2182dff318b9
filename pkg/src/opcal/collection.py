"""Colored collections: equivariant families of base objects over corollas."""

from dataclasses import dataclass, field

from . import base_cat as bc
from .groupoids import (
    Corolla,
    all_corollas,
    perm_compose,
    perm_identity,
    reduced_word,
    transposition,
)


class OutOfBounds(ValueError):
    """A corolla beyond a collection's declared arity bound was requested."""


class ColorMismatch(ValueError):
    pass


class NotMono(ValueError):
    pass


class Collection:
    """An equivariant family ``c -> value(c)`` indexed by corollas.

    ``act(g, c)`` is the morphism ``value(c) -> value(c.permuted(g))``.
    It can be given directly, through its values on adjacent
    transpositions (``act_gen(i, c)``), or left out, in which case each
    permutation acts by matching labels (the values must then agree
    across each orbit).

    Values are known for arities ``<= arity_bound`` (``None``: all
    arities).  Arities outside ``support`` are initial; arities beyond
    the bound raise :class:`OutOfBounds`.
    """

    def __init__(self, colors, base, value, act=None, act_gen=None,
                 arity_bound=None, support=None, name=None):
        self.colors = tuple(colors)
        self.base = base
        self.color_index = {x: i for i, x in enumerate(self.colors)}
        self.arity_bound = arity_bound
        if support is None:
            if arity_bound is None:
                raise ValueError("a collection needs a finite support or arity bound")
            support = range(arity_bound + 1)
        self.support = frozenset(support)
        self.name = name
        self._value = value
        self._act = act
        self._act_gen = act_gen
        self._cache = {}
        self._act_cache = {}

    def __repr__(self):
        return f"Collection({self.name or '?'}, colors={list(self.colors)}, base={self.base})"

    @property
    def reduced(self):
        return 0 not in self.support

    def max_arity(self):
        return max(self.support, default=0)

    def _check(self, c):
        if any(x not in self.color_index for x in c.inputs) or c.output not in self.color_index:
            raise ColorMismatch(f"{c} uses colors outside {list(self.colors)}")
        if self.arity_bound is not None and c.arity > self.arity_bound:
            raise OutOfBounds(f"{c} is beyond arity bound {self.arity_bound}")

    def value(self, c):
        v = self._cache.get(c)
        if v is None:
            self._check(c)
            if c.arity in self.support:
                v = self._value(c)
            else:
                v = bc.initial(self.base)
            self._cache[c] = v
        return v

    def act(self, g, c):
        g = tuple(g)
        key = (g, c)
        hit = self._act_cache.get(key)
        if hit is None:
            hit = self._act_cache[key] = self._act_uncached(g, c)
        return hit

    def _act_uncached(self, g, c):
        src = self.value(c)
        tgt_c = c.permuted(g)
        if not len(src) or g == perm_identity(len(g)):
            return bc.BaseMorphism(src, self.value(tgt_c), fn=_identity_fn(self.base))
        if self._act is not None:
            return self._act(g, c)
        if self._act_gen is not None:
            morph = bc.identity(src)
            cur = c
            for i in reversed(reduced_word(g)):
                s = transposition(c.arity, i)
                morph = self._act_gen(i, cur).after(morph)
                cur = cur.permuted(s)
            return morph
        tgt = self.value(tgt_c)
        return bc.from_label_map(src, tgt, {lab: lab for lab in src.labels})

    def corollas(self, n):
        return all_corollas(self.colors, n)

    def arities(self, bound=None):
        top = self.arity_bound if bound is None else bound
        if top is None:
            top = self.max_arity()
        if self.arity_bound is not None:
            top = min(top, self.arity_bound)
        return range(top + 1)

    def check_functorial(self, bound=None):
        """Check ``act(id) = id`` and ``act(s t) = act(s) act(t)`` on generators."""
        failures = []
        for n in self.arities(bound):
            gens = [transposition(n, i) for i in range(n - 1)]
            for c in self.corollas(n):
                if not len(self.value(c)):
                    continue
                ident = self.act(perm_identity(n), c)
                if not ident.equals(bc.identity(self.value(c))):
                    failures.append(("identity", c))
                for s in gens:
                    m = self.act(s, c)
                    if m.target != self.value(c.permuted(s)):
                        failures.append(("target", c, s))
                        continue
                    for t in gens:
                        lhs = self.act(perm_compose(s, t), c)
                        rhs = self.act(s, c.permuted(t)).after(self.act(t, c))
                        if not lhs.equals(rhs):
                            failures.append(("composition", c, s, t))
        return failures

    def sizes(self, n):
        return {c: len(self.value(c)) for c in self.corollas(n)}


def _identity_fn(base):
    if base == bc.FINSET:
        return lambda i: i
    from fractions import Fraction

    return lambda i: {i: Fraction(1)}


class CollectionMap:
    """A family of morphisms ``source(c) -> target(c)``."""

    def __init__(self, source, target, component):
        self.source = source
        self.target = target
        self._component = component
        self._cache = {}

    def component(self, c):
        m = self._cache.get(c)
        if m is None:
            m = self._cache[c] = self._component(c)
        return m

    __call__ = component

    def check_natural(self, bound=None):
        failures = []
        for n in self.source.arities(bound):
            gens = [transposition(n, i) for i in range(n - 1)]
            for c in self.source.corollas(n):
                if not len(self.source.value(c)):
                    continue
                for s in gens:
                    lhs = self.component(c.permuted(s)).after(self.source.act(s, c))
                    rhs = self.target.act(s, c).after(self.component(c))
                    if not lhs.equals(rhs):
                        failures.append((c, s))
        return failures

    def after(self, other):
        return CollectionMap(other.source, self.target,
                             lambda c: self.component(c).after(other.component(c)))


def identity_map(coll):
    return CollectionMap(coll, coll, lambda c: bc.identity(coll.value(c)))


class ColorFamily:
    """A base object ``M(x)`` for each color ``x``."""

    def __init__(self, colors, values, base=None):
        self.colors = tuple(colors)
        self.values = {x: values[x] for x in self.colors}
        bases = {v.base for v in self.values.values()}
        if base is None:
            if len(bases) != 1:
                raise ValueError("cannot infer base of the family")
            base = bases.pop()
        elif bases - {base}:
            raise bc.MixedBase("family values in another base")
        self.base = base

    def __getitem__(self, x):
        return self.values[x]

    def __eq__(self, other):
        return (isinstance(other, ColorFamily) and self.colors == other.colors
                and all(self.values[x] == other.values[x] for x in self.colors))

    def __repr__(self):
        return f"ColorFamily({ {x: len(v) for x, v in self.values.items()} })"


# ---------------------------------------------------------------------------
# basic collections


def unit_collection(colors, base=bc.FINSET):
    """Unit object at ``(x; x)``, initial elsewhere."""
    u = bc.unit(base)
    empty = bc.initial(base)
    return Collection(
        colors, base,
        lambda c: u if c.inputs == (c.output,) else empty,
        support={1}, name="1",
    )


def embed_degree0(M):
    """``M`` as a collection concentrated in arity 0."""
    return Collection(M.colors, M.base, lambda c: M[c.output], support={0},
                      name="embed(M)")


def truncate_Z(coll):
    """Nullary values ``Z(Φ)(y) = Φ(; y)``."""
    return ColorFamily(coll.colors, {y: coll.value(Corolla((), y)) for y in coll.colors},
                       base=coll.base)


def initial_family(colors, base=bc.FINSET):
    return ColorFamily(colors, {x: bc.initial(base) for x in colors}, base=base)


# ---------------------------------------------------------------------------
# change of colors


@dataclass(frozen=True)
class ColorMap:
    source: tuple
    target: tuple
    mapping: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "source", tuple(self.source))
        object.__setattr__(self, "target", tuple(self.target))
        for x in self.source:
            if self.mapping.get(x) not in self.target:
                raise ValueError(f"color map is not total: {x!r}")

    def __call__(self, x):
        return self.mapping[x]

    def corolla(self, c):
        return Corolla(tuple(self.mapping[x] for x in c.inputs), self.mapping[c.output])

    @property
    def injective(self):
        imgs = [self.mapping[x] for x in self.source]
        return len(set(imgs)) == len(imgs)

    def preimages(self, y):
        return tuple(x for x in self.source if self.mapping[x] == y)


def identity_color_map(colors):
    return ColorMap(colors, colors, {x: x for x in colors})


def pullback(f, coll):
    """``f*Φ(x1..xn; x) = Φ(f x1..f xn; f x)``."""
    if tuple(coll.colors) != f.target:
        raise ColorMismatch("collection colors differ from the map's target")
    return Collection(
        f.source, coll.base,
        lambda c: coll.value(f.corolla(c)),
        act=lambda g, c: coll.act(g, f.corolla(c)),
        arity_bound=coll.arity_bound, support=coll.support,
        name=f"f*{coll.name or ''}",
    )


def fiber_corollas(f, c):
    """X-corollas over the Y-corolla ``c``, in lexicographic order."""
    from itertools import product

    ins = [f.preimages(y) for y in c.inputs]
    outs = f.preimages(c.output)
    return [Corolla(t, x) for t in product(*ins) for x in outs]


class _SummedPushforward(Collection):
    """``f_!Φ(c) = ∐ over X-corollas d above c of Φ(d)``.

    A fibre with a single corolla reuses ``Φ(d)`` itself, so for a mono
    ``f`` the values are literally those of ``Φ``.
    """

    def __init__(self, f, coll):
        self.f = f
        self.inner = coll
        super().__init__(f.target, coll.base, self._val, act=self._act_impl,
                         arity_bound=coll.arity_bound, support=coll.support,
                         name=f"f!{coll.name or ''}")

    def summands(self, c):
        """``[(d, offset)]`` for the X-corollas above ``c``."""
        out = []
        off = 0
        for d in fiber_corollas(self.f, c):
            out.append((d, off))
            off += len(self.inner.value(d))
        return out

    def _val(self, c):
        ds = fiber_corollas(self.f, c)
        if len(ds) == 1:
            return self.inner.value(ds[0])
        return bc.coproduct([self.inner.value(d) for d in ds], tags=[str(d) for d in ds],
                            base=self.base)

    def include(self, c, d):
        """Summand inclusion ``Φ(d) -> f_!Φ(c)``."""
        offs = dict(self.summands(c))
        off = offs[d]
        src = self.inner.value(d)
        if self.base == bc.FINSET:
            fn = lambda i: i + off
        else:
            fn = lambda i: {i + off: 1}
        return bc.BaseMorphism(src, self.value(c), fn=fn)

    def _act_impl(self, g, c):
        src = self.value(c)
        tgt = self.value(c.permuted(g))
        table = []
        tgt_offs = dict(self.summands(c.permuted(g)))
        for d, off in self.summands(c):
            m = self.inner.act(g, d)
            toff = tgt_offs[d.permuted(g)]
            for i in range(len(self.inner.value(d))):
                img = m(i)
                if self.base == bc.FINSET:
                    table.append(img + toff)
                else:
                    table.append({k + toff: x for k, x in img.items()})
        return bc.BaseMorphism(src, tgt, table=table)


def pushforward_mono(i, coll):
    """``i_!Φ`` for an injective color map: ``Φ`` at image corollas, initial elsewhere."""
    if not i.injective:
        raise NotMono("pushforward_mono needs an injective color map")
    if tuple(coll.colors) != i.source:
        raise ColorMismatch("collection colors differ from the map's source")
    return _SummedPushforward(i, coll)


def pushforward_sum(f, coll):
    """Coproduct-over-fibres pushforward along any color map.

    Only used to materialise both sides of the monoidality comparison for
    non-injective maps.
    """
    if tuple(coll.colors) != f.source:
        raise ColorMismatch("collection colors differ from the map's source")
    return _SummedPushforward(f, coll)
