"""The two concrete base categories: finite sets and finite-dimensional
rational vector spaces.

An object is a list of labels.  In ``finset`` the labels are the
elements; in ``vectq`` they name a basis.  Elements are addressed by
their index in the label list: a finite-set element is an ``int``, a
vector is a sparse dict ``{basis index: Fraction}``.

Morphisms are described on basis elements: a function ``int -> int``
for finite sets and ``int -> vector`` (a matrix column) for vector
spaces.  Tensor products and internal homs use lazily indexed label
spaces so that large hom-objects never have to be listed.
"""

from collections.abc import Sequence
from fractions import Fraction
from functools import cached_property
from math import prod

from ._linalg import Echelon, inverse_columns, rank, vadd

FINSET = "finset"
VECTQ = "vectq"
BASES = (FINSET, VECTQ)
UNIT_LABEL = "•"

# Morphisms with at most this many source elements are tabulated eagerly.
# Label lists longer than this are never compared elementwise.
_COMPARE_LIMIT = 1 << 20


class MixedBase(ValueError):
    pass


class NotInvertible(ValueError):
    pass


class NotFunctorial(ValueError):
    pass


class DescentError(ValueError):
    """A family of maps fails the cocone condition along ``arrow``."""

    def __init__(self, arrow, detail=""):
        self.arrow = arrow
        super().__init__(f"cocone condition fails along {arrow!r}{': ' + detail if detail else ''}")


# ---------------------------------------------------------------------------
# label spaces


class ProductLabels(Sequence):
    """Labels of a tensor product, in lexicographic (mixed radix) order."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        self.sizes = tuple(len(f) for f in self.factors)
        self._len = prod(self.sizes)

    def __len__(self):
        return self._len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._len))]
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        if not self.factors:
            return UNIT_LABEL
        parts = self.decode(i)
        return "(" + ",".join(f[p] for f, p in zip(self.factors, parts)) + ")"

    def decode(self, i):
        out = []
        for s in reversed(self.sizes):
            i, r = divmod(i, s)
            out.append(r)
        return tuple(reversed(out))

    def encode(self, parts):
        i = 0
        for s, p in zip(self.sizes, parts):
            i = i * s + p
        return i

    def key(self):
        return ("prod", tuple(_labels_key(f) for f in self.factors))


class FunctionLabels(Sequence):
    """All functions from an ``n``-element set into ``target``.

    A function is labelled by its value tuple ``<v0,...,v(n-1)>`` in
    source order; indices follow the lexicographic order of value tuples.
    """

    def __init__(self, source_size, target):
        self.source_size = source_size
        self.target = target
        self.base_size = len(target)
        self._len = self.base_size ** source_size

    def __len__(self):
        return self._len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._len))]
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        return "<" + ",".join(self.target[v] for v in self.decode(i)) + ">"

    def decode(self, i):
        out = []
        for _ in range(self.source_size):
            i, r = divmod(i, self.base_size)
            out.append(r)
        return tuple(reversed(out))

    def encode(self, values):
        i = 0
        for v in values:
            i = i * self.base_size + v
        return i

    def key(self):
        return ("fun", self.source_size, _labels_key(self.target))


class HomLabels(Sequence):
    """Basis ``(a_i*, b_j)`` of a linear hom space, index ``i * dim b + j``."""

    def __init__(self, source, target):
        self.source = source
        self.target = target
        self._len = len(source) * len(target)

    def __len__(self):
        return self._len

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._len))]
        if i < 0:
            i += self._len
        if not 0 <= i < self._len:
            raise IndexError(i)
        a, b = divmod(i, len(self.target))
        return f"({self.source[a]}*,{self.target[b]})"

    def key(self):
        return ("hom", _labels_key(self.source), _labels_key(self.target))


def _labels_key(labels):
    if hasattr(labels, "key"):
        return labels.key()
    return tuple(labels)


def labels_equal(a, b):
    if a is b:
        return True
    if len(a) != len(b):
        return False
    if type(a) is type(b) and hasattr(a, "key"):
        if a.key() == b.key():
            return True
    if len(a) > _COMPARE_LIMIT:
        raise ValueError("label lists too large to compare elementwise")
    return all(x == y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# objects


class BaseObject:
    """An object of ``finset`` or ``vectq``; equality is label-list equality."""

    __slots__ = ("base", "labels", "__dict__")

    def __init__(self, base, labels):
        if base not in BASES:
            raise ValueError(f"unknown base {base!r}")
        self.base = base
        if not isinstance(labels, (ProductLabels, FunctionLabels, HomLabels)):
            labels = tuple(str(x) for x in labels)
            if len(set(labels)) != len(labels):
                raise ValueError("labels must be pairwise distinct")
        self.labels = labels

    def __len__(self):
        return len(self.labels)

    @property
    def size(self):
        return len(self.labels)

    def __eq__(self, other):
        if not isinstance(other, BaseObject):
            return NotImplemented
        return self.base == other.base and labels_equal(self.labels, other.labels)

    def __hash__(self):
        return hash((self.base, len(self.labels)))

    def __repr__(self):
        n = len(self.labels)
        shown = ", ".join(self.labels[i] for i in range(min(n, 6)))
        more = ", ..." if n > 6 else ""
        return f"BaseObject({self.base}, [{shown}{more}] ({n}))"

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, label):
        return self._index[label]

    def is_initial(self):
        return len(self.labels) == 0


def finset(labels):
    return BaseObject(FINSET, labels)


def vectq(labels):
    return BaseObject(VECTQ, labels)


def unit(base):
    return BaseObject(base, (UNIT_LABEL,))


def initial(base):
    return BaseObject(base, ())


def _same_base(*objs):
    bases = {o.base for o in objs}
    if len(bases) > 1:
        raise MixedBase(f"mixed bases {sorted(bases)}")
    return bases.pop() if bases else None


# ---------------------------------------------------------------------------
# elements


def basis(obj):
    """Iterate the basis elements of ``obj`` as elements."""
    if obj.base == FINSET:
        return iter(range(len(obj)))
    return ({i: Fraction(1)} for i in range(len(obj)))


def element(obj, i):
    return i if obj.base == FINSET else {i: Fraction(1)}


def elements_equal(base, x, y):
    return x == y


def multi_apply(base, fn, args):
    """Extend ``fn`` (on basis indices) multilinearly to element tuples."""
    if base == FINSET:
        return fn(*args)
    out = {}
    terms = [((), Fraction(1))]
    for vec in args:
        terms = [(idx + (k,), c * x) for idx, c in terms for k, x in vec.items()]
    for idx, c in terms:
        vadd(out, fn(*idx), c)
    return out


# ---------------------------------------------------------------------------
# morphisms


class BaseMorphism:
    """A morphism given on basis elements of its source.

    For ``finset`` the image of index ``i`` is an index; for ``vectq`` it
    is the ``i``-th column as a sparse vector.
    """

    __slots__ = ("source", "target", "_table", "_fn", "_memo")

    def __init__(self, source, target, table=None, fn=None):
        _same_base(source, target)
        if (table is None) == (fn is None):
            raise ValueError("give exactly one of table and fn")
        self.source = source
        self.target = target
        self._fn = fn
        self._table = None
        self._memo = {}
        if table is not None:
            table = tuple(table)
            if len(table) != len(source):
                raise ValueError("table length does not match source")
            n = len(target)
            if source.base == FINSET:
                if any(not 0 <= t < n for t in table):
                    raise ValueError("function value outside target")
            else:
                table = tuple(
                    {k: Fraction(x) for k, x in col.items() if x} for col in table
                )
                if any(not 0 <= k < n for col in table for k in col):
                    raise ValueError("matrix row outside target")
            self._table = table

    @property
    def base(self):
        return self.source.base

    def __call__(self, i):
        if self._table is not None:
            return self._table[i]
        v = self._memo.get(i)
        if v is None:
            v = self._memo[i] = self._fn(i)
        return v

    def apply(self, x):
        if self.source.base == FINSET:
            return self(x)
        out = {}
        for i, c in x.items():
            vadd(out, self(i), c)
        return out

    def table(self):
        if self._table is None:
            self._table = tuple(self(i) for i in range(len(self.source)))
            self._memo = {}
        return self._table

    def after(self, other):
        """Composite ``self ∘ other``."""
        if other.target != self.source:
            raise ValueError("morphisms are not composable")
        if self.base == FINSET:
            return BaseMorphism(other.source, self.target, fn=lambda i: self(other(i)))
        return BaseMorphism(other.source, self.target, fn=lambda i: self.apply(other(i)))

    __matmul__ = after

    def equals(self, other):
        if self.source != other.source or self.target != other.target:
            return False
        return all(self(i) == other(i) for i in range(len(self.source)))

    def __eq__(self, other):
        if not isinstance(other, BaseMorphism):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def matrix(self):
        """Dense rational matrix, rows indexed by the target basis."""
        rows = [[Fraction(0)] * len(self.source) for _ in range(len(self.target))]
        for j in range(len(self.source)):
            col = self(j)
            if self.base == FINSET:
                rows[col][j] = Fraction(1)
            else:
                for i, x in col.items():
                    rows[i][j] = x
        return rows

    def is_invertible(self):
        if len(self.source) != len(self.target):
            return False
        if self.base == FINSET:
            return len(set(self.table())) == len(self.source)
        return rank(self.table()) == len(self.source)

    def inverse(self):
        if not self.is_invertible():
            raise NotInvertible("morphism is not invertible")
        if self.base == FINSET:
            inv = [0] * len(self.source)
            for i, t in enumerate(self.table()):
                inv[t] = i
            return BaseMorphism(self.target, self.source, table=inv)
        cols = inverse_columns(list(self.table()), len(self.source))
        return BaseMorphism(self.target, self.source, table=cols)

    def is_permutation(self):
        """True if every column is a single basis element (with coefficient 1)."""
        if len(self.source) != len(self.target):
            return False
        if self.base == FINSET:
            return len(set(self.table())) == len(self.source)
        seen = set()
        for col in self.table():
            if len(col) != 1:
                return False
            (k, x), = col.items()
            if x != 1 or k in seen:
                return False
            seen.add(k)
        return True

    def permutation_table(self):
        if self.base == FINSET:
            return self.table()
        return tuple(next(iter(col)) for col in self.table())

    def __repr__(self):
        return f"BaseMorphism({self.source!r} -> {self.target!r})"


def identity(obj):
    if obj.base == FINSET:
        return BaseMorphism(obj, obj, fn=lambda i: i)
    return BaseMorphism(obj, obj, fn=lambda i: {i: Fraction(1)})


def from_function(source, target, fn):
    return BaseMorphism(source, target, fn=fn)


def from_label_map(source, target, mapping):
    """Basis-to-basis map given as ``{source label: target label}``."""
    table = [target.index(mapping[lab]) for lab in source.labels]
    if source.base == VECTQ:
        table = [{j: 1} for j in table]
    return BaseMorphism(source, target, table=table)


def from_matrix(source, target, rows):
    """Linear map from a dense matrix (rows = target basis)."""
    if len(rows) != len(target) or any(len(r) != len(source) for r in rows):
        raise ValueError("matrix dimensions do not match label counts")
    cols = [
        {i: Fraction(rows[i][j]) for i in range(len(target)) if rows[i][j]}
        for j in range(len(source))
    ]
    return BaseMorphism(source, target, table=cols)


def unique_to_unit(obj):
    """The canonical map to the unit: collapse (finset) or augmentation (vectq)."""
    u = unit(obj.base)
    if obj.base == FINSET:
        return BaseMorphism(obj, u, fn=lambda i: 0)
    return BaseMorphism(obj, u, fn=lambda i: {0: Fraction(1)})


# ---------------------------------------------------------------------------
# monoidal structure


def tensor_all(objs):
    objs = list(objs)
    base = _same_base(*objs)
    if base is None:
        raise ValueError("empty tensor product needs an explicit base; use unit()")
    return BaseObject(base, ProductLabels([o.labels for o in objs]))


def tensor(a, b):
    return tensor_all([a, b])


def tensor_unit(base, objs):
    """``⊗ objs``, the unit object when ``objs`` is empty."""
    objs = list(objs)
    if not objs:
        return BaseObject(base, ProductLabels([]))
    return tensor_all(objs)


def tensor_maps(maps, source=None, target=None):
    """Tensor product of morphisms (componentwise / Kronecker)."""
    maps = list(maps)
    base = _same_base(*(m.source for m in maps))
    src = source or tensor_unit(base, [m.source for m in maps])
    tgt = target or tensor_unit(base, [m.target for m in maps])
    sl, tl = src.labels, tgt.labels
    if base == FINSET:
        def fn(i):
            parts = sl.decode(i)
            return tl.encode([m(p) for m, p in zip(maps, parts)])
    else:
        def fn(i):
            parts = sl.decode(i)
            return multi_apply(VECTQ, lambda *ks: {tl.encode(ks): Fraction(1)},
                               [m(p) for m, p in zip(maps, parts)])
    return BaseMorphism(src, tgt, fn=fn)


def coproduct(objs, tags=None, base=None):
    """Coproduct; labels are ``tag:label`` (tags default to positions)."""
    objs = list(objs)
    base = _same_base(*objs) if objs else base
    tags = list(tags) if tags is not None else list(range(len(objs)))
    labels = [f"{t}:{lab}" for t, o in zip(tags, objs) for lab in o.labels]
    return BaseObject(base, labels)


def internal_hom(a, b):
    base = _same_base(a, b)
    if base == FINSET:
        return BaseObject(FINSET, FunctionLabels(len(a), b.labels))
    return BaseObject(VECTQ, HomLabels(a.labels, b.labels))


def evaluation(a, b):
    """``hom(a, b) ⊗ a -> b``."""
    h = internal_hom(a, b)
    src = tensor(h, a)
    if a.base == FINSET:
        fl = h.labels

        def fn(i):
            f, x = src.labels.decode(i)
            return fl.decode(f)[x]
    else:
        nb = len(b)

        def fn(i):
            f, x = src.labels.decode(i)
            ai, bj = divmod(f, nb)
            return {bj: Fraction(1)} if ai == x else {}
    return BaseMorphism(src, b, fn=fn)


def curry(f, s, a):
    """Transpose ``f: s ⊗ a -> b`` to ``s -> hom(a, b)``."""
    b = f.target
    h = internal_hom(a, b)
    sa = tensor(s, a)
    if f.source != sa:
        raise ValueError("source of f must be s ⊗ a")
    na = len(a)
    if s.base == FINSET:
        def fn(i):
            return h.labels.encode([f(i * na + x) for x in range(na)])
    else:
        nb = len(b)

        def fn(i):
            out = {}
            for x in range(na):
                for bj, c in f(i * na + x).items():
                    out[x * nb + bj] = c
            return out
    return BaseMorphism(s, h, fn=fn)


def uncurry(g, a):
    """Transpose ``g: s -> hom(a, b)`` back to ``s ⊗ a -> b``."""
    s, h = g.source, g.target
    ev = evaluation(a, _hom_target(h))
    return ev.after(tensor_maps([g, identity(a)], target=ev.source))


def _hom_target(h):
    if isinstance(h.labels, FunctionLabels):
        return BaseObject(FINSET, h.labels.target)
    if isinstance(h.labels, HomLabels):
        return BaseObject(VECTQ, h.labels.target)
    raise ValueError("not an internal hom object")


# ---------------------------------------------------------------------------
# colimits over finite groupoids


class _Part:
    """Quotient of the value at one component representative."""

    def __init__(self, rep, value, offset):
        self.rep = rep
        self.value = value
        self.offset = offset
        self.survivors = []
        self.proj = None  # finset: index -> global index
        self.pos = {}  # vectq: survivor index -> global index
        self.rows = {}  # vectq: pivot index -> reduced relation row

    def project(self, x):
        if self.value.base == FINSET:
            return self.proj[x]
        out = {}
        for i, c in x.items():
            if i in self.pos:
                vadd(out, {self.pos[i]: Fraction(1)}, c)
            else:
                for k, r in self.rows[i].items():
                    if k != i:
                        vadd(out, {self.pos[k]: Fraction(1)}, -c * r)
        return out


class Colimit:
    """Result of :func:`groupoid_colimit`: apex object plus legs."""

    def __init__(self, groupoid, diagram, obj, parts):
        self.groupoid = groupoid
        self.diagram = diagram
        self.obj = obj
        self.parts = parts
        self._part_of = {p.rep: p for p in parts}
        self._sections = [(p.rep, s) for p in parts for s in p.survivors]

    @property
    def base(self):
        return self.obj.base

    def section(self, i):
        """``(representative, index in its value)`` mapping onto element ``i``."""
        return self._sections[i]

    def project(self, x, elem):
        """Image of ``elem`` in ``D(x)`` under the leg at ``x``."""
        rep, g = self.groupoid.canonicalize(x)
        part = self._part_of[rep]
        if rep == x and _is_identity(g):
            return part.project(elem)
        t = self.diagram.act(x, g)
        return part.project(t.apply(elem))

    def leg(self, x):
        rep, g = self.groupoid.canonicalize(x)
        part = self._part_of[rep]
        src = self.diagram.value(x)
        t = self.diagram.act(x, g)
        if src.base == FINSET:
            fn = lambda i: part.proj[t(i)]
        else:
            fn = lambda i: part.project(t(i))
        return BaseMorphism(src, self.obj, fn=fn)


def _is_identity(g):
    return all(i == x for i, x in enumerate(g))


def _orbit_partition(n, gens):
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for g in gens:
        for i, j in enumerate(g):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    orbits = {}
    for i in range(n):
        orbits.setdefault(find(i), []).append(i)
    return list(orbits.values())


def _finset_quotient(part, gens):
    value = part.value
    n = len(value)
    labels = value.labels
    if not gens:
        part.survivors = list(range(n))
        part.proj = range(part.offset, part.offset + n)
        return
    orbits = _orbit_partition(n, [g.permutation_table() for g in gens])
    reps = []
    for orb in orbits:
        reps.append((min(orb, key=lambda i: labels[i]), orb))
    reps.sort()
    proj = [0] * n
    for k, (r, orb) in enumerate(reps):
        for i in orb:
            proj[i] = part.offset + k
    part.survivors = [r for r, _ in reps]
    part.proj = proj


def _vectq_quotient(part, gens):
    n = len(part.value)
    if all(g.is_permutation() for g in gens):
        # Same result as elimination below: each orbit keeps its largest index.
        orbits = _orbit_partition(n, [g.permutation_table() for g in gens])
        survivors = sorted(max(orb) for orb in orbits)
        part.survivors = survivors
        part.pos = {s: part.offset + k for k, s in enumerate(survivors)}
        for orb in orbits:
            top = max(orb)
            for i in orb:
                if i != top:
                    part.rows[i] = {i: Fraction(1), top: Fraction(-1)}
        return
    ech = Echelon()
    for g in gens:
        for i in range(n):
            rel = {i: Fraction(1)}
            vadd(rel, g(i), -1)
            if rel:
                ech.add(rel)
    pivots = set(ech.rows)
    part.survivors = [i for i in range(n) if i not in pivots]
    part.pos = {s: part.offset + k for k, s in enumerate(part.survivors)}
    part.rows = ech.rows


def groupoid_colimit(groupoid, diagram, check=False):
    """Colimit of ``diagram`` over a finite groupoid.

    Each connected component contributes the quotient of the value at its
    canonical representative by the automorphism action: the orbit set in
    ``finset``, the coinvariant space in ``vectq``.  With ``check`` the
    diagram is first tested for invertibility and functoriality.
    """
    if check:
        check_diagram(groupoid, diagram)
    parts = []
    offset = 0
    base = diagram.base
    for rep in groupoid.components():
        value = diagram.value(rep)
        part = _Part(rep, value, offset)
        if len(value):
            gens = [diagram.act(rep, g) for g in groupoid.aut_generators(rep)]
            if base == FINSET:
                _finset_quotient(part, gens)
            else:
                _vectq_quotient(part, gens)
        offset += len(part.survivors)
        parts.append(part)
    nonempty = [p for p in parts if p.survivors]
    if len(nonempty) == 1:
        p = nonempty[0]
        labels = [p.value.labels[s] for s in p.survivors]
    else:
        labels = [f"{k}:{p.value.labels[s]}" for k, p in enumerate(parts) for s in p.survivors]
    if len(nonempty) == 1 and p.survivors == list(range(len(p.value))) and not isinstance(
        p.value.labels, tuple
    ):
        obj = BaseObject(base, p.value.labels)
    else:
        obj = BaseObject(base, labels)
    return Colimit(groupoid, diagram, obj, parts)


def check_diagram(groupoid, diagram, samples=None):
    """Raise NotInvertible / NotFunctorial on a generating set of arrows."""
    objs = list(groupoid.objects()) if samples is None else list(samples)
    for x in objs:
        gens = groupoid.generators(x)
        for g in gens:
            m = diagram.act(x, g)
            if m.source != diagram.value(x) or m.target != diagram.value(groupoid.act(x, g)):
                raise NotFunctorial(f"D{g!r} at {x!r} has wrong source or target")
            if not m.is_invertible():
                raise NotInvertible(f"D{g!r} at {x!r} is not invertible")
        n = len(gens[0]) if gens else 0
        ident = tuple(range(n))
        if gens and not diagram.act(x, ident).equals(identity(diagram.value(x))):
            raise NotFunctorial(f"identity not preserved at {x!r}")
        for g in gens:
            for h in gens:
                gh = tuple(g[i] for i in h)
                lhs = diagram.act(x, gh)
                rhs = diagram.act(groupoid.act(x, h), g).after(diagram.act(x, h))
                if not lhs.equals(rhs):
                    raise NotFunctorial(f"D({g!r}∘{h!r}) != D({g!r})∘D({h!r}) at {x!r}")


def descend(colim, cocone, target, check="full"):
    """Induced map out of a colimit.

    ``cocone(x)`` is a morphism ``D(x) -> target`` for each groupoid
    object.  ``check="full"`` verifies ``cocone(g·x) ∘ D(g) = cocone(x)``
    for every object and generating arrow; ``"aut"`` only along the
    automorphism generators of representatives; ``None`` skips checking.
    Raises :class:`DescentError` naming the first violating arrow.
    """
    G, D = colim.groupoid, colim.diagram
    cache = {}

    def leg(x):
        if x not in cache:
            cache[x] = cocone(x)
        return cache[x]

    if check == "full":
        arrows = ((x, g) for x in G.objects() for g in G.generators(x))
    elif check == "aut":
        arrows = ((p.rep, g) for p in colim.parts for g in G.aut_generators(p.rep))
    else:
        arrows = ()
    for x, g in arrows:
        src = D.value(x)
        if not len(src):
            continue
        dx = D.act(x, g)
        phi_x, phi_y = leg(x), leg(G.act(x, g))
        for i in range(len(src)):
            if phi_y.apply(dx(i)) != phi_x(i):
                raise DescentError((x, g), f"basis element {src.labels[i]}")
    table = []
    for p in colim.parts:
        if not p.survivors:
            continue
        phi = leg(p.rep)
        table.extend(phi(s) for s in p.survivors)
    return BaseMorphism(colim.obj, target, table=table)
