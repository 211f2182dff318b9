"""Sparse exact linear algebra over the rationals.

Vectors are dicts ``{index: Fraction}`` with zero entries omitted.
"""

from fractions import Fraction


def vadd(acc, vec, coeff=1):
    """acc += coeff * vec, in place."""
    for k, x in vec.items():
        y = acc.get(k, 0) + coeff * x
        if y:
            acc[k] = y
        else:
            acc.pop(k, None)
    return acc


def vscale(vec, coeff):
    if not coeff:
        return {}
    return {k: coeff * x for k, x in vec.items()}


def basis_vector(i):
    return {i: Fraction(1)}


class Echelon:
    """Incrementally maintained reduced row echelon form.

    Pivots are the first nonzero index of each row; every row has
    pivot coefficient 1 and no row contains another row's pivot.
    """

    def __init__(self):
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, vec):
        v = dict(vec)
        for p in [k for k in v if k in self.rows]:
            c = v.get(p)
            if c:
                vadd(v, self.rows[p], -c)
        return v

    def add(self, vec):
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v)
        v = vscale(v, 1 / Fraction(v[p]))
        for q, row in self.rows.items():
            c = row.get(p)
            if c:
                vadd(row, v, -c)
        self.rows[p] = v
        return True

    def pivots(self):
        return sorted(self.rows)


def rank(columns):
    ech = Echelon()
    for col in columns:
        ech.add(col)
    return len(ech)


def inverse_columns(columns, size):
    """Invert a square matrix given by sparse columns; None if singular."""
    n = size
    if len(columns) != n:
        return None
    # Monomial matrices invert entrywise.
    if all(len(col) == 1 for col in columns):
        inv = [None] * n
        for j, col in enumerate(columns):
            (i, x), = col.items()
            if inv[i] is not None:
                return None
            inv[i] = {j: 1 / Fraction(x)}
        return inv
    # Sparse row reduction of [A | I]; rows of A carry e_(n+i).
    rows = [{} for _ in range(n)]
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                rows[i][j] = Fraction(x)
    ech = Echelon()
    for i, row in enumerate(rows):
        row[n + i] = Fraction(1)
        if not ech.add(row):
            return None
    if ech.pivots() != list(range(n)):
        return None
    inv = [{} for _ in range(n)]
    for p, row in ech.rows.items():
        for k, x in row.items():
            if k >= n:
                inv[k - n][p] = x
    return inv
