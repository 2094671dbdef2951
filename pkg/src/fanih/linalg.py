"""Exact linear algebra over the rationals.

All routines work on lists of rows of ``Fraction`` values, use leftmost-pivot
elimination with no magnitude-based pivoting, and are fully deterministic:
identical inputs produce identical outputs independent of call order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def add_vec(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub_vec(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale_vec(c: Fraction, a: Sequence[Fraction]) -> Vec:
    return tuple(c * x for x in a)


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def mat_vec(m: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    bt = list(zip(*b)) if b else []
    return [[dot(row, col) for col in bt] for row in a]


def transpose(m: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    return [list(col) for col in zip(*m)] if m else []


def identity(n: int) -> list[list[Fraction]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None):
    """Reduced row echelon form with leftmost pivots.

    Returns ``(echelon_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[0])


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Canonical kernel basis of the linear map given by ``rows``.

    One basis vector per free column, in ascending column order, with a 1 in
    the free position (the canonical echelon form of the null space).
    """
    ech, pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    free_cols = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -ech[r][fc]
        basis.append(tuple(v))
    return basis


def solve(rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Vec | None:
    """Canonical particular solution of ``rows @ x = rhs`` (free vars = 0).

    Returns ``None`` when the system is inconsistent.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    ech, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = ech[r][ncols]
    return tuple(x)


def det(m: Sequence[Sequence[Fraction]]) -> Fraction:
    n = len(m)
    a = [list(r) for r in m]
    sign = ONE
    d = ONE
    for c in range(n):
        sel = None
        for i in range(c, n):
            if a[i][c] != 0:
                sel = i
                break
        if sel is None:
            return ZERO
        if sel != c:
            a[c], a[sel] = a[sel], a[c]
            sign = -sign
        pv = a[c][c]
        d *= pv
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / pv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * d


class SpanTracker:
    """Incrementally tracked row span with greedy deterministic extension."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._ech: list[list[Fraction]] = []
        self._pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self._pivots)

    def reduce(self, v: Sequence[Fraction]) -> list[Fraction]:
        w = list(v)
        for row, p in zip(self._ech, self._pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        return w

    def contains(self, v: Sequence[Fraction]) -> bool:
        return all(x == 0 for x in self.reduce(v))

    def add(self, v: Sequence[Fraction]) -> bool:
        """Add ``v`` to the span; returns True iff it was independent."""
        w = self.reduce(v)
        p = next((i for i, x in enumerate(w) if x != 0), None)
        if p is None:
            return False
        pv = w[p]
        w = [x / pv for x in w]
        for i, (row, q) in enumerate(zip(self._ech, self._pivots)):
            if row[p] != 0:
                f = row[p]
                self._ech[i] = [x - f * y for x, y in zip(row, w)]
        # keep rows sorted by pivot column so the state is canonical
        k = 0
        while k < len(self._pivots) and self._pivots[k] < p:
            k += 1
        self._ech.insert(k, w)
        self._pivots.insert(k, p)
        return True


def extend_independent(base: Sequence[Sequence[Fraction]],
                       candidates: Sequence[Sequence[Fraction]],
                       ncols: int) -> list[int]:
    """Indices of ``candidates`` that greedily extend the span of ``base``."""
    tracker = SpanTracker(ncols)
    for b in base:
        tracker.add(b)
    chosen = []
    for i, c in enumerate(candidates):
        if tracker.add(c):
            chosen.append(i)
    return chosen


class QuotientSpace:
    """Coordinates in span(W + reps) modulo span(W), for fixed bases.

    ``reps`` must be independent modulo ``W``; ``coords`` then returns the
    coefficients of a vector's class with respect to the chosen
    representatives (raising ``ValueError`` if the vector is outside the
    combined span).
    """

    def __init__(self, w_rows: Sequence[Sequence[Fraction]],
                 reps: Sequence[Sequence[Fraction]], ncols: int):
        self.ncols = ncols
        self.nreps = len(reps)
        aug = [list(r) + [ZERO] * self.nreps for r in w_rows]
        for i, r in enumerate(reps):
            row = list(r) + [ZERO] * self.nreps
            row[ncols + i] = ONE
            aug.append(row)
        self._ech, self._pivots = rref(aug, ncols + self.nreps)
        for p in self._pivots:
            if p >= ncols:
                raise ValueError("representatives dependent modulo subspace")

    def coords(self, v: Sequence[Fraction]) -> Vec:
        w = list(v) + [ZERO] * self.nreps
        for row, p in zip(self._ech, self._pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        if any(x != 0 for x in w[: self.ncols]):
            raise ValueError("vector not in tracked span")
        return tuple(-x for x in w[self.ncols:])
