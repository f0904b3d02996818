"""Exact rational vector helpers and integer row reduction.

Vectors are plain tuples of :class:`fractions.Fraction`.  Nothing in here
touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]


def vec(values: Iterable) -> Vec:
    return tuple(Fraction(x) for x in values)


def zero(n: int) -> Vec:
    return (Fraction(0),) * n


def unit(n: int, i: int) -> Vec:
    return tuple(Fraction(int(j == i)) for j in range(n))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def add(a: Vec, b: Vec) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Vec, b: Vec) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * x for x in a)


def neg(a: Vec) -> Vec:
    return tuple(-x for x in a)


def axpy(c, x: Vec, y: Vec) -> Vec:
    """Return ``y + c*x``."""
    return tuple(yi + c * xi for xi, yi in zip(x, y))


def norm2(a: Vec) -> Fraction:
    return dot(a, a)


def coroot(a: Vec) -> Vec:
    return scale(Fraction(2) / norm2(a), a)


def reflect(x: Vec, root: Vec) -> Vec:
    """Reflect ``x`` in the hyperplane orthogonal to ``root``."""
    return axpy(-dot(x, coroot(root)), root, x)


def is_integral(x: Iterable[Fraction]) -> bool:
    return all(Fraction(v).denominator == 1 for v in x)


def common_denominator(vectors: Iterable[Iterable[Fraction]]) -> int:
    d = 1
    for v in vectors:
        for x in v:
            d = lcm(d, Fraction(x).denominator)
    return d


def fmt(x: Fraction) -> str:
    """Serialize a rational as ``"num/den"`` (or ``"num"`` when integral)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse(s) -> Fraction:
    return Fraction(s)


def fmt_vec(v: Iterable[Fraction]) -> list[str]:
    return [fmt(x) for x in v]


def parse_vec(items: Iterable) -> Vec:
    return tuple(Fraction(x) for x in items)


# -- matrices -----------------------------------------------------------------

Mat = tuple[Vec, ...]


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def transpose(m: Sequence[Sequence[Fraction]]) -> Mat:
    return tuple(tuple(col) for col in zip(*m))


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vec | None:
    """Solve the square system ``a x = b`` exactly; ``None`` if singular."""
    n = len(a)
    m = [list(map(Fraction, row)) + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[r][n] for r in range(n))


def inverse(a: Sequence[Sequence[Fraction]]) -> Mat:
    n = len(a)
    cols = []
    for j in range(n):
        x = solve(a, unit(n, j))
        if x is None:
            raise ZeroDivisionError("singular matrix")
        cols.append(x)
    return transpose(cols)


def project(v: Vec, span: Sequence[Vec]) -> Vec:
    """Orthogonal projection of ``v`` onto the span of linearly independent ``span``."""
    if not span:
        return zero(len(v))
    gram = [[dot(a, b) for b in span] for a in span]
    c = solve(gram, [dot(v, a) for a in span])
    if c is None:
        raise ValueError("spanning vectors are linearly dependent")
    out = zero(len(v))
    for ci, a in zip(c, span):
        out = axpy(ci, a, out)
    return out


# -- integer row echelon (Hermite normal form) ----------------------------------


def hermite(rows: Sequence[Sequence[int]], ncols: int | None = None,
            transform: bool = False):
    """Row-style Hermite normal form of an integer matrix.

    Returns ``(H, pivots)`` or ``(H, pivots, U)`` with ``U @ rows == H`` padded by
    zero rows.  ``H`` holds only the nonzero rows; pivots are positive and the
    entries above each pivot are reduced into ``[0, pivot)``.
    """
    a = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    k = len(a)
    u = [[int(i == j) for j in range(k)] for i in range(k)] if transform else None

    def combine(dst, src, q):
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        if u is not None:
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        if u is not None:
            u[i], u[j] = u[j], u[i]

    pivots = []
    r = 0
    for col in range(ncols):
        if r >= k:
            break
        while True:
            nz = [i for i in range(r, k) if a[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][col]))
            swap(r, best)
            clean = True
            for i in range(r + 1, k):
                if a[i][col] != 0:
                    combine(i, r, a[i][col] // a[r][col])
                    if a[i][col] != 0:
                        clean = False
            if clean:
                break
        if r < k and a[r][col] != 0:
            if a[r][col] < 0:
                a[r] = [-x for x in a[r]]
                if u is not None:
                    u[r] = [-x for x in u[r]]
            for i in range(r):
                combine(i, r, a[i][col] // a[r][col])
            pivots.append(col)
            r += 1
    h = [tuple(row) for row in a[:r]]
    if transform:
        return h, pivots, [tuple(row) for row in u]
    return h, pivots


def reduce_against(h: Sequence[Sequence[int]], pivots: Sequence[int],
                   w: Sequence[int]) -> tuple[list[int], list[int]]:
    """Reduce integer vector ``w`` by echelon rows ``h``.

    Returns ``(remainder, coefficients)`` where ``w = coeffs @ h + remainder`` and
    the remainder is zero at pivot columns only if ``w`` is divisible there.
    """
    w = list(w)
    coeffs = []
    for row, col in zip(h, pivots):
        q = w[col] // row[col]
        coeffs.append(q)
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return w, coeffs
