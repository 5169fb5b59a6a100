"""Exact integer linear algebra in rank 2 and 3.

Vectors are plain tuples of Python ints.  Everything here is exact; the few
places that need division go through :class:`fractions.Fraction`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vector = tuple[int, ...]


class DimensionError(ValueError):
    pass


class NotUnimodularError(ValueError):
    pass


class UnboundedError(ValueError):
    pass


def vec(coords: Iterable[int]) -> Vector:
    out = tuple(int(c) for c in coords)
    if len(out) not in (2, 3):
        raise DimensionError(f"rank must be 2 or 3, got {len(out)}")
    return out


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v))


def add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(k: int, v: Vector) -> Vector:
    return tuple(k * a for a in v)


def neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def cross(u: Vector, v: Vector) -> Vector:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def det(columns: Sequence[Sequence[int]]) -> int:
    """Determinant of the square matrix with the given columns."""
    n = len(columns)
    if any(len(c) != n for c in columns):
        raise DimensionError("determinant needs a square matrix")
    if n == 0:
        return 1
    if n == 1:
        return columns[0][0]
    if n == 2:
        (a, c), (b, d) = columns
        return a * d - b * c
    if n == 3:
        return dot(columns[0], cross(tuple(columns[1]), tuple(columns[2])))
    # Laplace expansion along the first column; only reached from tests.
    total = 0
    for i in range(n):
        minor = [tuple(c[k] for k in range(n) if k != i) for c in columns[1:]]
        total += (-1) ** i * columns[0][i] * det(minor)
    return total


def make_primitive(v: Sequence[int]) -> Vector:
    g = 0
    for a in v:
        g = gcd(g, a)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(a // g for a in v)


def is_primitive(v: Sequence[int]) -> bool:
    g = 0
    for a in v:
        g = gcd(g, a)
    return g == 1


def adjugate_rows(columns: Sequence[Vector]) -> list[Vector]:
    """Rows of adj(M) for M with the given columns, so adj(M)·M = det(M)·I.

    Row i is the vector r with <r, column_j> = det(M) * [i == j].
    """
    n = len(columns)
    if n == 2:
        (a, c), (b, d) = columns
        return [(d, -b), (-c, a)]
    if n == 3:
        u, v, w = columns
        return [cross(v, w), cross(w, u), cross(u, v)]
    raise DimensionError("adjugate only implemented for rank 2 and 3")


def coordinates(basis: Sequence[Vector], x: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients c with sum c_i * basis_i = x."""
    d = det(basis)
    if d == 0:
        raise NotUnimodularError("basis is singular")
    return tuple(Fraction(dot(r, x), d) for r in adjugate_rows(basis))


def int_coordinates(basis: Sequence[Vector], x: Sequence[int]) -> Vector:
    d = det(basis)
    if abs(d) != 1:
        raise NotUnimodularError(f"|det| = {abs(d)}, expected 1")
    return tuple(d * dot(r, x) for r in adjugate_rows(basis))


def solve_normal(rays: Sequence[Vector]) -> Vector:
    """The integer vector v with <w, v> = 1 for every ray w of a unimodular cone."""
    d = det(rays)
    if abs(d) != 1:
        raise NotUnimodularError(f"|det| = {abs(d)}, expected 1")
    # v = (M^T)^{-1} · 1, and (M^T)^{-1} has the adjugate rows as columns / det.
    rows = adjugate_rows(rays)
    n = len(rays)
    return tuple(d * sum(rows[j][i] for j in range(n)) for i in range(n))


def unimodular_complement(w: Sequence[int]) -> list[Vector]:
    """Vectors c_1..c_{d-1} such that [w | c_1 | ... | c_{d-1}] has |det| = 1.

    Column reduction in the style of a Hermite normal form: the entry of
    smallest absolute value (lowest index on ties) is the pivot, and the other
    entries are reduced modulo it until a single ±1 remains.  The inverse
    operations are accumulated in V, whose pivot column ends up as ±w.
    """
    x = list(w)
    if not is_primitive(x):
        raise ValueError(f"{tuple(w)} is not primitive")
    n = len(x)
    V = [[int(i == j) for j in range(n)] for i in range(n)]  # V[col][row]
    while True:
        nonzero = [i for i in range(n) if x[i] != 0]
        p = min(nonzero, key=lambda i: (abs(x[i]), i))
        if len(nonzero) == 1:
            break
        for j in nonzero:
            if j == p:
                continue
            q = x[j] // x[p]
            if q:
                x[j] -= q * x[p]
                V[p] = [a + q * b for a, b in zip(V[p], V[j])]
    return [tuple(V[j]) for j in range(n) if j != p]


# -- Fourier-Motzkin -------------------------------------------------------
#
# An inequality is a pair (coeffs, bound) meaning sum coeffs_i * x_i <= bound,
# with integer data.  Rows are kept primitive so the row set stays small.

Inequality = tuple[Vector, int]


def _normalize(row: Inequality) -> Inequality:
    coeffs, b = row
    g = b
    for c in coeffs:
        g = gcd(g, c)
    if g > 1:
        return tuple(c // g for c in coeffs), b // g
    return row


def fm_eliminate(rows: Iterable[Inequality], k: int) -> list[Inequality]:
    pos, negs, rest = [], [], set()
    for row in rows:
        c = row[0][k]
        if c > 0:
            pos.append(row)
        elif c < 0:
            negs.append(row)
        else:
            rest.add(_normalize(row))
    for pc, pb in pos:
        for nc, nb in negs:
            a, b = -nc[k], pc[k]
            coeffs = tuple(a * x + b * y for x, y in zip(pc, nc))
            rest.add(_normalize((coeffs, a * pb + b * nb)))
    return sorted(rest)


def fm_feasible(rows: Iterable[Inequality], nvars: int) -> bool:
    """Whether the system has a real solution."""
    rows = list(rows)
    for k in range(nvars):
        rows = fm_eliminate(rows, k)
        if any(not any(c) and b < 0 for c, b in rows):
            return False
    return all(b >= 0 for _, b in rows)


def fm_bounds(rows: Iterable[Inequality], nvars: int, k: int) -> tuple[Fraction, Fraction]:
    """Exact range of x_k over a nonempty system; raises UnboundedError."""
    rows = list(rows)
    for j in range(nvars):
        if j != k:
            rows = fm_eliminate(rows, j)
    lo = hi = None
    for coeffs, b in rows:
        c = coeffs[k]
        if c > 0:
            v = Fraction(b, c)
            hi = v if hi is None else min(hi, v)
        elif c < 0:
            v = Fraction(b, c)
            lo = v if lo is None else max(lo, v)
    if lo is None or hi is None:
        raise UnboundedError(f"coordinate {k} is unbounded")
    return lo, hi
