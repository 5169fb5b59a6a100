"""g-polytopes of nonsingular fans: convexity, half-space descriptions,
lattice points and reflexivity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import ceil, floor
from typing import Iterable, Optional, Sequence

from .exactlin import (
    Vector,
    adjugate_rows,
    cross,
    det,
    dot,
    fm_bounds,
    fm_feasible,
    make_primitive,
    solve_normal,
    sub,
)
from .fan import Fan, adjacency_pairs, contains, exchange_relation

SignVector = tuple[int, ...]


class DomainError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class HalfSpace:
    normal: Vector
    bound: int = 1

    def holds(self, x: Sequence[int]) -> bool:
        return dot(self.normal, x) <= self.bound

    def strict(self, x: Sequence[int]) -> bool:
        return dot(self.normal, x) < self.bound


def _as_half_spaces(items: Iterable) -> list[HalfSpace]:
    return [h if isinstance(h, HalfSpace) else HalfSpace(tuple(h)) for h in items]


def simplex_conv0(vectors: Sequence[Vector]) -> list[Vector]:
    """Vertices of the simplex spanned by the origin and the given rays."""
    if not vectors:
        return []
    zero = tuple(0 for _ in vectors[0])
    return [zero] + [tuple(v) for v in vectors]


# -- convexity ---------------------------------------------------------------


@dataclass
class ConvexityResult:
    """Outcome of the pairwise test.

    ``convex`` is the label-sum criterion (sum a_i <= 2 at every wall), which
    is the local form of the hull inequalities.  ``nonnegative`` records
    whether every exchange coefficient is >= 0, as it is for any fan whose
    maximal cones are ordered by the side-of-wall rule.
    """

    convex: bool
    witness: Optional[tuple[int, int, tuple[int, ...]]] = None
    nonnegative: bool = True
    negative_witness: Optional[tuple[int, int, tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.convex


def is_convex(f: Fan) -> ConvexityResult:
    """Pairwise criterion: every exchange x + y = sum a_i t_i has sum a_i <= 2.

    Reports the first violating pair (cone indices and labels), and separately
    the first pair with a negative coefficient.
    """
    out = ConvexityResult(True)
    for i, j, _ in adjacency_pairs(f):
        labels = exchange_relation(f, i, j, strict=False).labels
        if sum(labels) > 2 and out.convex:
            out.convex, out.witness = False, (i, j, labels)
        if min(labels) < 0 and out.nonnegative:
            out.nonnegative, out.negative_witness = False, (i, j, labels)
    return out


def cone_normal(vectors: Sequence[Vector]) -> Vector:
    return solve_normal(vectors)


def half_space_set(f: Fan) -> list[HalfSpace]:
    normals = {cone_normal(f.vectors(c)) for c in f.max_cones}
    return [HalfSpace(n) for n in sorted(normals)]


def hull_oracle(f: Fan) -> bool:
    """Direct test: every ray satisfies <ray, v_tau> <= 1 for every maximal cone."""
    hs = half_space_set(f)
    return all(h.holds(r) for h in hs for r in f.rays)


def in_union(f: Fan, x: Sequence[int]) -> bool:
    """Whether x lies in the union of the simplices Conv0(sigma)."""
    for c in f.max_cones:
        vs = f.vectors(c)
        if contains(vs, x) and dot(cone_normal(vs), x) <= 1:
            return True
    return False


def in_region(half_spaces: Iterable[HalfSpace], x: Sequence[int]) -> bool:
    return all(h.holds(x) for h in _as_half_spaces(half_spaces))


# -- lattice points ------------------------------------------------------------


def _system(half_spaces: Sequence[HalfSpace], eps: Optional[SignVector], rank: int):
    rows = [(tuple(h.normal), h.bound) for h in half_spaces]
    if eps is not None:
        for i, e in enumerate(eps):
            rows.append((tuple(-e if k == i else 0 for k in range(rank)), 0))
    return rows


def bounding_box(rows, rank: int) -> list[tuple[int, int]]:
    box = []
    for k in range(rank):
        lo, hi = fm_bounds(rows, rank, k)
        box.append((ceil(lo), floor(hi)))
    return box


def lattice_points_in_orthant(half_spaces: Iterable, eps: SignVector) -> list[Vector]:
    """Nonzero integer points of the region {<x, v> <= b} inside the closed
    orthant eps.  Raises UnboundedError when the region is unbounded."""
    hs = _as_half_spaces(half_spaces)
    rank = len(eps)
    rows = _system(hs, eps, rank)
    if not fm_feasible(rows, rank):
        return []
    box = bounding_box(rows, rank)
    out = []
    for x in product(*(range(lo, hi + 1) for lo, hi in box)):
        if any(x) and all(dot(c, x) <= b for c, b in rows):
            out.append(x)
    return sorted(out)


def condition_H(normals: Iterable[Sequence[int]], eps: Optional[SignVector] = None) -> bool:
    """Every rank-many vectors from normals and {-eps_i e_i} have det in {0, ±1}."""
    vs = {tuple(n) for n in normals}
    if not vs and eps is None:
        return True
    rank = len(eps) if eps is not None else len(next(iter(vs)))
    if eps is not None:
        for i, e in enumerate(eps):
            vs.add(tuple(-e if k == i else 0 for k in range(rank)))
    return all(abs(det(c)) <= 1 for c in combinations(sorted(vs), rank))


# -- polytopes -------------------------------------------------------------------


@dataclass(frozen=True)
class GPolytope:
    vertex_candidates: tuple[Vector, ...]
    half_spaces: tuple[HalfSpace, ...]
    origin_interior: bool

    @property
    def rank(self) -> int:
        return len(self.vertex_candidates[0])

    def to_dict(self) -> dict:
        return {
            "vertices": [list(v) for v in self.vertex_candidates],
            "normals": [list(h.normal) for h in self.half_spaces],
        }


def g_polytope(f: Fan) -> GPolytope:
    hs = tuple(half_space_set(f))
    zero = tuple(0 for _ in range(f.rank))
    return GPolytope(tuple(sorted(f.rays)), hs, all(h.strict(zero) for h in hs))


def hull_facets(points: Sequence[Vector]) -> list[HalfSpace]:
    """Facet inequalities <n, x> <= c of conv(points) with primitive integer n.

    Brute force over affinely independent subsets; fine for a few dozen points.
    """
    pts = sorted(set(tuple(p) for p in points))
    rank = len(pts[0])
    out = set()
    for sub_pts in combinations(pts, rank):
        base = sub_pts[0]
        diffs = [sub(p, base) for p in sub_pts[1:]]
        if rank == 3:
            n = cross(diffs[0], diffs[1])
        else:
            n = (-diffs[0][1], diffs[0][0])
        if not any(n):
            continue
        n = make_primitive(n)
        c = dot(n, base)
        vals = [dot(n, p) for p in pts]
        if all(v <= c for v in vals):
            out.add(HalfSpace(n, c))
        elif all(v >= c for v in vals):
            out.add(HalfSpace(tuple(-a for a in n), -c))
    return sorted(out)


def polytope_from_vertices(points: Iterable[Sequence[int]]) -> GPolytope:
    pts = tuple(sorted(set(tuple(p) for p in points)))
    hs = tuple(hull_facets(pts))
    zero = tuple(0 for _ in pts[0])
    return GPolytope(pts, hs, all(h.strict(zero) for h in hs))


def polytope_from_half_spaces(half_spaces: Iterable) -> GPolytope:
    """Polytope cut out by the half-spaces; its vertices may be rational."""
    hs = tuple(sorted(_as_half_spaces(half_spaces)))
    rank = len(hs[0].normal)
    verts = set()
    for sub_hs in combinations(hs, rank):
        cols = [h.normal for h in sub_hs]
        d = det(cols)
        if d == 0:
            continue
        # solve <n_i, x> = b_i: x = (N^T)^{-1} b, using adjugate rows of N
        rows = adjugate_rows(cols)
        x = tuple(
            Fraction(sum(rows[j][i] * sub_hs[j].bound for j in range(rank)), d) for i in range(rank)
        )
        if all(dot(h.normal, x) <= h.bound for h in hs):
            verts.add(x)
    zero = tuple(0 for _ in range(rank))
    vs = tuple(sorted(tuple(int(c) if c.denominator == 1 else c for c in v) for v in verts))
    return GPolytope(vs, hs, all(h.strict(zero) for h in hs))


def is_reflexive(p: GPolytope) -> bool:
    """Lattice vertices, and every facet of the hull sits at lattice distance 1
    from the origin (equivalently: integral facet normals at bound 1)."""
    if not p.origin_interior:
        raise DomainError("the origin is not an interior point")
    if any(isinstance(c, Fraction) for v in p.vertex_candidates for c in v):
        return False
    facets = hull_facets(p.vertex_candidates)
    if any(h.bound != 1 for h in facets):
        return False
    if p.half_spaces and all(h.bound == 1 for h in p.half_spaces):
        # the stored H-description must reproduce the hull exactly
        return {h.normal for h in facets} == {h.normal for h in p.half_spaces}
    return True


def interior_lattice_points(p: GPolytope) -> list[Vector]:
    hs = p.half_spaces or tuple(hull_facets(p.vertex_candidates))
    rank = len(hs[0].normal)
    rows = _system(hs, None, rank)
    box = bounding_box(rows, rank)
    return [
        x
        for x in product(*(range(lo, hi + 1) for lo, hi in box))
        if all(h.strict(x) for h in hs)
    ]


def unique_interior_lattice_point(p: GPolytope) -> bool:
    zero = tuple(0 for _ in range(len(p.half_spaces[0].normal if p.half_spaces else p.vertex_candidates[0])))
    return interior_lattice_points(p) == [zero]
