"""Simplicial fans in rank 2 and 3: validity checks, adjacency, exchanges
and the Hasse orientation of maximal cones."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .exactlin import (
    Vector,
    adjugate_rows,
    cross,
    det,
    dot,
    fm_feasible,
    is_primitive,
    vec,
)

Cone = tuple[int, ...]
SignVector = tuple[int, ...]


class StructuralError(ValueError):
    """Malformed fan data: dangling indices, duplicate rays or cones."""


class UnsupportedError(ValueError):
    pass


class NotAdjacentError(ValueError):
    pass


class OrderingViolation(ValueError):
    """An exchange relation with a negative coefficient."""


class OrientationError(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple[Vector, ...]
    max_cones: tuple[Cone, ...]

    @classmethod
    def build(cls, rays: Iterable[Sequence[int]], cones: Iterable[Iterable[int]]) -> "Fan":
        rays = tuple(vec(r) for r in rays)
        if not rays:
            raise StructuralError("a fan needs at least one ray")
        rank = len(rays[0])
        if any(len(r) != rank for r in rays):
            raise StructuralError("rays of mixed rank")
        if len(set(rays)) != len(rays):
            raise StructuralError("duplicate rays")
        for r in rays:
            if not is_primitive(r):
                raise StructuralError(f"ray {r} is not primitive")
        out = []
        for c in cones:
            c = tuple(sorted(int(i) for i in c))
            if len(set(c)) != len(c):
                raise StructuralError(f"cone {c} repeats a ray")
            if any(i < 0 or i >= len(rays) for i in c):
                raise StructuralError(f"cone {c} references a missing ray")
            out.append(c)
        if len(set(out)) != len(out):
            raise StructuralError("duplicate maximal cones")
        return cls(rank, rays, tuple(sorted(out)))

    @classmethod
    def from_cones(cls, cones: Iterable[Iterable[Sequence[int]]]) -> "Fan":
        """Build from cones given by their ray vectors; rays get sorted ids."""
        cones = [[vec(r) for r in c] for c in cones]
        rays = sorted({r for c in cones for r in c})
        index = {r: i for i, r in enumerate(rays)}
        return cls.build(rays, [[index[r] for r in c] for c in cones])

    def vectors(self, cone: Iterable[int]) -> list[Vector]:
        return [self.rays[i] for i in cone]

    def ray_index(self, ray: Sequence[int]) -> int:
        try:
            return self.rays.index(tuple(ray))
        except ValueError:
            raise ValueError(f"{tuple(ray)} is not a ray of the fan") from None

    def cone_index(self, rays: Iterable[Sequence[int]]) -> int:
        c = tuple(sorted(self.ray_index(r) for r in rays))
        return self.max_cones.index(c)

    def normalized(self) -> "Fan":
        """Same fan with rays sorted lexicographically."""
        return Fan.from_cones(self.vectors(c) for c in self.max_cones)

    def cone_sets(self) -> frozenset[frozenset[Vector]]:
        return frozenset(frozenset(self.vectors(c)) for c in self.max_cones)

    def same_as(self, other: "Fan") -> bool:
        return self.rank == other.rank and self.cone_sets() == other.cone_sets()

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: Mapping) -> "Fan":
        fan = cls.build(data["rays"], data["max_cones"])
        if "rank" in data and data["rank"] != fan.rank:
            raise StructuralError(f"declared rank {data['rank']} but rays have rank {fan.rank}")
        return fan


def coordinate_fan(rank: int) -> Fan:
    """The fan of all 2^rank coordinate orthants."""
    cones = []
    for signs in _sign_vectors(rank):
        cones.append([tuple(s if i == j else 0 for j in range(rank)) for i, s in enumerate(signs)])
    return Fan.from_cones(cones)


def _sign_vectors(rank: int) -> list[SignVector]:
    out = [()]
    for _ in range(rank):
        out = [s + (e,) for s in out for e in (1, -1)]
    return out


# -- validity ----------------------------------------------------------------


@dataclass
class ValidityReport:
    simplicial: bool
    nonsingular: bool
    sign_coherent: bool
    fan_property: bool
    complete: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(
            (self.simplicial, self.nonsingular, self.sign_coherent, self.fan_property, self.complete)
        )

    def flags(self) -> dict[str, bool]:
        return {
            "simplicial": self.simplicial,
            "nonsingular": self.nonsingular,
            "sign_coherent": self.sign_coherent,
            "fan_property": self.fan_property,
            "complete": self.complete,
        }


def is_sign_coherent_cone(vectors: Sequence[Vector]) -> bool:
    for k in range(len(vectors[0])):
        vals = [v[k] for v in vectors]
        if min(vals) < 0 < max(vals):
            return False
    return True


def cone_orthant(vectors: Sequence[Vector]) -> SignVector:
    """A closed orthant containing a sign-coherent cone (zero columns get +)."""
    return tuple(-1 if any(v[k] < 0 for v in vectors) else 1 for k in range(len(vectors[0])))


def _inner_rows(vectors: Sequence[Vector]) -> list[Vector]:
    """Rows r_i with <r_i, x> >= 0 for all i exactly on the cone."""
    d = det(vectors)
    rows = adjugate_rows(vectors)
    return rows if d > 0 else [tuple(-a for a in r) for r in rows]


def _proper_intersection(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    """Whether two full-dimensional simplicial cones meet in a common face.

    The cones fail to do so exactly when some x lies in both while having a
    positive coefficient on a ray not shared by the two.  That is a linear
    feasibility problem, decided by Fourier-Motzkin elimination.
    """
    n = len(a)
    shared = set(a) & set(b)
    rows_a, rows_b = _inner_rows(a), _inner_rows(b)
    da, db = abs(det(a)), abs(det(b))
    system = [(tuple(-c for c in r), 0) for r in rows_a + rows_b]
    # Normalization: sum of the non-shared barycentric weights equals 1.
    eq = [0] * n
    for v, r in zip(a, rows_a):
        if v not in shared:
            eq = [x + db * y for x, y in zip(eq, r)]
    for v, r in zip(b, rows_b):
        if v not in shared:
            eq = [x + da * y for x, y in zip(eq, r)]
    eq = tuple(eq)
    system.append((eq, da * db))
    system.append((tuple(-c for c in eq), -da * db))
    return not fm_feasible(system, n)


def _quick_separated(a: Sequence[Vector], b: Sequence[Vector]) -> bool:
    """Cheap sufficient test: a facet hyperplane of one cone strictly
    separates the other cone's non-shared rays and contains its shared ones."""
    shared = set(a) & set(b)
    for x, y in ((a, b), (b, a)):
        for v, row in zip(x, _inner_rows(x)):
            # row vanishes on the facet of x opposite to v
            if v in shared:
                continue
            if all((w in shared and dot(row, w) == 0) or (w not in shared and dot(row, w) < 0) for w in y):
                return True
    return False


def facets(cone: Cone) -> list[Cone]:
    return [tuple(c for c in cone if c != i) for i in cone]


def facet_incidence(f: Fan) -> dict[Cone, list[int]]:
    out: dict[Cone, list[int]] = {}
    for k, cone in enumerate(f.max_cones):
        for face in facets(cone):
            out.setdefault(face, []).append(k)
    return out


def _hyperplane_normal(vectors: Sequence[Vector], rank: int) -> Vector:
    if rank == 2:
        (x, y), = vectors
        return (-y, x)
    return cross(vectors[0], vectors[1])


def probe_directions(rank: int, count: int = 1000, seed: int = 20231) -> list[Vector]:
    """Deterministic nonzero integer directions, reproducible across runs."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        v = tuple(rng.randint(-97, 97) for _ in range(rank))
        if any(v):
            out.append(v)
    return out


def contains(vectors: Sequence[Vector], x: Sequence[int]) -> bool:
    return all(dot(r, x) >= 0 for r in _inner_rows(vectors))


def validate(f: Fan, probe: int = 1000) -> ValidityReport:
    failures = []
    simplicial = nonsingular = sign_coherent = True
    for cone in f.max_cones:
        vs = f.vectors(cone)
        if len(cone) != f.rank or det(vs) == 0:
            simplicial = nonsingular = False
            failures.append(f"cone {cone} is not full-dimensional simplicial")
        elif abs(det(vs)) != 1:
            nonsingular = False
            failures.append(f"cone {cone} has |det| = {abs(det(vs))}")
        if not is_sign_coherent_cone(vs):
            sign_coherent = False
            failures.append(f"cone {cone} is not contained in a single orthant")
    used = {i for c in f.max_cones for i in c}
    if len(used) != len(f.rays):
        failures.append("some rays lie in no maximal cone")

    fan_property = simplicial
    if simplicial:
        for i, j in combinations(range(len(f.max_cones)), 2):
            a, b = f.vectors(f.max_cones[i]), f.vectors(f.max_cones[j])
            if _quick_separated(a, b) or _proper_intersection(a, b):
                continue
            fan_property = False
            failures.append(f"cones {f.max_cones[i]} and {f.max_cones[j]} overlap")
    fan_property = fan_property and len(used) == len(f.rays)

    complete = simplicial and fan_property and _check_complete(f, failures, probe)
    return ValidityReport(simplicial, nonsingular, sign_coherent, fan_property, complete, failures)


def _check_complete(f: Fan, failures: list[str], probe: int) -> bool:
    inc = facet_incidence(f)
    ok = True
    for face, owners in inc.items():
        if len(owners) != 2:
            failures.append(f"facet {face} lies in {len(owners)} maximal cone(s)")
            ok = False
            continue
        n = _hyperplane_normal(f.vectors(face), f.rank)
        sides = []
        for k in owners:
            (x,) = set(f.max_cones[k]) - set(face)
            sides.append(dot(n, f.rays[x]))
        if sides[0] * sides[1] >= 0:
            failures.append(f"cones around facet {face} fold onto one side")
            ok = False
    if not ok:
        return False
    # connectivity of the facet-adjacency graph
    seen, stack = {0}, [0]
    nbrs: dict[int, list[int]] = {}
    for owners in inc.values():
        a, b = owners
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    while stack:
        for m in nbrs.get(stack.pop(), []):
            if m not in seen:
                seen.add(m)
                stack.append(m)
    if len(seen) != len(f.max_cones):
        failures.append("facet-adjacency graph is disconnected")
        return False
    v, e, fc = len(f.rays), len(inc), len(f.max_cones)
    euler = v - e + fc == 2 if f.rank == 3 else v == fc
    if not euler:
        failures.append(f"Euler count fails (V={v}, E={e}, F={fc})")
        return False
    cones = [f.vectors(c) for c in f.max_cones]
    for x in probe_directions(f.rank, probe):
        if not any(contains(c, x) for c in cones):
            failures.append(f"direction {x} is not covered")
            return False
    return True


# -- adjacency, exchanges and orientation --------------------------------------


def adjacency_pairs(f: Fan) -> list[tuple[int, int, Cone]]:
    """Pairs of maximal cones (by index) sharing a facet, with that facet.

    On a complete fan this lists every codimension-one cone once; on a
    fragment it lists the internal walls only.
    """
    out = []
    for face, owners in sorted(facet_incidence(f).items()):
        if len(owners) == 2:
            out.append((owners[0], owners[1], face))
        elif len(owners) > 2:
            raise UnsupportedError(f"facet {face} lies in {len(owners)} cones")
    return out


@dataclass(frozen=True)
class ExchangeStep:
    source: tuple[Vector, ...]
    target: tuple[Vector, ...]
    exchanged_position: int
    x: Vector
    y: Vector
    shared: tuple[Vector, ...]
    labels: tuple[int, ...]

    def label_of(self, ray: Vector) -> int:
        return self.labels[self.shared.index(ray)]


def exchange_coefficients(x: Vector, y: Vector, shared: Sequence[Vector]) -> tuple[int, ...]:
    """Coefficients a with x + y = sum a_i shared_i (integral for nonsingular cones)."""
    d = det([*shared, x])
    if d == 0:
        raise NotAdjacentError("exchanged ray lies in the span of the shared face")
    s = tuple(a + b for a, b in zip(x, y))
    out = []
    for i in range(len(shared)):
        cols = list(shared) + [x]
        cols[i] = s
        num = det(cols)
        if num % d:
            raise ValueError("exchange coefficient is not integral")
        out.append(num // d)
    if any(sum(a * v[k] for a, v in zip(out, shared)) != s[k] for k in range(len(s))):
        raise NotAdjacentError("x + y is not in the span of the shared rays")
    return tuple(out)


def exchange(source: Sequence[Vector], target: Sequence[Vector], strict: bool = True) -> ExchangeStep:
    """Exchange relation between two adjacent maximal cones given by vectors.

    Labels follow the order of the shared rays inside ``source``.
    """
    source, target = tuple(source), tuple(target)
    gone = [v for v in source if v not in target]
    new = [v for v in target if v not in source]
    if len(gone) != 1 or len(new) != 1 or len(source) != len(target):
        raise NotAdjacentError("cones do not share a facet")
    x, y = gone[0], new[0]
    shared = tuple(v for v in source if v != x)
    labels = exchange_coefficients(x, y, shared)
    if strict and any(a < 0 for a in labels):
        raise OrderingViolation(f"negative coefficient in {x} + {y} = {labels}·{shared}")
    return ExchangeStep(source, target, source.index(x), x, y, shared, labels)


def exchange_relation(f: Fan, i: int, j: int, strict: bool = True) -> ExchangeStep:
    return exchange(f.vectors(f.max_cones[i]), f.vectors(f.max_cones[j]), strict)


def positive_cone(rank: int) -> list[Vector]:
    return [tuple(int(i == j) for j in range(rank)) for i in range(rank)]


def _positive_side(n: Vector) -> int:
    if all(c >= 0 for c in n) and any(n):
        return 1
    if all(c <= 0 for c in n) and any(n):
        return -1
    raise OrientationError(f"positive cone straddles the hyperplane with normal {n}")


@dataclass
class Hasse:
    """Directed graph on maximal cone indices."""

    nodes: list[int]
    arrows: list[tuple[int, int]]

    def successors(self, k: int) -> list[int]:
        return [b for a, b in self.arrows if a == k]

    def predecessors(self, k: int) -> list[int]:
        return [a for a, b in self.arrows if b == k]

    def sources(self) -> list[int]:
        targets = {b for _, b in self.arrows}
        return [k for k in self.nodes if k not in targets]

    def sinks(self) -> list[int]:
        starts = {a for a, _ in self.arrows}
        return [k for k in self.nodes if k not in starts]

    def is_acyclic(self) -> bool:
        ts = TopologicalSorter({k: set(self.predecessors(k)) for k in self.nodes})
        try:
            tuple(ts.static_order())
        except CycleError:
            return False
        return True

    def restrict(self, keep: Iterable[int]) -> "Hasse":
        keep = set(keep)
        return Hasse(
            [k for k in self.nodes if k in keep],
            [(a, b) for a, b in self.arrows if a in keep and b in keep],
        )

    def maximal_chains(self) -> list[list[int]]:
        """All directed paths from a source to a sink."""
        out = []

        def walk(path):
            nxt = self.successors(path[-1])
            if not nxt:
                out.append(path)
            for m in nxt:
                walk(path + [m])

        for s in self.sources():
            walk([s])
        return out

    def is_interval(self) -> bool:
        return len(self.sources()) == 1 and len(self.sinks()) == 1


def orient(f: Fan, i: int, j: int, face: Cone) -> tuple[int, int]:
    """Arrow between adjacent cones i, j: from the one on the positive side."""
    n = _hyperplane_normal(f.vectors(face), f.rank)
    side = _positive_side(n)
    (x,) = set(f.max_cones[i]) - set(face)
    return (i, j) if dot(n, f.rays[x]) * side > 0 else (j, i)


def hasse_orientation(f: Fan) -> Hasse:
    pos = sorted(positive_cone(f.rank))
    if not any(sorted(f.vectors(c)) == pos for c in f.max_cones):
        raise OrientationError("the positive cone is not a maximal cone of the fan")
    arrows = sorted(orient(f, i, j, face) for i, j, face in adjacency_pairs(f))
    return Hasse(list(range(len(f.max_cones))), arrows)


def in_orthant(v: Vector, eps: SignVector) -> bool:
    return all(e * c >= 0 for e, c in zip(eps, v))


def orthant_restriction(f: Fan, eps: SignVector) -> list[Cone]:
    """Every nonzero cone of the fan (any dimension) inside the closed orthant."""
    faces = set()
    for cone in f.max_cones:
        inside = [i for i in cone if in_orthant(f.rays[i], eps)]
        for k in range(1, len(inside) + 1):
            faces.update(combinations(inside, k))
    return sorted(faces, key=lambda c: (len(c), c))


def orthant_max_cones(f: Fan, eps: SignVector) -> list[int]:
    """Indices of maximal cones contained in the closed orthant."""
    return [k for k, c in enumerate(f.max_cones) if all(in_orthant(f.rays[i], eps) for i in c)]


def subfan(f: Fan, cone_ids: Iterable[int]) -> Fan:
    return Fan.from_cones(f.vectors(f.max_cones[k]) for k in cone_ids)


def membership_counts(f: Fan, directions: Iterable[Vector]) -> list[int]:
    cones = [f.vectors(c) for c in f.max_cones]
    return [sum(contains(c, x) for c in cones) for x in directions]

