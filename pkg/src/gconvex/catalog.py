"""Fixed combinatorial data: quadrant ray sets, the table of d(m), the extreme
cones of the (+,-,+) orthant, the fifteen orthant fans and the five data that
give convex fans without being realizable."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd
from typing import NamedTuple, Optional

from .datum import ADMISSIBLE, DatumD, MutationDatum
from .exactlin import Vector, det, dot, solve_normal
from .fan import (
    Fan,
    Hasse,
    OrderingViolation,
    OrientationError,
    StructuralError,
    _proper_intersection,
    _quick_separated,
    adjacency_pairs,
    exchange,
    orient,
)
from .reduction import (
    alpha_cases,
    beta_cases,
    is_template_factor,
    match_template,
    maximal_paths_at_ray,
    star_hasse,
)
from .symmetry import GroupElement, act_fan

M = MutationDatum

# Rays a*e_i - b*e_j of the quadrant cone{e_i, -e_j}, as (a, b), listed from
# e_i towards -e_j.
_QUADRANT = {
    (0, 0): [(1, 0), (0, 1)],
    (1, 1): [(1, 0), (1, 1), (0, 1)],
    (1, 2): [(1, 0), (1, 1), (1, 2), (0, 1)],
    (2, 1): [(1, 0), (2, 1), (1, 1), (0, 1)],
}

QUADRANT_OPTIONS = tuple(_QUADRANT)


def quadrant_coefficients(l: int, r: int) -> list[tuple[int, int]]:
    try:
        return list(_QUADRANT[(l, r)])
    except KeyError:
        raise ValueError(f"(l, r) = {(l, r)} is not admissible") from None


def quadrant_rays(l: int, r: int) -> list[Vector]:
    """Rank-2 rays in cone{e1, -e2}, ordered clockwise from e1 to -e2."""
    return [(a, -b) for a, b in quadrant_coefficients(l, r)]


def wall_rays(i: int, j: int, l: int, r: int, rank: int = 3) -> list[Vector]:
    """Rays a*e_i - b*e_j on the quadrant cone{e_i, -e_j} governed by d_ij."""
    out = []
    for a, b in quadrant_coefficients(l, r):
        v = [0] * rank
        v[i - 1], v[j - 1] = a, -b
        out.append(tuple(v))
    return out


# d(m) = (d12, d32)
DM_TABLE: dict[int, tuple[MutationDatum, MutationDatum]] = {
    0: (M(0, 0, 0), M(0, 0, 0)),
    1: (M(1, 1, 1), M(0, 0, 0)),
    2: (M(1, 2, 1), M(0, 0, 0)),
    3: (M(2, 1, 1), M(0, 0, 0)),
    4: (M(1, 1, 1), M(1, 1, 0)),
    5: (M(1, 1, 1), M(1, 2, 0)),
    6: (M(2, 1, 1), M(2, 1, 0)),
    7: (M(1, 1, 1), M(1, 1, 1)),
    8: (M(2, 1, 1), M(1, 1, 1)),
    9: (M(2, 1, 1), M(2, 1, 1)),
    10: (M(1, 2, 1), M(1, 1, 0)),
    11: (M(1, 2, 1), M(1, 2, 0)),
    12: (M(1, 1, 1), M(1, 2, 1)),
    13: (M(2, 1, 1), M(1, 2, 1)),
}

_DM_INDEX = {v: m for m, v in DM_TABLE.items()}


def dm_datum(m: int) -> tuple[MutationDatum, MutationDatum]:
    if m not in DM_TABLE:
        raise ValueError(f"m must be in 0..13, got {m}")
    return DM_TABLE[m]


def dm_index(d12, d32) -> Optional[int]:
    return _DM_INDEX.get((M(*d12), M(*d32)))


def lprime(d12: MutationDatum, d32: MutationDatum) -> tuple[int, int]:
    """(l'_12, l'_32) as determined by (h12, h32)."""
    return {
        (0, 0): (0, 0),
        (1, 0): (d12.l, 0),
        (0, 1): (0, d32.l),
        (1, 1): (1, 1),
    }[(d12.h, d32.h)]


class MinMax(NamedTuple):
    sigma_min: list[Vector]
    sigma_max: list[Vector]
    v_min: Vector
    v_max: Vector


def min_max_cones(d12, d32) -> MinMax:
    d12, d32 = M(*d12), M(*d32)
    l12, l32 = lprime(d12, d32)
    smin = [(1, -d12.r, 0), (0, -1, 0), (0, -d32.r, 1)]
    smax = [(1, 0, 0), (l12, -1, l32), (0, 0, 1)]
    v_min = (1 - d12.r, -1, 1 - d32.r)
    v_max = (1, l12 + l32 - 1, 1)
    assert solve_normal(smin) == v_min and solve_normal(smax) == v_max
    return MinMax(smin, smax, v_min, v_max)


# -- the fifteen orthant fans ----------------------------------------------------
#
# Ray lists follow the labels of the reference drawings (label k is index
# k - 1); cones are the triangles of those drawings.

_FRAGMENTS: dict[str, tuple[list[Vector], list[tuple[int, ...]]]] = {
    "d0": ([(1, 0, 0), (0, 0, 1), (0, -1, 0)], [(1, 2, 3)]),
    "d1": ([(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 0)], [(1, 2, 3), (2, 3, 4)]),
    "d2": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (1, -2, 0), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (3, 4, 5)],
    ),
    "d3": (
        [(1, 0, 0), (2, -1, 0), (0, 0, 1), (1, -1, 0), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (3, 4, 5)],
    ),
    "d4": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (2, 4, 5)],
    ),
    "d5": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (0, -2, 1), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (2, 4, 5), (2, 5, 6)],
    ),
    "d6": (
        [(1, 0, 0), (2, -1, 0), (0, 0, 1), (1, -1, 1), (0, -1, 2), (1, -1, 0), (0, -1, 1), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (2, 4, 6), (3, 4, 5), (4, 5, 6), (5, 6, 7), (6, 7, 8)],
    ),
    "d7": (
        [(1, 0, 0), (1, -1, 1), (0, 0, 1), (0, -1, 1), (1, -1, 0), (0, -1, 0)],
        [(1, 2, 3), (1, 2, 5), (2, 3, 4), (2, 4, 5), (4, 5, 6)],
    ),
    "d8": (
        [(1, 0, 0), (1, -1, 1), (0, 0, 1), (0, -1, 1), (2, -1, 0), (1, -1, 0), (0, -1, 0)],
        [(1, 2, 3), (1, 2, 5), (2, 3, 4), (2, 4, 6), (2, 5, 6), (4, 6, 7)],
    ),
    "d9": (
        [(1, 0, 0), (1, -1, 1), (0, 0, 1), (2, -1, 0), (0, -1, 2), (1, -1, 0), (0, -1, 1), (0, -1, 0)],
        [(1, 2, 3), (1, 2, 4), (2, 3, 5), (2, 4, 6), (2, 5, 7), (2, 6, 7), (6, 7, 8)],
    ),
    "d10_0": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (1, -2, 0), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 5), (3, 4, 5), (4, 5, 6)],
    ),
    "d10_1": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (1, -2, 0), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (2, 4, 5), (4, 5, 6)],
    ),
    "d11": (
        [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (0, -2, 1), (1, -2, 0), (0, -1, 0)],
        [(1, 2, 3), (2, 3, 4), (2, 4, 5), (2, 5, 6), (5, 6, 7)],
    ),
    "d12": (
        [(1, 0, 0), (1, -1, 1), (0, 0, 1), (2, -2, 1), (0, -1, 1), (1, -1, 0), (1, -2, 1), (0, -2, 1), (0, -1, 0)],
        [(1, 2, 3), (1, 2, 4), (1, 4, 6), (2, 3, 5), (2, 4, 5), (4, 5, 7), (4, 6, 7), (5, 7, 8),
         (6, 7, 8), (6, 8, 9)],
    ),
    "d13": (
        [(1, 0, 0), (1, -1, 1), (0, 0, 1), (0, -1, 1), (2, -2, 1), (2, -1, 0), (1, -2, 1), (1, -1, 0),
         (0, -2, 1), (0, -1, 0)],
        [(1, 2, 3), (1, 2, 5), (1, 5, 6), (2, 3, 4), (2, 4, 5), (4, 5, 7), (4, 7, 9), (5, 6, 8),
         (5, 7, 8), (7, 8, 9), (8, 9, 10)],
    ),
}

FRAGMENT_NAMES = tuple(_FRAGMENTS)

SWAP13 = GroupElement.from_cycles("(13)")


@dataclass(frozen=True)
class OrthantFanId:
    name: str
    mirrored: bool = False

    def __post_init__(self):
        if self.name not in _FRAGMENTS:
            raise ValueError(f"unknown orthant fan {self.name!r}")

    @property
    def m(self) -> int:
        return int(self.name[1:].split("_")[0])

    @property
    def h13(self) -> Optional[int]:
        return int(self.name[-1]) if self.name.startswith("d10_") else None

    def __str__(self) -> str:
        return self.name + ("'" if self.mirrored else "")

    @classmethod
    def parse(cls, text: str) -> "OrthantFanId":
        text = text.strip()
        mirrored = text.endswith("'")
        return cls(text.rstrip("'"), mirrored)


def fragment_data(name: str) -> tuple[list[Vector], list[tuple[int, ...]]]:
    """Rays and 1-based triangles of a fragment, as stored."""
    rays, cones = _FRAGMENTS[name]
    return list(rays), list(cones)


def orthant_fan(fid) -> Fan:
    """The fragment Sigma_{d(m)} (or its (13)-mirror) inside R^3_{+-+}."""
    if isinstance(fid, str):
        fid = OrthantFanId.parse(fid)
    rays, cones = _FRAGMENTS[fid.name]
    f = Fan.from_cones([[rays[k - 1] for k in c] for c in cones])
    return act_fan(SWAP13, f).normalized() if fid.mirrored else f


def fragment_datum(fid) -> tuple[MutationDatum, MutationDatum]:
    """(d12, d32) whose orthant fan is fid."""
    if isinstance(fid, str):
        fid = OrthantFanId.parse(fid)
    d12, d32 = DM_TABLE[fid.m]
    return (d32, d12) if fid.mirrored else (d12, d32)


def all_orthant_ids(mirrored: bool = False) -> list[OrthantFanId]:
    ids = [OrthantFanId(n) for n in FRAGMENT_NAMES]
    if mirrored:
        ids += [OrthantFanId(n, True) for n in FRAGMENT_NAMES]
    return ids


def orthant_id_for(d12, d32, h13: int = 0) -> Optional[OrthantFanId]:
    """Fragment for (d12, d32) = d(m) or d'(m).

    For m = 10 the sub-case is picked by h13 (for the mirrored d'(10), pass
    the h of the entry that the (13)-swap moves to position 13, i.e. h31).
    """
    m = dm_index(d12, d32)
    mirrored = False
    if m is None:
        m = dm_index(d32, d12)
        mirrored = True
        if m is None:
            return None
    name = f"d{m}" if m != 10 else f"d10_{h13}"
    return OrthantFanId(name, mirrored)


# -- the five excluded data ----------------------------------------------------

_EXCLUDED = [
    # d12  d13  d21  d23  d31  d32
    "211 110 111 121 000 000",
    "211 210 000 211 000 111",
    "211 110 111 121 111 000",
    "211 110 111 121 211 210",
    "211 210 111 211 000 111",
]


def excluded_data() -> list[DatumD]:
    return [DatumD.parse(s) for s in _EXCLUDED]


def catalog_dict() -> dict:
    """Everything above in a JSON-ready form with a fixed key order."""
    frags = {}
    for fid in all_orthant_ids():
        f = orthant_fan(fid)
        d12, d32 = fragment_datum(fid)
        mm = min_max_cones(d12, d32)
        frags[fid.name] = {
            "d12": list(d12),
            "d32": list(d32),
            **f.to_dict(),
            "sigma_min": [list(v) for v in mm.sigma_min],
            "sigma_max": [list(v) for v in mm.sigma_max],
            "v_min": list(mm.v_min),
            "v_max": list(mm.v_max),
        }
    return {
        "admissible_triples": [list(t) for t in ADMISSIBLE],
        "quadrant_rays": {f"{l}{r}": [list(v) for v in quadrant_rays(l, r)] for l, r in QUADRANT_OPTIONS},
        "dm_table": {str(m): {"d12": list(a), "d32": list(b)} for m, (a, b) in DM_TABLE.items()},
        "fragments": frags,
        "excluded": [d.to_dict() for d in excluded_data()],
    }


# -- constrained search ------------------------------------------------------------
#
# Re-derives the orthant fans from (d12, d32) alone: the wall rays, the two
# extreme cones and the global inequalities give a finite pool of rays, and a
# front-advancing search lists every nonsingular, ordered, convex
# triangulation of the closed orthant R^3_{+-+} built from that pool.


def candidate_rays(d12, d32, radius: int = 2) -> list[Vector]:
    d12, d32 = M(*d12), M(*d32)
    mm = min_max_cones(d12, d32)
    bounds = [(1, 1, 1), (-1, -1, -1), mm.v_min, mm.v_max]
    rays = set(wall_rays(1, 2, d12.l, d12.r)) | set(wall_rays(3, 2, d32.l, d32.r))
    rng = range(1, radius + 1)
    for a, b, c in product(rng, rng, rng):
        x = (a, -b, c)
        if gcd(a, b, c) == 1 and all(dot(x, v) <= 1 for v in bounds):
            rays.add(x)
    return sorted(rays)


def _on_boundary(face) -> bool:
    return any(all(v[k] == 0 for v in face) for k in range(3))


def _key(vs) -> tuple:
    return tuple(sorted(vs))


def _open_facets(cones: list[tuple]) -> list[tuple]:
    count: dict[tuple, int] = {}
    for c in cones:
        for k in range(3):
            face = _key(c[:k] + c[k + 1:])
            count[face] = count.get(face, 0) + 1
    return sorted(f for f, n in count.items() if n == 1 and not _on_boundary(f))


def _fragment_ok(f: Fan, top: Vector, bottom: Vector, walls: set) -> bool:
    if not walls <= set(f.rays):
        return False
    normals = []
    for c in f.max_cones:
        normals.append(solve_normal(f.vectors(c)))
    if any(dot(r, v) > 1 for r in f.rays for v in normals):
        return False
    try:
        arrows = [orient(f, i, j, face) for i, j, face in adjacency_pairs(f)]
    except OrientationError:
        return False
    h = Hasse(list(range(len(f.max_cones))), arrows)
    if h.sources() != [f.cone_index(top)] or h.sinks() != [f.cone_index(bottom)]:
        return False
    # the star of a ray inside the open orthant lies in the fragment, so its
    # reduction must already be one of the rank-2 convex shapes
    for r in f.rays:
        if all(r):
            try:
                match_template(*maximal_paths_at_ray(f, r))
            except StructuralError:
                return False
    return True


def _boundary_ok(f: Fan, d12: MutationDatum, d32: MutationDatum) -> bool:
    """The first arrows of the paths at -e2 leave the orthant through
    sigma_min.  For the wall rays (1,-r12,0) and (0,-r32,1) of sigma_min, the
    run of star cones inside the orthant followed by that arrow must fit in a
    rank-2 shape, for at least one case the data allow."""
    u1, u3, m2 = (1, -d12.r, 0), (0, -d32.r, 1), (0, -1, 0)

    def fits(cases, w, gone, kept) -> bool:
        star = [k for k, c in enumerate(f.max_cones) if f.ray_index(w) in c]
        chains = star_hasse(f, star).maximal_chains()
        if len(chains) != 1:
            return False
        run = [f.vectors(f.max_cones[k]) for k in chains[0]]
        for _, a, b in cases:
            y = tuple(a * x + b * z - g for x, z, g in zip(kept, m2, gone))
            cones = run + [[w, m2, y]]
            labels = []
            for s, t in zip(cones, cones[1:]):
                ex = exchange(s, t, strict=False)
                (other,) = [v for v in ex.shared if v != w]
                labels.append((ex.label_of(other), ex.label_of(w)))
            if is_template_factor([x for x, _ in labels], [y for _, y in labels]):
                return True
        return False

    return fits(alpha_cases(d12, d32), u1, u3, u1) and fits(beta_cases(d12, d32), u3, u1, u3)


def search_fragments(d12, d32, radius: int = 2) -> list[Fan]:
    """All fragments of R^3_{+-+} compatible with (d12, d32).

    A fragment here is a set of unimodular cones covering the orthant, with
    the wall rays of d12 and d32 on the planes x3 = 0 and x1 = 0, no ray
    inside the face cone{e1, e3}, containing the extreme cones of
    min_max_cones as its unique maximum and minimum, and whose internal
    exchanges have coefficients a_i >= 0 with sum a_i <= 2.  Interior rays are
    drawn from candidate_rays(d12, d32, radius).
    """
    d12, d32 = M(*d12), M(*d32)
    mm = min_max_cones(d12, d32)
    pool = candidate_rays(d12, d32, radius)
    walls = set(wall_rays(1, 2, d12.l, d12.r)) | set(wall_rays(3, 2, d32.l, d32.r))
    top, bottom = _key(mm.sigma_max), _key(mm.sigma_min)
    start = sorted({top, bottom})
    found: list[Fan] = []

    def extend(cones: list[tuple]) -> None:
        front = _open_facets(cones)
        if not front:
            f = Fan.from_cones(cones)
            if _fragment_ok(f, top, bottom, walls) and _boundary_ok(f, d12, d32):
                found.append(f)
            return
        face = front[0]
        (inner,) = [c for c in cones if set(face) <= set(c)]
        (x,) = set(inner) - set(face)
        side = det([*face, x])
        for z in pool:
            if z in face or z == x:
                continue
            dz = det([*face, z])
            if abs(dz) != 1 or dz * side > 0:
                continue
            new = _key([*face, z])
            if new in cones:
                continue
            try:
                ex = exchange(inner, new)
            except OrderingViolation:
                continue
            if sum(ex.labels) > 2:
                continue
            if all(_quick_separated(new, c) or _proper_intersection(new, c) for c in cones):
                extend(cones + [new])

    extend(start)
    return sorted(found, key=lambda f: (f.rays, f.max_cones))
