"""From data to fans: admissibility filters, gluing of orthant fans, orbit
deduplication and the rank 2 / rank 3 enumerations."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .catalog import (
    QUADRANT_OPTIONS,
    OrthantFanId,
    dm_index,
    excluded_data,
    orthant_fan,
    orthant_id_for,
    wall_rays,
)
from .datum import ADMISSIBLE, DatumD, MutationDatum, pairs
from .fan import (
    Fan,
    hasse_orientation,
    orthant_max_cones,
    positive_cone,
    validate,
)
from .polytope import (
    g_polytope,
    hull_oracle,
    is_convex,
    is_reflexive,
    unique_interior_lattice_point,
)
from .symmetry import GroupElement, act_datum, act_fan, canonical_datum, canonical_form, group

M = MutationDatum
PLUS_MINUS_PLUS = (1, -1, 1)

# A fixed g with g·eps = (+,-,+) for each mixed orthant.
TRANSPORT: dict[tuple[int, ...], GroupElement] = {
    (1, -1, 1): GroupElement.from_cycles("id", 1),
    (-1, 1, 1): GroupElement.from_cycles("(12)", 1),
    (1, 1, -1): GroupElement.from_cycles("(23)", 1),
    (-1, 1, -1): GroupElement.from_cycles("id", -1),
    (1, -1, -1): GroupElement.from_cycles("(12)", -1),
    (-1, -1, 1): GroupElement.from_cycles("(23)", -1),
}

MIXED_ORTHANTS = tuple(sorted(TRANSPORT, reverse=True))


class GluingError(RuntimeError):
    pass


class CountMismatch(RuntimeError):
    def __init__(self, diffs: dict):
        self.diffs = diffs
        super().__init__("; ".join(f"{k}: expected {e}, got {g}" for k, (e, g) in diffs.items()))


# -- predicates on data --------------------------------------------------------

_NO_21 = (M(2, 1, 1), M(2, 1, 0))
_SMALL = (M(1, 1, 0), M(1, 2, 0), M(0, 0, 0))


def gen_a(d: DatumD, m: int) -> bool:
    """Constraint on d13, d31 attached to d_{+-+} = d(m)."""
    d13, d31 = d[(1, 3)], d[(3, 1)]
    zero = M(0, 0, 0)
    if m in (1, 3):
        return d31 == zero or d31.h == 1
    if m == 2:
        return d31 == zero and d13.h == 0
    if m in (4, 6):
        return d31 in (M(2, 1, 1), M(1, 1, 1))
    if m == 5:
        return d31 == M(1, 2, 1) and d13.h == 0
    if m == 7:
        return d31 not in _NO_21 and d13 not in _NO_21
    if m == 8:
        return d31 not in _NO_21 and d13 != zero
    if m == 9:
        return d31 != zero and d13 != zero
    if m == 10:
        if d13.h == 0:
            return d31 == M(2, 1, 1)
        return d31 in (M(2, 1, 1), M(1, 1, 1))
    if m == 11:
        return d31 == M(1, 2, 1) and d13.h == 1
    if m == 12:
        return d31 in _SMALL and d13 == zero
    if m == 13:
        return d31 in _SMALL and d13 == M(2, 1, 0)
    return True


def datum_to_orthant_id(d: DatumD, eps: tuple[int, ...]) -> Optional[OrthantFanId]:
    g = TRANSPORT[tuple(eps)]
    e = act_datum(g, d)
    d12, d32 = e[(1, 2)], e[(3, 2)]
    if dm_index(d12, d32) is not None:
        return orthant_id_for(d12, d32, e[(1, 3)].h)
    return orthant_id_for(d12, d32, e[(3, 1)].h)


def admissible_datum(d: DatumD) -> bool:
    for g in group(3):
        e = act_datum(g, d)
        d12, d32 = e[(1, 2)], e[(3, 2)]
        m = dm_index(d12, d32)
        if m is not None:
            if not gen_a(e, m):
                return False
        elif dm_index(d32, d12) is None:
            return False
    return True


def _gen_x_pattern(e: DatumD) -> Optional[str]:
    if e[(1, 2)] == M(2, 1, 1) and e[(1, 3)] == M(2, 1, 0) and e[(2, 3)] == M(2, 1, 1) and e[(3, 2)] == M(1, 1, 1):
        return "i"
    if (
        e[(1, 2)] == M(2, 1, 1)
        and e[(1, 3)] == M(1, 1, 0)
        and e[(2, 1)] == M(1, 1, 1)
        and e[(2, 3)] == M(1, 2, 1)
        and e[(3, 2)].h == 0
    ):
        return "ii"
    return None


def gen_x_patterns(d: DatumD) -> list[tuple[GroupElement, str]]:
    out = []
    for g in group(3):
        p = _gen_x_pattern(act_datum(g, d))
        if p:
            out.append((g, p))
    return out


def gen_x_realizable(d: DatumD) -> bool:
    return not gen_x_patterns(d)


# -- assembly --------------------------------------------------------------------


def _check_walls(f: Fan, d: DatumD) -> None:
    rank = f.rank
    for i, j in pairs(rank):
        k = ({1, 2, 3} - {i, j}).pop()
        on_wall = {
            r for r in f.rays if r[k - 1] == 0 and r[i - 1] >= 0 and r[j - 1] <= 0
        }
        l, r, _ = d[(i, j)]
        expect = set(wall_rays(i, j, l, r))
        if on_wall != expect:
            raise GluingError(f"wall ({i},{j}) has rays {sorted(on_wall)}, expected {sorted(expect)}")


def assemble_fan(d: DatumD) -> Fan:
    """Glue the positive cone, the negative cone and the six transported
    orthant fans determined by d."""
    pos = positive_cone(3)
    cones = [pos, [tuple(-c for c in v) for v in pos]]
    for eps in MIXED_ORTHANTS:
        fid = datum_to_orthant_id(d, eps)
        if fid is None:
            raise GluingError(f"orthant {eps} has no fan for datum {d.label()}")
        part = act_fan(TRANSPORT[eps].inverse(), orthant_fan(fid))
        cones.extend(part.vectors(c) for c in part.max_cones)
    f = Fan.from_cones(cones)
    _check_walls(f, d)
    return f


# -- rank 2 ------------------------------------------------------------------------


def rank2_fan(q12: tuple[int, int], q21: tuple[int, int]) -> Fan:
    """Rank-2 fan with quadrant cone{e1,-e2} given by q12 = (l12, r12) and
    cone{e2,-e1} by q21."""
    cones = [[(1, 0), (0, 1)], [(-1, 0), (0, -1)]]
    for (i, j), (l, r) in (((1, 2), q12), ((2, 1), q21)):
        rays = wall_rays(i, j, l, r, rank=2)
        cones.extend([a, b] for a, b in zip(rays, rays[1:]))
    return Fan.from_cones(cones)


@dataclass
class Rank2Report:
    fans: list[tuple[tuple[int, int], tuple[int, int], Fan]]
    classes: dict[bytes, list[int]]

    def to_dict(self) -> dict:
        forms = sorted(self.classes)
        return {
            "fan_count": len(self.fans),
            "class_count": len(self.classes),
            "fans": [
                {
                    "l12_r12": list(q12),
                    "l21_r21": list(q21),
                    "class": forms.index(canonical_form(f)),
                    **f.normalized().to_dict(),
                }
                for q12, q21, f in self.fans
            ],
            "classes": [
                {"members": self.classes[c], "ray_count": len(Fan.from_dict(_form_dict(c)).rays)}
                for c in forms
            ],
        }


def _form_dict(form: bytes) -> dict:
    import json

    rays, cones = json.loads(form)
    return {"rays": rays, "max_cones": cones}


def fan_from_form(form: bytes) -> Fan:
    return Fan.from_dict(_form_dict(form))


def enumerate_rank2() -> Rank2Report:
    fans = []
    for q12, q21 in product(QUADRANT_OPTIONS, repeat=2):
        f = rank2_fan(q12, q21)
        if not (validate(f).ok and is_convex(f)):
            raise RuntimeError(f"rank-2 fan {q12}, {q21} is not a convex fan")
        fans.append((q12, q21, f))
    classes: dict[bytes, list[int]] = {}
    for k, (_, _, f) in enumerate(fans):
        classes.setdefault(canonical_form(f), []).append(k)
    return Rank2Report(fans, classes)


# -- rank 3 --------------------------------------------------------------------------


def _scan_chunk(first: int) -> list[DatumD]:
    out = []
    head = ADMISSIBLE[first]
    for rest in product(ADMISSIBLE, repeat=5):
        d = DatumD((head,) + rest)
        if admissible_datum(d):
            out.append(d)
    return out


def default_jobs() -> int:
    env = os.environ.get("GFAN_JOBS")
    if env:
        return max(1, int(env))
    return 1


def scan_admissible(jobs: int = 1) -> list[DatumD]:
    """All admissible data among the 7^6 candidates, in lexicographic order."""
    chunks = range(len(ADMISSIBLE))
    if jobs <= 1:
        parts = [_scan_chunk(k) for k in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_scan_chunk, chunks))
    return [d for part in parts for d in part]


REQUIRED_FLAGS = (
    "simplicial",
    "nonsingular",
    "sign_coherent",
    "fan_property",
    "complete",
    "convex",
    "hull_oracle",
    "reflexive",
    "unique_interior_point",
    "hasse_acyclic",
    "unique_source_sink",
    "orthant_intervals",
)


def mixed_orthants(rank: int) -> list[tuple[int, ...]]:
    """Sign vectors with both signs present, in descending order."""
    return [e for e in product((1, -1), repeat=rank) if len(set(e)) == 2]


def analyze_fan(f: Fan) -> dict[str, bool]:
    """Full check suite for a rank-2 or rank-3 fan.

    Besides REQUIRED_FLAGS the result carries ``nonnegative_exchanges``, which
    is informational: it fails for fans that are convex but not ordered.
    """
    rep = validate(f)
    flags = dict(rep.flags())
    conv = is_convex(f) if rep.ok else None
    flags["convex"] = bool(conv)
    flags["nonnegative_exchanges"] = bool(conv and conv.nonnegative)
    flags["hull_oracle"] = hull_oracle(f) if rep.nonsingular else False
    p = g_polytope(f) if rep.nonsingular else None
    flags["reflexive"] = bool(p and p.origin_interior and is_reflexive(p))
    flags["unique_interior_point"] = bool(p and p.origin_interior and unique_interior_lattice_point(p))
    try:
        hasse = hasse_orientation(f) if rep.ok else None
        pos = f.cone_index(positive_cone(f.rank))
        neg = f.cone_index([tuple(-c for c in v) for v in positive_cone(f.rank)])
    except ValueError:
        hasse = None
    if hasse is not None:
        flags["hasse_acyclic"] = hasse.is_acyclic()
        flags["unique_source_sink"] = hasse.sources() == [pos] and hasse.sinks() == [neg]
        flags["orthant_intervals"] = all(
            hasse.restrict(orthant_max_cones(f, eps)).is_interval() for eps in mixed_orthants(f.rank)
        )
    else:
        flags["hasse_acyclic"] = flags["unique_source_sink"] = flags["orthant_intervals"] = False
    return flags


def passes_required(flags: dict[str, bool]) -> bool:
    return all(flags.get(k, False) for k in REQUIRED_FLAGS)


@dataclass
class Candidate:
    datum: DatumD
    fan: Fan
    form: bytes
    realizable: bool
    gen_x: list[str] = field(default_factory=list)
    flags: dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "datum": self.datum.to_dict(),
            "datum_label": self.datum.label(),
            "realizable": self.realizable,
            "gen_x_patterns": self.gen_x,
            "ray_count": len(self.fan.rays),
            "cone_count": len(self.fan.max_cones),
            "flags": self.flags,
            "fan": self.fan.normalized().to_dict(),
        }


@dataclass
class ClassificationReport:
    admissible_count: int
    candidates: list[Candidate]
    datum_orbits: int
    fan_classes: int
    orbit_injective: bool
    excluded_match: bool

    @property
    def realizable(self) -> list[Candidate]:
        return [c for c in self.candidates if c.realizable]

    @property
    def excluded(self) -> list[Candidate]:
        return [c for c in self.candidates if not c.realizable]

    def counts(self) -> dict[str, int]:
        return {
            "candidate_orbits": len(self.candidates),
            "realizable": len(self.realizable),
            "excluded": len(self.excluded),
        }

    def check(self, expected=(66, 61, 5)) -> None:
        got = self.counts()
        diffs = {k: (e, got[k]) for k, e in zip(("candidate_orbits", "realizable", "excluded"), expected)
                 if got[k] != e}
        if self.datum_orbits != self.fan_classes:
            diffs["datum_orbits_vs_fan_classes"] = (self.datum_orbits, self.fan_classes)
        if not self.excluded_match:
            diffs["excluded_match"] = (True, False)
        if diffs:
            raise CountMismatch(diffs)

    def to_dict(self) -> dict:
        return {
            "data_scanned": 7 ** 6,
            "admissible_data": self.admissible_count,
            "datum_orbits": self.datum_orbits,
            "fan_classes": self.fan_classes,
            "orbit_injective": self.orbit_injective,
            "excluded_match": self.excluded_match,
            **self.counts(),
            "candidates": [c.to_dict() for c in self.candidates],
        }

    def summary_rows(self) -> list[list]:
        return [
            [c.datum.label(), len(c.fan.rays), len(c.fan.max_cones), int(c.realizable)]
            for c in self.candidates
        ]


def _build_candidate(d: DatumD) -> Candidate:
    f = assemble_fan(d)
    pats = sorted({p for _, p in gen_x_patterns(d)})
    return Candidate(d, f, canonical_form(f), not pats, pats)


def _analyze(c: Candidate) -> dict[str, bool]:
    return analyze_fan(c.fan)


def enumerate_rank3(jobs: int = 1, analyze: bool = True) -> ClassificationReport:
    admissible = scan_admissible(jobs)
    # datum orbits (oracle) and fan classes (decision)
    orbit_of = {d: canonical_datum(d) for d in admissible}
    reps = sorted(set(orbit_of.values()), key=lambda d: d.values)
    form_of_orbit = {}
    for d in reps:
        form_of_orbit[d] = canonical_form(assemble_fan(d))
    fan_classes = len(set(form_of_orbit.values()))
    # every admissible datum assembles to a fan in the class of its orbit
    injective = fan_classes == len(reps)
    if jobs <= 1:
        cands = [_build_candidate(d) for d in reps]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            cands = list(ex.map(_build_candidate, reps))
    cands.sort(key=lambda c: c.form)
    if analyze:
        if jobs <= 1:
            flags = [_analyze(c) for c in cands]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as ex:
                flags = list(ex.map(_analyze, cands))
        for c, fl in zip(cands, flags):
            c.flags = fl
    excluded_forms = {canonical_datum(d) for d in excluded_data()}
    excluded_match = excluded_forms == {c.datum for c in cands if not c.realizable}
    return ClassificationReport(
        admissible_count=len(admissible),
        candidates=cands,
        datum_orbits=len(reps),
        fan_classes=fan_classes,
        orbit_injective=injective,
        excluded_match=excluded_match,
    )


def orbit_consistency(admissible: list[DatumD]) -> bool:
    """Isomorphic assembled fans exactly when the data share a G-orbit."""
    by_form: dict[bytes, set] = {}
    for d in admissible:
        by_form.setdefault(canonical_form(assemble_fan(d)), set()).add(canonical_datum(d))
    orbits = {canonical_datum(d) for d in admissible}
    return all(len(v) == 1 for v in by_form.values()) and len(by_form) == len(orbits)
