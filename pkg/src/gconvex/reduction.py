"""Reduction of a rank-3 fan at a ray, and the labeled maximal paths of the
reduced poset.

The star of a ray w is projected to Z^3 / Z·w.  Coordinates on the quotient
come from unimodular_complement(w); the projected fan is then rebased so that
its maximum (the star cone nearest the positive cone) becomes the positive
quadrant.  With that normalization the reduced fan of a convex g-fan is one of
the sixteen rank-2 convex fans on the nose, not merely up to GL_2(Z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .datum import DatumD
from .exactlin import Vector, det, int_coordinates, make_primitive, unimodular_complement
from .fan import Fan, Hasse, StructuralError, adjacency_pairs, exchange_relation, orient

FORMS = ("i", "ii", "iii", "iv")


class DomainError(ValueError):
    pass


class TemplateMismatch(StructuralError):
    pass


@dataclass(frozen=True)
class Reduction:
    ray: Vector
    complement: tuple[Vector, Vector]
    fan: Fan
    host: tuple[Vector, ...]  # host[k] is the rank-3 ray over fan.rays[k]
    star: tuple[int, ...]  # indices of the maximal cones of f containing ray
    top: int  # star cone that maps to the positive quadrant
    slots: tuple[Vector, Vector]  # host rays of the top cone, u then v

    def reduced_cone(self, f: Fan, k: int) -> list[Vector]:
        """Projected rays of the maximal cone k of f, in host order."""
        rays = [r for r in f.vectors(f.max_cones[k]) if r != self.ray]
        return [self.fan.rays[self.host.index(r)] for r in rays]


def _check_ray(f: Fan, ray: Sequence[int]) -> Vector:
    ray = tuple(ray)
    if f.rank != 3:
        raise DomainError("reduction is implemented for rank 3")
    if ray not in f.rays:
        raise DomainError(f"{ray} is not a ray of the fan")
    return ray


def star_hasse(f: Fan, star: Sequence[int]) -> Hasse:
    """Hasse arrows among the given maximal cones.

    Only walls between cones of ``star`` are oriented, so this also works on
    a fragment as long as the star itself is surrounded.
    """
    keep = set(star)
    arrows = sorted(orient(f, i, j, face) for i, j, face in adjacency_pairs(f) if i in keep and j in keep)
    return Hasse(sorted(keep), arrows)


def _project(basis: list[Vector], x: Vector) -> Vector:
    c = int_coordinates(basis, x)
    return make_primitive(c[1:])


def reduction(f: Fan, ray: Sequence[int], complement: Optional[Sequence[Vector]] = None,
              rebase: bool = True) -> Reduction:
    """Project the star of ``ray`` along the ray.

    ``complement`` overrides the two basis vectors of the quotient; any pair
    completing ``ray`` to a lattice basis gives the same rebased fan.
    """
    w = _check_ray(f, ray)
    comp = [tuple(c) for c in (complement or unimodular_complement(w))]
    basis = [w, *comp]
    if abs(det(basis)) != 1:
        raise DomainError("complement does not complete the ray to a lattice basis")
    r = f.ray_index(w)
    star = tuple(k for k, c in enumerate(f.max_cones) if r in c)
    if not star:
        raise DomainError(f"{w} lies in no maximal cone")
    host = sorted({v for k in star for v in f.vectors(f.max_cones[k]) if v != w})
    proj = {v: _project(basis, v) for v in host}

    hasse = star_hasse(f, star)
    tops = hasse.sources()
    if len(tops) != 1:
        raise StructuralError(f"reduced poset at {w} has {len(tops)} maximal elements")
    top = tops[0]
    u, v = sorted(x for x in f.vectors(f.max_cones[top]) if x != w)
    if rebase:
        # M sends proj[u] -> e1 and proj[v] -> e2; M = [pu pv]^{-1}
        (a, c), (b, e) = proj[u], proj[v]
        dd = a * e - b * c
        if abs(dd) != 1:
            raise StructuralError("projected top cone is not unimodular")
        inv = ((e * dd, -b * dd), (-c * dd, a * dd))
        proj = {x: (inv[0][0] * p[0] + inv[0][1] * p[1], inv[1][0] * p[0] + inv[1][1] * p[1])
                for x, p in proj.items()}
    order = sorted(host, key=lambda x: proj[x])
    if len({proj[x] for x in host}) != len(host):
        raise StructuralError(f"two rays of the star of {w} project to the same ray")
    rays = [proj[x] for x in order]
    cones = []
    for k in star:
        others = [x for x in f.vectors(f.max_cones[k]) if x != w]
        cones.append(sorted(order.index(x) for x in others))
    red = Fan.build(rays, sorted(cones))
    return Reduction(w, (comp[0], comp[1]), red, tuple(order), star, top, (u, v))


def reduce_at_ray(f: Fan, ray: Sequence[int], complement: Optional[Sequence[Vector]] = None) -> Fan:
    return reduction(f, ray, complement).fan


# -- labeled paths ---------------------------------------------------------------


@dataclass(frozen=True)
class LabeledStep:
    """One arrow [u|v] -> [u'|v] of a path around w.

    ``position`` is the exchanged slot (0 for u, 1 for v), ``a`` the
    coefficient of the kept in-plane ray and ``b`` that of w.
    """

    source: int
    target: int
    position: int
    exchanged: Vector
    incoming: Vector
    a: int
    b: int

    def __str__(self) -> str:
        over = ("•", str(self.a)) if self.position == 0 else (str(self.a), "•")
        return f"({over[0]},{over[1]})_{self.b}"


@dataclass(frozen=True)
class LabeledPath:
    steps: tuple[LabeledStep, ...]

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def in_plane(self) -> tuple[int, ...]:
        return tuple(s.a for s in self.steps)

    @property
    def along(self) -> tuple[int, ...]:
        return tuple(s.b for s in self.steps)

    @property
    def first_position(self) -> int:
        return self.steps[0].position

    def cones(self) -> list[int]:
        return [self.steps[0].source] + [s.target for s in self.steps]

    def __str__(self) -> str:
        return " -> ".join(str(s) for s in self.steps)


def _label_chain(f: Fan, w: Vector, chain: list[int], slots: tuple[Vector, Vector]) -> LabeledPath:
    slots_l = list(slots)
    steps = []
    for s, t in zip(chain, chain[1:]):
        ex = exchange_relation(f, s, t, strict=False)
        pos = slots_l.index(ex.x)
        kept = slots_l[1 - pos]
        steps.append(LabeledStep(s, t, pos, ex.x, ex.y, ex.label_of(kept), ex.label_of(w)))
        slots_l[pos] = ex.y
    return LabeledPath(tuple(steps))


def maximal_paths_at_ray(f: Fan, ray: Sequence[int]) -> tuple[LabeledPath, LabeledPath]:
    """The two maximal chains of the reduced poset, the first one starting
    with an exchange of the slot u."""
    red = reduction(f, ray)
    hasse = star_hasse(f, red.star)
    if not hasse.is_interval():
        raise StructuralError(f"reduced poset at {red.ray} is not an interval")
    chains = hasse.maximal_chains()
    if len(chains) != 2:
        raise StructuralError(f"reduced poset at {red.ray} has {len(chains)} maximal chains")
    paths = [_label_chain(f, red.ray, c, red.slots) for c in chains]
    paths.sort(key=lambda p: p.first_position)
    if [p.first_position for p in paths] != [0, 1]:
        raise StructuralError("both maximal chains start with the same exchange")
    return paths[0], paths[1]


def path_form(p: LabeledPath) -> Optional[str]:
    """Which of the four rank-2 shapes the label sequences take, if any."""
    a, b = p.in_plane, p.along
    if any(x < 0 for x in a + b):
        return None
    if a == (0, 0) and all(x <= 2 for x in b):
        return "i"
    if a == (1, 1, 1) and all(x <= 1 for x in b):
        return "ii"
    if a == (2, 1, 2, 1) and b[0] == b[2] == 0 and b[1] <= 1 and b[3] <= 1:
        return "iii"
    if a == (1, 2, 1, 2) and b[1] == b[3] == 0 and b[0] <= 1 and b[2] <= 1:
        return "iv"
    return None


_SHAPES = {"i": (0, 0), "ii": (1, 1, 1), "iii": (2, 1, 2, 1), "iv": (1, 2, 1, 2)}


def _b_allowed(form: str, pos: int, b: int) -> bool:
    if b < 0:
        return False
    if form == "i":
        return b <= 2
    if form == "iii" and pos in (0, 2) or form == "iv" and pos in (1, 3):
        return b == 0
    return b <= 1


def is_template_factor(a: Sequence[int], b: Sequence[int]) -> bool:
    """Whether consecutive steps with labels (a, b) can sit inside one of the
    rank-2 shapes (as a run of consecutive arrows)."""
    a, b = tuple(a), tuple(b)
    for form, shape in _SHAPES.items():
        for s in range(len(shape) - len(a) + 1):
            if shape[s:s + len(a)] == a and all(_b_allowed(form, s + k, x) for k, x in enumerate(b)):
                return True
    return False


def match_template(p: LabeledPath, q: LabeledPath) -> tuple[str, str]:
    """Template pair (form of p, primed form of q); p must start at slot u."""
    if p.first_position != 0 or q.first_position != 1:
        raise TemplateMismatch("the first path must start with an exchange of u, the second of v")
    fp, fq = path_form(p), path_form(q)
    if fp is None:
        raise TemplateMismatch(f"path {p} matches none of the rank-2 forms")
    if fq is None:
        raise TemplateMismatch(f"path {q} matches none of the rank-2 forms")
    return fp, fq + "'"


# -- paths at -e2 ------------------------------------------------------------------

MINUS_E2 = (0, -1, 0)


def alpha_beta(f: Fan) -> tuple[LabeledPath, LabeledPath]:
    """Paths at -e2: alpha starts by exchanging (0,-r32,1), beta by
    exchanging (1,-r12,0)."""
    p, q = maximal_paths_at_ray(f, MINUS_E2)
    first = p.steps[0].exchanged
    return (p, q) if first[0] == 0 else (q, p)


def _even_half(x: int) -> Optional[int]:
    return x // 2 if x % 2 == 0 else None


def classify_alpha(path: LabeledPath, r12: int, r32: int) -> Optional[str]:
    """Case (i)-(v) of the alpha path at -e2, determined by (r12, r32)."""
    return _classify(path, r32, r12)


def classify_beta(path: LabeledPath, r12: int, r32: int) -> Optional[str]:
    """Dual cases (i')-(v'); the roles of r12 and r32 swap."""
    c = _classify(path, r12, r32)
    return c + "'" if c else None


def _classify(path: LabeledPath, first: int, last: int) -> Optional[str]:
    a, b = path.in_plane, path.along
    if a == (0, 0) and b == (first, last):
        return "i"
    if a == (1, 1, 1):
        if b == (first, 0, last):
            return "ii"
        if b == (first - 1, 1, last - 1):
            return "iii"
    h = _even_half(first)
    if a == (2, 1, 2, 1) and h is not None and b == (0, h, 0, last - h):
        return "iv"
    h = _even_half(last)
    if a == (1, 2, 1, 2) and h is not None and b == (first - h, 0, h, 0):
        return "v"
    return None


_ALPHA_R = {
    "ii": lambda r12, r32: r12 in (0, 1) and r32 in (0, 1),
    "iii": lambda r12, r32: r12 in (1, 2) and r32 in (1, 2),
    "iv": lambda r12, r32: (r12, r32) in {(0, 0), (1, 0), (1, 2), (2, 2)},
    "v": lambda r12, r32: (r12, r32) in {(0, 0), (0, 1), (2, 1), (2, 2)},
}

_ALPHA_H = {
    "i": lambda r12, r32: r12 == 0,
    "ii": lambda r12, r32: r12 == 0,
    "iii": lambda r12, r32: r12 == 1,
    "iv": lambda r12, r32: (r12, r32) in {(0, 0), (1, 2)},
    "v": lambda r12, r32: True,
}


def _first_labels(case: str, first: int, last: int) -> Optional[tuple[int, int]]:
    """(a, b) of the first arrow in case (i)-(v) of _classify."""
    if case == "i":
        return 0, first
    if case == "ii":
        return 1, first
    if case == "iii":
        return 1, first - 1
    if case == "iv":
        return (2, 0) if first % 2 == 0 else None
    if case == "v":
        return (1, first - last // 2) if last % 2 == 0 else None
    raise ValueError(case)


def _possible(r_own, r_other, h_own, first, last) -> list[tuple[str, int, int]]:
    out = []
    for case in ("i", "ii", "iii", "iv", "v"):
        if case in _ALPHA_R and not _ALPHA_R[case](r_own, r_other):
            continue
        if (h_own == 0) != _ALPHA_H[case](r_own, r_other):
            continue
        lab = _first_labels(case, first, last)
        if lab is not None:
            out.append((case, *lab))
    return out


def alpha_cases(d12, d32) -> list[tuple[str, int, int]]:
    """Cases for alpha allowed by (d12, d32) alone (h13 left free), each with
    the labels (a, b) of its first arrow."""
    return _possible(d12[1], d32[1], d12[2], d32[1], d12[1])


def beta_cases(d12, d32) -> list[tuple[str, int, int]]:
    return [(c + "'", a, b) for c, a, b in _possible(d32[1], d12[1], d32[2], d12[1], d32[1])]


def check_alpha(d: DatumD, case: Optional[str]) -> list[str]:
    """Statements about the alpha path at -e2 that fail for datum d."""
    r12, r32, h12, h13 = d[(1, 2)].r, d[(3, 2)].r, d[(1, 2)].h, d[(1, 3)].h
    return _check(case, r12, r32, h12, h13, _ALPHA_H)


def check_beta(d: DatumD, case: Optional[str]) -> list[str]:
    """Dual statements for the beta path: r12 and r32 swap, h32 and h31
    replace h12 and h13."""
    r12, r32, h32, h31 = d[(1, 2)].r, d[(3, 2)].r, d[(3, 2)].h, d[(3, 1)].h
    return _check(case.rstrip("'") if case else None, r32, r12, h32, h31, _ALPHA_H)


def _check(case, r_own, r_other, h_own, h_cross, h_rule) -> list[str]:
    bad = []
    if case is None:
        return ["no case matches"]
    if (case == "i") != (h_cross == 0):
        bad.append("case (i) exactly when the cross h vanishes")
    if case in _ALPHA_R and not _ALPHA_R[case](r_own, r_other):
        bad.append(f"case ({case}) with r = {(r_own, r_other)}")
    if (h_own == 0) != h_rule[case](r_own, r_other):
        bad.append(f"case ({case}) with h = {h_own}")
    return bad


def template_frequencies(fans: Sequence[Fan]) -> dict[str, int]:
    """How often each template pair occurs over all rays of the given fans."""
    counts: dict[str, int] = {}
    for f in fans:
        for r in f.rays:
            key = ",".join(match_template(*maximal_paths_at_ray(f, r)))
            counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))
