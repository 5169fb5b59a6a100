"""End-to-end acceptance suite.  Each criterion prints one PASS/FAIL line."""

import random
import time
from contextlib import contextmanager

import pytest

from gconvex.catalog import (
    DM_TABLE,
    all_orthant_ids,
    fragment_datum,
    min_max_cones,
    orthant_fan,
    search_fragments,
    wall_rays,
)
from gconvex.classify import (
    REQUIRED_FLAGS,
    analyze_fan,
    assemble_fan,
    enumerate_rank2,
)
from gconvex.exactlin import det, make_primitive, solve_normal
from gconvex.fan import Fan, adjacency_pairs, exchange_relation, is_sign_coherent_cone, validate
from gconvex.polytope import condition_H, hull_oracle, is_convex, lattice_points_in_orthant
from gconvex.reduction import (
    alpha_beta,
    check_alpha,
    check_beta,
    classify_alpha,
    classify_beta,
    match_template,
    maximal_paths_at_ray,
    reduction,
)
from gconvex.symmetry import GroupElement, act_datum, act_fan, act_vector, canonical_form, group


@contextmanager
def criterion(capsys, number: int, title: str, elapsed: float = 0.0):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\ncriterion {number} FAIL  {title}")
        raise
    with capsys.disabled():
        print(f"\ncriterion {number} PASS  {title} ({elapsed + time.perf_counter() - start:.2f} s)")


def test_criterion_1_rank2(capsys):
    with criterion(capsys, 1, "rank 2: 16 convex fans in 7 classes, under 1 s"):
        start = time.perf_counter()
        rep = enumerate_rank2()
        elapsed = time.perf_counter() - start
        assert len(rep.fans) == 16
        assert len(rep.classes) == 7
        assert elapsed < 1.0, elapsed


def _fragment_checks(fid):
    f = orthant_fan(fid)
    d12, d32 = fragment_datum(fid)
    mm = min_max_cones(d12, d32)
    for c in f.max_cones:
        vs = f.vectors(c)
        assert abs(det(vs)) == 1, (fid, c)
        assert is_sign_coherent_cone(vs), (fid, c)
        assert all(x * e >= 0 for v in vs for x, e in zip(v, (1, -1, 1))), (fid, c)
    for i, j, _ in adjacency_pairs(f):
        labels = exchange_relation(f, i, j, strict=False).labels
        assert min(labels) >= 0 and sum(labels) <= 2, (fid, labels)
    # rays on the walls x3 = 0 and x1 = 0 are exactly the plane vectors of d12, d32
    assert {r for r in f.rays if r[2] == 0} == set(wall_rays(1, 2, d12.l, d12.r)), fid
    assert {r for r in f.rays if r[0] == 0} == set(wall_rays(3, 2, d32.l, d32.r)), fid
    f.cone_index(mm.sigma_min)
    f.cone_index(mm.sigma_max)
    assert solve_normal(mm.sigma_min) == mm.v_min
    assert solve_normal(mm.sigma_max) == mm.v_max


def test_criterion_2_catalog(capsys):
    with criterion(capsys, 2, "orthant catalog: 15 fragments valid, search re-derives each, under 10 s"):
        start = time.perf_counter()
        ids = all_orthant_ids(mirrored=True)
        assert len([i for i in ids if not i.mirrored]) == 15
        for fid in ids:
            _fragment_checks(fid)
        for m, (d12, d32) in DM_TABLE.items():
            found = search_fragments(d12, d32)
            names = ["d10_0", "d10_1"] if m == 10 else [f"d{m}"]
            assert len(found) == len(names), (m, len(found))
            for n in names:
                assert sum(f.same_as(orthant_fan(n)) for f in found) == 1, n
        elapsed = time.perf_counter() - start
        assert elapsed < 10.0, elapsed


def test_criterion_3_rank3_counts(capsys, rank3_timed):
    rep, elapsed = rank3_timed
    with criterion(capsys, 3, "rank 3: 66 orbits, 61 realizable, 5 excluded matching the list, under 5 min", elapsed):
        assert rep.counts() == {"candidate_orbits": 66, "realizable": 61, "excluded": 5}
        assert rep.datum_orbits == rep.fan_classes == 66
        assert rep.excluded_match
        rep.check()
        assert elapsed < 300, elapsed


def test_criterion_4_all_flags(capsys, rank3):
    with criterion(capsys, 4, "all 66 fans: valid, convex (both tests), reflexive, unique interior point, Hasse"):
        assert len(rank3.candidates) == 66
        for c in rank3.candidates:
            missing = [k for k in REQUIRED_FLAGS if not c.flags.get(k)]
            assert not missing, (c.datum.label(), missing)


def test_criterion_5_h_description(capsys):
    with criterion(capsys, 5, "H-description: d(5) gives 6 points, d(6) gives 8, normals (1,1,1) and (0,-1,-1)"):
        eps = (1, -1, 1)
        d5 = min_max_cones(*DM_TABLE[5])
        pts5 = lattice_points_in_orthant([d5.v_max, d5.v_min], eps)
        assert pts5 == sorted(
            [(1, 0, 0), (1, -1, 0), (0, 0, 1), (0, -1, 1), (0, -2, 1), (0, -1, 0)]
        )
        assert pts5 == sorted(orthant_fan("d5").rays)
        assert d5.v_min == (0, -1, -1)
        assert condition_H([d5.v_max, d5.v_min], eps)

        d6 = min_max_cones(*DM_TABLE[6])
        pts6 = lattice_points_in_orthant([d6.v_max, d6.v_min], eps)
        assert len(pts6) == 8
        assert pts6 == sorted(orthant_fan("d6").rays)
        assert d6.v_max == (1, 1, 1)
        assert condition_H([d6.v_max, d6.v_min], eps)

        assert solve_normal([(1, 0, 0), (2, -1, 0), (0, 0, 1)]) == (1, 1, 1)
        assert solve_normal([(1, -1, 0), (0, -1, 0), (0, -2, 1)]) == (0, -1, -1)


def test_criterion_6_reduction(capsys, rank3, rank2):
    with criterion(capsys, 6, "reduction at every ray of the 61 fans: rank-2 class and template pair, under 1 min"):
        start = time.perf_counter()
        classes = set(rank2.classes)
        fans = [c for c in rank3.realizable]
        assert len(fans) == 61
        rays = 0
        for c in fans:
            f = c.fan
            for w in f.rays:
                red = reduction(f, w)
                assert canonical_form(red.fan) in classes, (c.datum.label(), w)
                p, q = maximal_paths_at_ray(f, w)
                match_template(p, q)
                rays += 1
            r12, r32 = c.datum[(1, 2)].r, c.datum[(3, 2)].r
            alpha, beta = alpha_beta(f)
            assert not check_alpha(c.datum, classify_alpha(alpha, r12, r32))
            assert not check_beta(c.datum, classify_beta(beta, r12, r32))
        assert rays > 61 * 6
        elapsed = time.perf_counter() - start
        assert elapsed < 60, elapsed


def test_criterion_7_symmetry(capsys, rank3):
    with criterion(capsys, 7, "symmetry: group axioms, canonical form on orbits, assembly commutes with G"):
        G = group(3)
        e = GroupElement.identity()
        basis = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -3, 5)]
        for g in G:
            assert g @ e == g == e @ g
            assert g @ g.inverse() == e == g.inverse() @ g
            for h in G:
                gh = g @ h
                assert gh in G
                for v in basis:
                    assert act_vector(gh, v) == act_vector(g, act_vector(h, v))
                for k in G:
                    assert (g @ h) @ k == g @ (h @ k)
        for c in rank3.candidates:
            forms = {canonical_form(act_fan(g, c.fan)) for g in G}
            assert forms == {c.form}, c.datum.label()
            for g in G:
                assert assemble_fan(act_datum(g, c.datum)).same_as(act_fan(g, c.fan)), (
                    c.datum.label(), str(g))


def _outcome(fn, f) -> bool:
    """Result of a convexity test; a test that cannot be evaluated counts as failed."""
    try:
        return bool(fn(f))
    except ValueError:
        return False


def _new_ray(f: Fan, rng: random.Random, base=None):
    while True:
        if base is None:
            r = [rng.randint(-2, 2) for _ in range(f.rank)]
        else:
            r = list(base)
            r[rng.randrange(f.rank)] += rng.choice((-1, 1))
        if any(r):
            r = make_primitive(r)
            if r not in f.rays:
                return r


def perturb(f: Fan, rng: random.Random) -> Fan:
    kind = rng.choice(("drop", "move", "replace"))
    if kind == "drop":
        k = rng.randrange(len(f.max_cones))
        return Fan.build(f.rays, [c for i, c in enumerate(f.max_cones) if i != k])
    i = rng.randrange(len(f.rays))
    rays = list(f.rays)
    rays[i] = _new_ray(f, rng, f.rays[i] if kind == "move" else None)
    return Fan.build(rays, f.max_cones)


def test_criterion_8_oracle_equivalence(capsys, rank3, rank2):
    with criterion(capsys, 8, "convexity criterion agrees with hull oracle; 50 perturbations all rejected"):
        fans = [f for _, _, f in rank2.fans] + [c.fan for c in rank3.candidates]
        assert len(fans) == 16 + 66
        for f in fans:
            assert bool(is_convex(f)) == hull_oracle(f)
        rng = random.Random(20240611)
        for _ in range(50):
            g = perturb(rng.choice(fans), rng)
            pairwise, hull = _outcome(is_convex, g), _outcome(hull_oracle, g)
            assert pairwise == hull, g
            assert not (validate(g).ok and pairwise), g


@pytest.mark.parametrize("m", [5, 6])
def test_h_description_matches_region(m):
    # every lattice point of the region is a ray, and vice versa
    mm = min_max_cones(*DM_TABLE[m])
    assert set(lattice_points_in_orthant([mm.v_max, mm.v_min], (1, -1, 1))) == set(orthant_fan(f"d{m}").rays)


def test_assembled_fans_flags_recomputed(rank3):
    # flags stored on the report agree with a fresh run on a sample
    for c in rank3.candidates[::11]:
        assert analyze_fan(c.fan) == c.flags
