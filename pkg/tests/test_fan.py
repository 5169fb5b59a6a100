import pytest

from gconvex.catalog import orthant_fan
from gconvex.fan import (
    Fan,
    NotAdjacentError,
    OrderingViolation,
    OrientationError,
    StructuralError,
    adjacency_pairs,
    coordinate_fan,
    exchange,
    exchange_relation,
    hasse_orientation,
    membership_counts,
    orthant_max_cones,
    orthant_restriction,
    probe_directions,
    validate,
)

OCT = coordinate_fan(3)


def test_coordinate_fan_valid():
    rep = validate(OCT)
    assert rep.ok, rep.failures
    assert len(OCT.rays) == 6 and len(OCT.max_cones) == 8


@pytest.mark.parametrize(
    "rays, cones, msg",
    [
        ([], [], "at least one ray"),
        ([(1, 0), (0, 1, 0)], [(0, 1)], "mixed rank"),
        ([(1, 0), (1, 0)], [(0, 1)], "duplicate rays"),
        ([(2, 0), (0, 1)], [(0, 1)], "not primitive"),
        ([(1, 0), (0, 1)], [(0, 0)], "repeats a ray"),
        ([(1, 0), (0, 1)], [(0, 2)], "missing ray"),
        ([(1, 0), (0, 1)], [(0, 1), (1, 0)], "duplicate maximal cones"),
    ],
)
def test_build_rejects(rays, cones, msg):
    with pytest.raises(StructuralError, match=msg):
        Fan.build(rays, cones)


def test_from_dict_rank_mismatch():
    with pytest.raises(StructuralError):
        Fan.from_dict({"rank": 3, "rays": [[1, 0], [0, 1]], "max_cones": [[0, 1]]})


def test_json_roundtrip():
    back = Fan.from_dict(__import__("json").loads(OCT.to_json()))
    assert back == OCT and back.same_as(OCT)


def test_singular_cone_detected():
    f = Fan.from_cones([[(1, 1, 1), (1, 0, -1), (1, 0, 1)]])
    rep = validate(f)
    assert not rep.nonsingular and not rep.ok


def test_sign_incoherent_detected():
    f = Fan.from_cones([[(1, 0), (-1, 1)], [(-1, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])
    rep = validate(f)
    assert not rep.sign_coherent


def test_overlap_detected():
    cones = [OCT.vectors(c) for c in OCT.max_cones] + [[(1, 0, 0), (1, 1, 0), (0, 0, 1)]]
    rep = validate(Fan.from_cones(cones))
    assert not rep.fan_property


def test_incomplete_detected():
    f = Fan.from_cones([OCT.vectors(c) for c in OCT.max_cones[:-1]])
    rep = validate(f)
    assert rep.fan_property and not rep.complete


def test_exchange_coordinate_fan():
    step = exchange([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(-1, 0, 0), (0, 1, 0), (0, 0, 1)])
    assert step.x == (1, 0, 0) and step.y == (-1, 0, 0)
    assert step.labels == (0, 0)
    assert step.exchanged_position == 0


def test_exchange_labels_order_and_value():
    # (1,0,0) + (1,-2,0) = 2 (1,-1,0)
    step = exchange([(1, 0, 0), (1, -1, 0), (0, 0, 1)], [(1, -2, 0), (1, -1, 0), (0, 0, 1)])
    assert step.shared == ((1, -1, 0), (0, 0, 1))
    assert step.labels == (2, 0)
    assert step.label_of((1, -1, 0)) == 2


def test_exchange_negative_is_ordering_violation():
    src = [(1, 0), (1, -1)]
    tgt = [(1, -1), (-2, 1)]
    with pytest.raises(OrderingViolation):
        exchange(src, tgt)
    assert exchange(src, tgt, strict=False).labels == (-1,)


def test_exchange_requires_adjacency():
    with pytest.raises(NotAdjacentError):
        exchange([(1, 0, 0), (0, 1, 0), (0, 0, 1)], [(-1, 0, 0), (0, -1, 0), (0, 0, 1)])


def test_adjacency_on_fragment_lists_internal_walls_only():
    f = orthant_fan("d1")
    pairs = adjacency_pairs(f)
    assert len(pairs) == 1
    i, j, face = pairs[0]
    assert sorted(f.vectors(face)) == [(0, 0, 1), (1, -1, 0)]
    assert exchange_relation(f, i, j).labels in ((1, 0), (0, 1))


def test_hasse_of_coordinate_fan():
    h = hasse_orientation(OCT)
    pos = OCT.cone_index([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    neg = OCT.cone_index([(-1, 0, 0), (0, -1, 0), (0, 0, -1)])
    assert h.is_acyclic()
    assert h.sources() == [pos] and h.sinks() == [neg]
    assert len(h.arrows) == 12
    chains = h.maximal_chains()
    assert len(chains) == 6 and all(len(c) == 4 for c in chains)


def test_hasse_rank2_source_and_sink():
    from gconvex.classify import rank2_fan

    f = rank2_fan((1, 2), (2, 1))
    h = hasse_orientation(f)
    assert h.is_acyclic()
    assert h.sources() == [f.cone_index([(1, 0), (0, 1)])]
    assert h.sinks() == [f.cone_index([(-1, 0), (0, -1)])]


def test_hasse_needs_positive_cone():
    f = Fan.from_cones([[(1, 1), (0, 1)], [(0, 1), (-1, 0)], [(-1, 0), (0, -1)], [(0, -1), (1, 1)]])
    with pytest.raises(OrientationError):
        hasse_orientation(f)


def test_orthant_restriction():
    eps = (1, -1, 1)
    faces = orthant_restriction(OCT, eps)
    # one cone of the octant fan lies in each closed orthant: 3 rays, 3 edges, 1 triangle
    assert [len(c) for c in faces] == [1, 1, 1, 2, 2, 2, 3]
    assert len(orthant_max_cones(OCT, eps)) == 1


def test_probe_directions_deterministic():
    a = probe_directions(3, 50)
    assert a == probe_directions(3, 50)
    assert len(a) == 50 and all(any(x) for x in a)
    counts = membership_counts(OCT, a)
    assert all(c >= 1 for c in counts)
