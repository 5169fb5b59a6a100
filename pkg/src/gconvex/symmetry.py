"""The group of signed coordinate permutations S_d x {±1} and its actions."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .datum import DatumD, pairs
from .exactlin import Vector
from .fan import Fan


@dataclass(frozen=True, order=True)
class GroupElement:
    """g = (s, z) acting as z * f_s, where f_s sends e_i to e_{s(i)}.

    ``perm[i - 1]`` is s(i), so perm uses 1-based values.
    """

    perm: tuple[int, ...]
    sign: int = 1

    @property
    def rank(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, rank: int = 3) -> "GroupElement":
        return cls(tuple(range(1, rank + 1)), 1)

    @classmethod
    def from_cycles(cls, cycles: str, sign: int = 1, rank: int = 3) -> "GroupElement":
        """Parse cycle notation such as '(13)', '(123)' or 'id'."""
        perm = list(range(1, rank + 1))
        text = cycles.replace(" ", "")
        if text not in ("", "id", "()"):
            for cyc in text.strip("()").split(")("):
                pts = [int(c) for c in cyc]
                for a, b in zip(pts, pts[1:] + pts[:1]):
                    perm[a - 1] = b
        return cls(tuple(perm), sign)

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        """Composition: (self @ other)·x == self·(other·x)."""
        return GroupElement(tuple(self.perm[other.perm[i] - 1] for i in range(self.rank)),
                            self.sign * other.sign)

    def inverse(self) -> "GroupElement":
        inv = [0] * self.rank
        for i, s in enumerate(self.perm):
            inv[s - 1] = i + 1
        return GroupElement(tuple(inv), self.sign)

    def matrix(self) -> list[list[int]]:
        n = self.rank
        return [[self.sign if self.perm[j] == i + 1 else 0 for j in range(n)] for i in range(n)]

    def __str__(self) -> str:
        return f"({''.join(map(str, self.perm))},{'+' if self.sign > 0 else '-'})"


def group(rank: int = 3) -> list[GroupElement]:
    """All 2 * rank! elements, identity first."""
    return [GroupElement(p, z) for z in (1, -1) for p in permutations(range(1, rank + 1))]


def act_vector(g: GroupElement, v: Sequence[int]) -> Vector:
    if len(v) != g.rank:
        raise ValueError("rank mismatch")
    out = [0] * g.rank
    for i, c in enumerate(v):
        out[g.perm[i] - 1] = g.sign * c
    return tuple(out)


act_sign = act_vector


def act_fan(g: GroupElement, f: Fan) -> Fan:
    return Fan.build([act_vector(g, r) for r in f.rays], f.max_cones)


def act_datum(g: GroupElement, d: DatumD) -> DatumD:
    """(d^g)_{ij} = d_{s^-1(i) s^-1(j)} for z = +1; for z = -1 the indices are
    transposed as well and l, r swap."""
    inv = g.inverse().perm
    out = {}
    for i, j in pairs(d.rank):
        a, b = inv[i - 1], inv[j - 1]
        if g.sign == 1:
            out[(i, j)] = d[(a, b)]
        else:
            l, r, h = d[(b, a)]
            out[(i, j)] = (r, l, h)
    return DatumD.from_mapping(out, d.rank)


def serialize(f: Fan) -> bytes:
    n = f.normalized()
    return json.dumps([n.rays, n.max_cones], separators=(",", ":")).encode()


def canonical_form(f: Fan) -> bytes:
    """Least serialization over the orbit; equal iff the fans are isomorphic."""
    return min(serialize(act_fan(g, f)) for g in group(f.rank))


def canonical_datum(d: DatumD) -> DatumD:
    return min((act_datum(g, d) for g in group(d.rank)), key=lambda e: e.values)


def stabilizer(f: Fan) -> list[GroupElement]:
    base = f.cone_sets()
    return [g for g in group(f.rank) if act_fan(g, f).cone_sets() == base]
