"""The numeric datum d = (d_ij): one triple (l, r, h) per ordered pair i != j."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Iterator, Mapping, NamedTuple

Pair = tuple[int, int]


class MutationDatum(NamedTuple):
    l: int
    r: int
    h: int

    def __str__(self) -> str:
        return f"{self.l}{self.r}{self.h}"

    @classmethod
    def parse(cls, text) -> "MutationDatum":
        if isinstance(text, MutationDatum):
            return text
        if isinstance(text, str):
            digits = [c for c in text if c.isdigit()]
        else:
            digits = list(text)
        if len(digits) != 3:
            raise ValueError(f"expected three entries (l, r, h), got {text!r}")
        out = cls(*(int(c) for c in digits))
        if out not in ADMISSIBLE:
            raise ValueError(f"{tuple(out)} is not an admissible triple")
        return out


ADMISSIBLE: tuple[MutationDatum, ...] = tuple(
    MutationDatum(*t)
    for t in [(0, 0, 0), (1, 1, 0), (1, 2, 0), (2, 1, 0), (1, 1, 1), (1, 2, 1), (2, 1, 1)]
)

ZERO = ADMISSIBLE[0]


def pairs(rank: int = 3) -> list[Pair]:
    return [p for p in permutations(range(1, rank + 1), 2)]


@dataclass(frozen=True)
class DatumD:
    """Six admissible triples indexed by (i, j), 1 <= i != j <= 3."""

    values: tuple[MutationDatum, ...]
    rank: int = 3

    @classmethod
    def from_mapping(cls, entries: Mapping[Pair, Iterable[int]], rank: int = 3) -> "DatumD":
        missing = [p for p in pairs(rank) if p not in entries]
        if missing:
            raise ValueError(f"datum is missing entries {missing}")
        return cls(tuple(MutationDatum.parse(entries[p]) for p in pairs(rank)), rank)

    @classmethod
    def build(cls, **kw) -> "DatumD":
        """DatumD.build(d12="211", d13=(1,1,0), ...); omitted entries are zero."""
        entries = {p: ZERO for p in pairs(3)}
        for key, val in kw.items():
            i, j = int(key[1]), int(key[2])
            entries[(i, j)] = MutationDatum.parse(val)
        return cls.from_mapping(entries)

    @classmethod
    def zero(cls, rank: int = 3) -> "DatumD":
        return cls(tuple(ZERO for _ in pairs(rank)), rank)

    def __getitem__(self, pair: Pair) -> MutationDatum:
        return self.values[pairs(self.rank).index(tuple(pair))]

    def items(self) -> Iterator[tuple[Pair, MutationDatum]]:
        return zip(pairs(self.rank), self.values)

    def replace(self, **kw) -> "DatumD":
        entries = dict(self.items())
        for key, val in kw.items():
            entries[(int(key[1]), int(key[2]))] = MutationDatum.parse(val)
        return DatumD.from_mapping(entries, self.rank)

    def to_dict(self) -> dict[str, list[int]]:
        return {f"d{i}{j}": list(v) for (i, j), v in self.items()}

    def label(self) -> str:
        """Compact text form 'd12 d13 d21 d23 d31 d32', e.g. '211 110 111 121 000 000'."""
        return " ".join(str(v) for v in self.values)

    @classmethod
    def parse(cls, text: str) -> "DatumD":
        parts = text.split()
        if len(parts) != 6:
            raise ValueError("expected six triples in the order d12 d13 d21 d23 d31 d32")
        return cls(tuple(MutationDatum.parse(p) for p in parts))
