"""Bi-centric direction space and multi-way record expansion.

Every supported direction has en or zh on at least one side. The en-zh pair
is enumerated once, under the En-centric block, so an n-language registry
yields (n-1) + (n-2) pairs and twice as many directions.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import MissingCenter
from .records import DirectionalExample, MultiWayRecord, Provenance
from .registry import CENTERS, Registry


@dataclass(frozen=True, order=True)
class Direction:
    src: str
    tgt: str

    def __post_init__(self):
        if self.src == self.tgt:
            raise ValueError(f"direction with identical sides: {self.src!r}")
        if self.src not in CENTERS and self.tgt not in CENTERS:
            raise ValueError(f"direction {self.src}->{self.tgt} does not involve a center language")

    @property
    def suffix(self) -> str:
        return f"{self.src}2{self.tgt}"

    @property
    def is_reverse(self) -> bool:
        # Reverse means center-targeted; en->zh and zh->en are both reverse.
        return self.tgt in CENTERS

    def __str__(self) -> str:
        return f"{self.src}->{self.tgt}"


@dataclass(frozen=True)
class DirectionSet:
    directions: tuple[Direction, ...]
    pair_count: int
    direction_count: int


def enumerate_directions(registry: Registry) -> DirectionSet:
    """All En<->X and Zh<->X directions in registry order, En-centric first."""
    codes = registry.codes()
    for center in CENTERS:
        if center not in registry:
            raise MissingCenter(f"registry must contain center language {center!r}")
    directions: list[Direction] = []
    for x in codes:
        if x != "en":
            directions.append(Direction("en", x))
            directions.append(Direction(x, "en"))
    for x in codes:
        if x not in CENTERS:
            directions.append(Direction("zh", x))
            directions.append(Direction(x, "zh"))
    return DirectionSet(
        directions=tuple(directions),
        pair_count=len(directions) // 2,
        direction_count=len(directions),
    )


def expand(record: MultiWayRecord, dirset: DirectionSet) -> list[DirectionalExample]:
    """One human-provenance example per direction covered by the record."""
    sentences = record.sentences
    out: list[DirectionalExample] = []
    for d in dirset.directions:
        if d.src in sentences and d.tgt in sentences:
            out.append(
                DirectionalExample(
                    id=f"{record.id}#{d.suffix}",
                    src_lang=d.src,
                    tgt_lang=d.tgt,
                    src=sentences[d.src],
                    tgt=sentences[d.tgt],
                    provenance=Provenance.HUMAN,
                )
            )
    return out
