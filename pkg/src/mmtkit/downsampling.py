"""Strategic downsampling of reverse (center-targeted) examples.

Forward examples (En/Zh -> X) are always kept. A reverse example survives iff
its hash coordinate u(e) = fnv1a64("{seed}:{id}") / 2^64 falls below the
retention probability. Retention is a pure function of (seed, id), so the
kept set is identical across runs, shard orders, and worker counts, and is
monotone in p: raising p only ever adds examples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator

from .hashing import unit_uniform
from .records import DirectionalExample
from .registry import CENTERS


class SampleClass(str, Enum):
    FORWARD = "Forward"
    REVERSE = "Reverse"


@dataclass(frozen=True)
class RetentionPolicy:
    p_reverse: float
    seed: int = 42

    def __post_init__(self):
        if not 0.0 <= self.p_reverse <= 1.0:
            raise ValueError(f"p_reverse must be in [0, 1], got {self.p_reverse}")


def classify(example: DirectionalExample) -> SampleClass:
    return SampleClass.REVERSE if example.tgt_lang in CENTERS else SampleClass.FORWARD


def retained(policy: RetentionPolicy, example_id: str) -> bool:
    """Retention decision for a reverse example, by id alone."""
    return unit_uniform(policy.seed, example_id) < policy.p_reverse


@dataclass
class DownsampleStats:
    retained: dict[SampleClass, int] = field(default_factory=lambda: {c: 0 for c in SampleClass})
    dropped: dict[SampleClass, int] = field(default_factory=lambda: {c: 0 for c in SampleClass})

    def as_dict(self) -> dict:
        return {
            c.value: {"retained": self.retained[c], "dropped": self.dropped[c]}
            for c in SampleClass
        }


def downsample(
    examples: Iterable[DirectionalExample],
    policy: RetentionPolicy,
    stats: DownsampleStats | None = None,
) -> Iterator[DirectionalExample]:
    """Yield retained examples in input order. stats, when given, is complete
    only after the iterator is exhausted."""
    for ex in examples:
        cls = classify(ex)
        keep = cls is SampleClass.FORWARD or retained(policy, ex.id)
        if stats is not None:
            (stats.retained if keep else stats.dropped)[cls] += 1
        if keep:
            yield ex
