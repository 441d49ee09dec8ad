"""Heuristic pair filtering and quality-score thresholding.

Rules are applied in list order and a pair is charged to the first rule it
fails, so report counts partition the input: kept + sum(rejected) = total.
Stateful rules (dedup) are reset at the start of every apply_heuristics pass,
which keeps filtering idempotent.

Lengths are whitespace-token counts, except for languages written without
word spacing (zh, ja, th, my, km, lo, bo, yue) where characters stand in for
tokens: bounds scale their maximum by 4 characters per token (the minimum
stays in raw characters so short CJK sentences survive) and ratios divide
character counts by 4 to stay comparable across scripts.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import InvalidScore, MissingScore, RecordParseError
from .records import DirectionalExample, ScoredPair, check_score

SPACELESS = frozenset({"zh", "ja", "th", "my", "km", "lo", "bo", "yue"})

CHARS_PER_TOKEN = 4

DEFAULT_THRESHOLDS = (0.6, 0.7, 0.8)

# C0 controls are disallowed except tab and newline.
_ALLOWED_CONTROLS = {"\t", "\n"}


def token_length(lang: str, text: str) -> float:
    """Length in token-like units, comparable across spaced and unspaced scripts."""
    if lang in SPACELESS:
        return len(text) / CHARS_PER_TOKEN
    return float(len(text.split()))


class FilterRule:
    name: str = "FilterRule"

    def passes(self, ex: DirectionalExample) -> bool:
        raise NotImplementedError

    def reset(self) -> None:
        pass

    def to_json(self) -> dict:
        return {"kind": self.name}


class NonEmpty(FilterRule):
    name = "NonEmpty"

    def passes(self, ex: DirectionalExample) -> bool:
        return bool(ex.src.strip()) and bool(ex.tgt.strip())


class SrcTgtDistinct(FilterRule):
    name = "SrcTgtDistinct"

    def passes(self, ex: DirectionalExample) -> bool:
        return ex.src != ex.tgt


@dataclass
class MaxLengthRatio(FilterRule):
    ratio: float = 3.0
    name = "MaxLengthRatio"

    def __post_init__(self):
        if self.ratio <= 0:
            raise ValueError(f"ratio must be positive, got {self.ratio}")

    def passes(self, ex: DirectionalExample) -> bool:
        a = max(1.0, token_length(ex.src_lang, ex.src))
        b = max(1.0, token_length(ex.tgt_lang, ex.tgt))
        return max(a, b) / min(a, b) <= self.ratio

    def to_json(self) -> dict:
        return {"kind": self.name, "ratio": self.ratio}


@dataclass
class LengthBounds(FilterRule):
    min_len: int = 1
    max_len: int = 512
    name = "LengthBounds"

    def __post_init__(self):
        if not 0 < self.min_len <= self.max_len:
            raise ValueError(f"need 0 < min_len <= max_len, got {self.min_len}..{self.max_len}")

    def _ok(self, lang: str, text: str) -> bool:
        if lang in SPACELESS:
            return self.min_len <= len(text) <= self.max_len * CHARS_PER_TOKEN
        return self.min_len <= len(text.split()) <= self.max_len

    def passes(self, ex: DirectionalExample) -> bool:
        return self._ok(ex.src_lang, ex.src) and self._ok(ex.tgt_lang, ex.tgt)

    def to_json(self) -> dict:
        return {"kind": self.name, "min_len": self.min_len, "max_len": self.max_len}


class ControlCharFree(FilterRule):
    name = "ControlCharFree"

    @staticmethod
    def _clean(text: str) -> bool:
        return all(ch >= " " or ch in _ALLOWED_CONTROLS for ch in text)

    def passes(self, ex: DirectionalExample) -> bool:
        return self._clean(ex.src) and self._clean(ex.tgt)


class ExactDedup(FilterRule):
    name = "ExactDedup"

    def __init__(self):
        self._seen: set[tuple[str, str]] = set()

    def passes(self, ex: DirectionalExample) -> bool:
        key = (ex.src, ex.tgt)
        if key in self._seen:
            return False
        self._seen.add(key)
        return True

    def reset(self) -> None:
        self._seen.clear()


def default_rules() -> list[FilterRule]:
    return [
        NonEmpty(),
        SrcTgtDistinct(),
        MaxLengthRatio(3.0),
        LengthBounds(1, 512),
        ControlCharFree(),
        ExactDedup(),
    ]


_RULE_KINDS = {
    "NonEmpty": NonEmpty,
    "SrcTgtDistinct": SrcTgtDistinct,
    "MaxLengthRatio": MaxLengthRatio,
    "LengthBounds": LengthBounds,
    "ControlCharFree": ControlCharFree,
    "ExactDedup": ExactDedup,
}


def rules_from_config(entries: list[dict]) -> list[FilterRule]:
    """Build a rule list from [{"kind": ..., <params>}] config objects."""
    rules: list[FilterRule] = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict) or "kind" not in entry:
            raise RecordParseError(f"rule {i}: expected an object with a 'kind' field")
        kind = entry["kind"]
        if kind not in _RULE_KINDS:
            raise RecordParseError(f"rule {i}: unknown kind {kind!r}")
        params = {k: v for k, v in entry.items() if k != "kind"}
        try:
            rules.append(_RULE_KINDS[kind](**params))
        except (TypeError, ValueError) as e:
            raise RecordParseError(f"rule {i} ({kind}): {e}") from None
    if not rules:
        raise RecordParseError("rule list must not be empty")
    return rules


@dataclass
class FilterReport:
    input_count: int = 0
    kept: int = 0
    rejected: dict[str, int] = field(default_factory=dict)
    histogram: dict[float, tuple[int, float]] | None = None

    def consistent(self) -> bool:
        return self.kept + sum(self.rejected.values()) == self.input_count

    def as_dict(self) -> dict:
        obj = {
            "input_count": self.input_count,
            "kept": self.kept,
            "rejected": dict(self.rejected),
        }
        if self.histogram is not None:
            obj["histogram"] = {
                f"{tau:g}": {"count": c, "proportion": p}
                for tau, (c, p) in self.histogram.items()
            }
        return obj


def apply_heuristics(
    pairs: Iterable[DirectionalExample],
    rules: list[FilterRule],
    report: FilterReport | None = None,
) -> tuple[Iterator[DirectionalExample], FilterReport]:
    """Stream kept pairs; the report is complete once the stream is consumed."""
    if not rules:
        raise ValueError("rules must be non-empty")
    if report is None:
        report = FilterReport()

    def run() -> Iterator[DirectionalExample]:
        for rule in rules:
            rule.reset()
        for ex in pairs:
            report.input_count += 1
            failed = None
            for rule in rules:
                if not rule.passes(ex):
                    failed = rule.name
                    break
            if failed is None:
                report.kept += 1
                yield ex
            else:
                report.rejected[failed] = report.rejected.get(failed, 0) + 1

    return run(), report


def attach_scores(
    pairs: Iterable[DirectionalExample], sidecar: dict[str, float]
) -> Iterator[ScoredPair]:
    for ex in pairs:
        if ex.id not in sidecar:
            raise MissingScore(ex.id)
        score = check_score(sidecar[ex.id], ex.id)
        yield ScoredPair(example=ex, qe_score=score)


def threshold_filter(scored: Iterable[ScoredPair], tau: float) -> Iterator[ScoredPair]:
    """Keep pairs with qe_score >= tau (inclusive boundary)."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must be in [0, 1], got {tau}")
    for pair in scored:
        if pair.qe_score >= tau:
            yield pair


def score_histogram(
    scored: Iterable[ScoredPair],
    thresholds: Iterable[float] = DEFAULT_THRESHOLDS,
) -> dict[float, tuple[int, float]]:
    """Count and proportion of pairs at or above each threshold."""
    taus = list(thresholds)
    if taus != sorted(taus):
        raise ValueError("thresholds must be sorted ascending")
    counts = {tau: 0 for tau in taus}
    total = 0
    for pair in scored:
        total += 1
        for tau in taus:
            if pair.qe_score >= tau:
                counts[tau] += 1
    return {tau: (c, c / total if total else 0.0) for tau, c in counts.items()}
