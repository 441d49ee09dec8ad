"""Repetition statistics: exact counts, NFC collapsing, policy composition."""
from __future__ import annotations

import random

from mmtkit.diagnostics import (
    render_histogram,
    repetition_after_policy,
    target_repetition_stats,
)
from mmtkit.directions import expand
from mmtkit.downsampling import RetentionPolicy, SampleClass, downsample
from mmtkit.records import MultiWayRecord


def full_record(registry, rec_id="f0"):
    return MultiWayRecord(
        id=rec_id, sentences={c: f"{rec_id} sentence {c}" for c in registry.codes()}
    )


def test_full_record_repetition_structure(registry, dirset):
    examples = expand(full_record(registry), dirset)
    stats = target_repetition_stats(examples)
    assert stats.max_repetition == 59
    rev = stats.by_class[SampleClass.REVERSE]
    fwd = stats.by_class[SampleClass.FORWARD]
    # en and zh targets each collect all 59 other languages as sources
    assert rev.distinct_targets == 2
    assert rev.max_repetition == 59
    assert rev.total_pairs == 118
    # each of the 58 non-center targets is reached from en and zh only
    assert fwd.distinct_targets == 58
    assert fwd.max_repetition == 2
    assert stats.histogram == {2: 58, 59: 2}


def test_mean_repetition(registry, dirset):
    stats = target_repetition_stats(expand(full_record(registry), dirset))
    assert stats.by_class[SampleClass.REVERSE].mean_repetition == 59.0
    assert stats.by_class[SampleClass.FORWARD].mean_repetition == 2.0


def test_nfc_equivalent_targets_collapse(mk_example):
    composed = "café"
    decomposed = "café"
    examples = [
        mk_example("a#fr2en", "fr", "en", "source one", composed),
        mk_example("b#de2en", "de", "en", "source two", decomposed),
    ]
    stats = target_repetition_stats(examples)
    assert len(stats.per_target) == 1
    assert stats.max_repetition == 2


def test_identical_sources_count_once(mk_example):
    examples = [
        mk_example("a#fr2en", "fr", "en", "same source", "the target"),
        mk_example("b#fr2en", "fr", "en", "same source", "the target"),
        mk_example("c#de2en", "de", "en", "same source", "the target"),
    ]
    stats = target_repetition_stats(examples)
    # (fr, h) and (de, h): language is part of the source identity
    assert stats.max_repetition == 2


def test_policy_composition_is_stats_of_downsample(registry, dirset):
    records = [
        MultiWayRecord(id=f"c{i}", sentences={c: f"{c} {i}" for c in ("en", "zh", "fr", "de")})
        for i in range(50)
    ]
    examples = []
    for r in records:
        examples.extend(expand(r, dirset))
    policy = RetentionPolicy(p_reverse=0.3, seed=5)
    via_helper = repetition_after_policy(examples, policy)
    via_compose = target_repetition_stats(downsample(examples, policy))
    assert via_helper.as_dict() == via_compose.as_dict()
    assert via_helper.per_target == via_compose.per_target


def test_brute_force_recount_on_random_partial_records(registry, dirset):
    rng = random.Random(77)
    codes = registry.codes()
    examples = []
    for i in range(40):
        langs = rng.sample(codes, rng.randrange(2, 10))
        if rng.random() < 0.5:
            langs.append("en")
        rec = MultiWayRecord(
            id=f"r{i}", sentences={c: f"{c} text {i}" for c in set(langs)}
        )
        examples.extend(expand(rec, dirset))
    stats = target_repetition_stats(examples)
    brute: dict[tuple[str, str], set] = {}
    for ex in examples:
        brute.setdefault((ex.tgt_lang, ex.tgt), set()).add((ex.src_lang, ex.src))
    assert len(stats.per_target) == len(brute)
    assert sorted(stats.per_target.values()) == sorted(len(v) for v in brute.values())
    assert stats.max_repetition == max((len(v) for v in brute.values()), default=0)


def test_frozen_seeded_mean_after_policy(registry, dirset):
    # 1000 records over all 60 languages, reverse retention 5%, seed 42.
    # Independently derived: 950 of 1000 en-target texts survive with at
    # least one source; their source counts sum to 2937 (max 8).
    records = (
        MultiWayRecord(id=f"d{i:04d}", sentences={c: f"{c} s{i}" for c in registry.codes()})
        for i in range(1000)
    )
    def examples():
        for r in records:
            yield from expand(r, dirset)

    stats = repetition_after_policy(examples(), RetentionPolicy(p_reverse=0.05, seed=42))
    en_counts = [n for (lang, _), n in stats.per_target.items() if lang == "en"]
    assert len(en_counts) == 950
    assert sum(en_counts) == 2937
    assert max(en_counts) == 8


def test_render_histogram(registry, dirset):
    stats = target_repetition_stats(expand(full_record(registry), dirset))
    text = render_histogram(stats)
    lines = text.splitlines()
    assert len(lines) == 2
    assert lines[0].startswith("     2 sources |")
    assert lines[0].endswith(" 58")
    assert lines[1].startswith("    59 sources |")
    assert lines[1].endswith(" 2")
    from mmtkit.diagnostics import RepetitionStats

    empty = RepetitionStats(per_target={}, histogram={}, max_repetition=0, by_class={})
    assert render_histogram(empty) == "(no targets)\n"


def test_as_dict_shape(registry, dirset):
    stats = target_repetition_stats(expand(full_record(registry), dirset))
    d = stats.as_dict()
    assert d["distinct_targets"] == 60
    assert d["max_repetition"] == 59
    assert d["histogram"] == {"2": 58, "59": 2}
    assert d["by_class"]["Reverse"]["max_repetition"] == 59
