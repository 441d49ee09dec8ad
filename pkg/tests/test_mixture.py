"""SFT mixture: selection, retention, format assignment, output order."""
from __future__ import annotations

import pytest

from mmtkit.directions import enumerate_directions
from mmtkit.errors import MissingScore
from mmtkit.hashing import unit_uniform
from mmtkit.mixture import MixtureSpec, build_sft_mixture
from mmtkit.prompts import PromptFormat
from mmtkit.records import MultiWayRecord


def spec(**kw):
    base = dict(per_direction_min=0, per_direction_max=10**6, seed=42)
    base.update(kw)
    return MixtureSpec(**base)


def records(n, langs, prefix="m"):
    return [
        MultiWayRecord(id=f"{prefix}{i:05d}", sentences={l: f"{l} text {i}" for l in langs})
        for i in range(n)
    ]


def test_spec_defaults_and_validation():
    d = MixtureSpec()
    assert (d.per_direction_min, d.per_direction_max) == (3000, 20000)
    assert d.forward_pmp_share == 0.5
    assert d.reverse_total_retention == 0.05
    assert d.reverse_pmp_share_of_retained == 0.5
    assert d.seed == 42
    with pytest.raises(ValueError):
        MixtureSpec(forward_pmp_share=1.2)
    with pytest.raises(ValueError):
        MixtureSpec(per_direction_min=10, per_direction_max=5)
    with pytest.raises(ValueError):
        MixtureSpec.from_json({"per_direction_floor": 1})
    assert MixtureSpec.from_json({"seed": 7}).seed == 7


def test_unscored_selection_keeps_corpus_order(registry, dirset):
    recs = records(5, ["en", "fr"])
    out, report = build_sft_mixture(
        recs, registry, dirset, spec(per_direction_max=3, reverse_total_retention=1.0)
    )
    rep = report.per_direction["en->fr"]
    assert (rep.candidates, rep.selected) == (5, 3)
    fwd_ids = [pe.id for pe in out if pe.id.endswith("#en2fr")]
    assert fwd_ids == ["m00000#en2fr", "m00001#en2fr", "m00002#en2fr"]


def test_scored_selection_sorts_by_score_then_id(registry, dirset):
    recs = records(4, ["en", "fr"])
    scores = {}
    for i in range(4):
        scores[f"m{i:05d}#en2fr"] = [0.2, 0.9, 0.9, 0.5][i]
        scores[f"m{i:05d}#fr2en"] = 0.5
    out, report = build_sft_mixture(
        recs, registry, dirset,
        spec(per_direction_max=2, reverse_total_retention=0.0),
        scores=scores,
    )
    # ties at 0.9 break by ascending id; the 0.2 and 0.5 candidates lose
    assert [pe.id for pe in out] == ["m00001#en2fr", "m00002#en2fr"]


def test_missing_score_raises(registry, dirset):
    recs = records(2, ["en", "fr"])
    with pytest.raises(MissingScore):
        build_sft_mixture(recs, registry, dirset, spec(), scores={"m00000#en2fr": 0.5})


def test_below_min_warns(registry, dirset):
    recs = records(3, ["en", "fr"])
    out, report = build_sft_mixture(
        recs, registry, dirset, spec(per_direction_min=10, per_direction_max=20)
    )
    assert any("en->fr" in w for w in report.warnings)


def test_pmp_requires_aux_sentence_in_record(registry, dirset):
    # en<->bg has auxiliary ru, but the records carry no ru sentence, so a
    # forced PMP coin (share 1.0) still falls back to STP.
    recs = records(20, ["en", "bg"])
    out, _ = build_sft_mixture(
        recs, registry, dirset,
        spec(forward_pmp_share=1.0, reverse_total_retention=1.0,
             reverse_pmp_share_of_retained=1.0),
    )
    assert out and all(pe.format is PromptFormat.STP for pe in out)


def test_pmp_rendered_when_aux_present(registry, dirset):
    recs = records(20, ["en", "bg", "ru"])
    out, report = build_sft_mixture(
        recs, registry, dirset,
        spec(forward_pmp_share=1.0, reverse_total_retention=0.0),
    )
    en2bg = [pe for pe in out if pe.id.endswith("#en2bg")]
    assert len(en2bg) == 20
    assert all(pe.format is PromptFormat.PMP and pe.aux_lang == "ru" for pe in en2bg)
    # en<->ru has no auxiliary: always STP even with share 1.0
    en2ru = [pe for pe in out if pe.id.endswith("#en2ru")]
    assert en2ru and all(pe.format is PromptFormat.STP for pe in en2ru)
    rep = report.per_direction["en->bg"]
    assert (rep.stp, rep.pmp) == (0, 20)


def test_center_pair_is_reverse_and_stp_only(registry, dirset):
    recs = records(30, ["en", "zh"])
    out, report = build_sft_mixture(
        recs, registry, dirset,
        spec(reverse_total_retention=0.5, reverse_pmp_share_of_retained=1.0),
    )
    assert all(pe.format is PromptFormat.STP for pe in out)
    rep = report.per_direction["en->zh"]
    assert 0 < rep.retained < rep.selected  # retention applied to en->zh


def test_format_coin_independent_of_retention_coin():
    # Same id, different hash domains. Values frozen from the definition.
    assert unit_uniform(42, "ex1#fr2en") == pytest.approx(0.9966048412184664, abs=0)
    assert unit_uniform(42, "fmt:ex1#fr2en") == pytest.approx(0.6011327057212676, abs=0)


def test_emission_grouped_by_direction_and_sorted_by_id(registry, dirset):
    recs = records(6, ["en", "fr", "de"])
    out, _ = build_sft_mixture(
        recs, registry, dirset, spec(reverse_total_retention=1.0)
    )
    suffix_order = []
    for pe in out:
        sfx = pe.id.split("#", 1)[1]
        if sfx not in suffix_order:
            suffix_order.append(sfx)
    dirset_order = [d.suffix for d in dirset.directions if d.suffix in set(suffix_order)]
    assert suffix_order == dirset_order
    for sfx in suffix_order:
        ids = [pe.id for pe in out if pe.id.endswith("#" + sfx)]
        assert ids == sorted(ids)


def test_deterministic_across_runs(registry, dirset):
    recs = records(40, ["en", "zh", "bg", "ru"])
    out1, rep1 = build_sft_mixture(recs, registry, dirset, spec())
    out2, rep2 = build_sft_mixture(recs, registry, dirset, spec())
    assert [pe.to_json() for pe in out1] == [pe.to_json() for pe in out2]
    assert rep1.as_dict() == rep2.as_dict()


def test_report_arithmetic(registry, dirset):
    recs = records(25, ["en", "ja"])
    out, report = build_sft_mixture(
        recs, registry, dirset, spec(per_direction_max=10)
    )
    rep_f = report.per_direction["en->ja"]
    rep_r = report.per_direction["ja->en"]
    assert rep_f.candidates == rep_r.candidates == 25
    assert rep_f.selected == rep_r.selected == 10
    assert rep_f.retained == 10  # forward: no retention
    assert rep_r.retained <= 10
    assert rep_f.stp + rep_f.pmp == rep_f.retained
    assert report.emitted == len(out)
    d = report.as_dict()
    assert d["emitted"] == len(out)


def test_custom_registry_mixture(tmp_path):
    import json

    from mmtkit.registry import load_registry

    rows = [
        {"code": c, "name": c.upper(), "script": "L", "family": "F", "tier": "High"}
        for c in ("en", "zh", "aa", "bb")
    ]
    langs = tmp_path / "langs.jsonl"
    langs.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")
    aux = tmp_path / "aux.jsonl"
    aux.write_text(json.dumps({"lang": "aa", "aux": "bb"}) + "\n", encoding="utf-8")
    reg = load_registry(str(langs), str(aux))
    ds = enumerate_directions(reg)
    recs = records(10, ["en", "aa", "bb"])
    out, _ = build_sft_mixture(
        recs, reg, ds, spec(forward_pmp_share=1.0, reverse_total_retention=0.0)
    )
    en2aa = [pe for pe in out if pe.id.endswith("#en2aa")]
    assert en2aa and all(pe.aux_lang == "bb" for pe in en2aa)
