"""Prompt templates, byte-exact loss spans, and the bitext format parser."""
from __future__ import annotations

import io

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mmtkit.errors import EmptySource, NoAuxiliaryDefined, RecordParseError
from mmtkit.prompts import (
    PROMPT_SCHEMA,
    PromptFormat,
    PromptedExample,
    parse_cpt_bilingual,
    read_prompted,
    render_cpt_bilingual,
    render_cpt_mono,
    render_pmp,
    render_pmp_prompt,
    render_stp,
    render_stp_prompt,
    write_prompted,
)

plain_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc")), min_size=1, max_size=40
)
# For parser round trips: text that cannot collide with the "[TAG] " separator.
bracket_free = st.text(
    alphabet=st.characters(blacklist_categories=("Cs", "Cc"), blacklist_characters="[]"),
    min_size=1,
    max_size=40,
)


def span_bytes(pe: PromptedExample) -> bytes:
    return pe.text.encode("utf-8")[pe.loss_start : pe.loss_end]


def test_stp_golden(registry, mk_example):
    ex = mk_example("g1#en2fr", "en", "fr", "Hello.", "Bonjour.")
    pe = render_stp(ex, registry)
    assert pe.text == (
        "Translate the following text from English to French.\n"
        "English: Hello.\n"
        "French: Bonjour."
    )
    assert pe.format is PromptFormat.STP
    assert pe.aux_lang is None
    assert pe.loss_slice() == "Bonjour."
    assert pe.prompt_schema == PROMPT_SCHEMA


def test_pmp_golden(registry, mk_example):
    ex = mk_example("g2#en2bg", "en", "bg", "water", "voda")
    pe = render_pmp(ex, "voda-ru", "ru", registry)
    assert pe.text == (
        "Translate the following text from English to Bulgarian.\n"
        "English: water\n"
        "Russian: voda-ru\n"
        "Bulgarian: voda"
    )
    assert pe.format is PromptFormat.PMP
    assert pe.aux_lang == "ru"
    assert pe.loss_slice() == "voda"


def test_pmp_zh_centric_uses_english_aux(registry, mk_example):
    ex = mk_example("g3#zh2sw", "zh", "sw", "水", "maji")
    pe = render_pmp(ex, "water", "en", registry)
    assert "English: water\n" in pe.text
    assert pe.text.endswith("Swahili: maji")


def test_pmp_errors(registry, mk_example):
    no_aux = mk_example("g4#en2fr", "en", "fr", "a", "b")
    with pytest.raises(NoAuxiliaryDefined):
        render_pmp(no_aux, "x", "de", registry)
    center = mk_example("g5#en2zh", "en", "zh", "a", "b")
    with pytest.raises(NoAuxiliaryDefined):
        render_pmp(center, "x", "fr", registry)
    ex = mk_example("g6#en2bg", "en", "bg", "a", "b")
    with pytest.raises(ValueError):
        render_pmp(ex, "x", "de", registry)  # wrong auxiliary language
    with pytest.raises(ValueError):
        render_pmp(ex, "", "ru", registry)  # empty auxiliary text


def test_stp_empty_source(registry, mk_example):
    ex = mk_example("g7#en2fr", "en", "fr", "", "b")
    with pytest.raises(EmptySource):
        render_stp(ex, registry)


def test_multibyte_spans(registry, mk_example):
    ex = mk_example("g8#en2zh?", "zh", "fr", "你好🙂", "café")
    pe = render_stp(ex, registry)
    assert span_bytes(pe) == "café".encode("utf-8")
    assert pe.loss_slice() == "café"


def test_cpt_bilingual_golden(mk_example):
    ex = mk_example("g9#en2fr", "en", "fr", "Hello.", "Bonjour.")
    pe = render_cpt_bilingual(ex)
    assert pe.text == "[EN2FR] Hello. [FR] Bonjour."
    assert pe.loss_slice() == "Bonjour."
    full = render_cpt_bilingual(ex, loss="full")
    assert full.loss_start == 0
    assert full.loss_slice() == full.text
    with pytest.raises(ValueError):
        render_cpt_bilingual(ex, loss="prefix")


def test_cpt_bilingual_parse_roundtrip(mk_example):
    ex = mk_example("g10#mn_cn2en", "mn_cn", "en", "text a", "text b")
    pe = render_cpt_bilingual(ex)
    assert parse_cpt_bilingual(pe.text) == ("mn_cn", "en", "text a", "text b")


def test_cpt_parse_errors():
    with pytest.raises(RecordParseError):
        parse_cpt_bilingual("no header here")
    with pytest.raises(RecordParseError):
        parse_cpt_bilingual("[EN2FR] missing separator")


def test_cpt_mono():
    pe = render_cpt_mono("m1", "sw", "habari ya dunia")
    assert pe.format is PromptFormat.CPT_MONO
    assert pe.loss_start == 0
    assert pe.loss_slice() == "habari ya dunia"
    assert pe.src_lang == pe.tgt_lang == "sw"
    with pytest.raises(EmptySource):
        render_cpt_mono("m2", "sw", "")


def test_inference_prompts_are_training_prefixes(registry, mk_example):
    ex = mk_example("q1#en2fr", "en", "fr", "Good day", "Bonjour")
    training = render_stp(ex, registry)
    prompt = render_stp_prompt("en", "fr", "Good day", registry, "q1#en2fr")
    assert training.text == prompt.text + "Bonjour"
    assert prompt.loss_start == prompt.loss_end == len(prompt.text.encode("utf-8"))
    assert prompt.loss_slice() == ""

    ex2 = mk_example("q2#en2bg", "en", "bg", "water", "voda")
    training2 = render_pmp(ex2, "voda-ru", "ru", registry)
    prompt2 = render_pmp_prompt("en", "bg", "water", "ru", "voda-ru", registry, "q2#en2bg")
    assert training2.text == prompt2.text + "voda"
    assert prompt2.loss_start == prompt2.loss_end == len(prompt2.text.encode("utf-8"))


def test_pmp_prompt_errors(registry):
    with pytest.raises(NoAuxiliaryDefined):
        render_pmp_prompt("en", "fr", "x", "de", "y", registry, "q")
    with pytest.raises(ValueError):
        render_pmp_prompt("en", "bg", "x", "de", "y", registry, "q")


def test_prompted_example_validation():
    with pytest.raises(ValueError):
        PromptedExample(
            text="ab", loss_start=1, loss_end=5, format=PromptFormat.STP,
            src_lang="en", tgt_lang="fr", aux_lang=None, id="x",
        )
    with pytest.raises(ValueError):
        PromptedExample(
            text="ab", loss_start=2, loss_end=1, format=PromptFormat.STP,
            src_lang="en", tgt_lang="fr", aux_lang=None, id="x",
        )
    with pytest.raises(ValueError):  # aux_lang only on PMP
        PromptedExample(
            text="ab", loss_start=0, loss_end=1, format=PromptFormat.STP,
            src_lang="en", tgt_lang="fr", aux_lang="ru", id="x",
        )


def test_prompted_io_roundtrip(registry, mk_example):
    pes = [
        render_stp(mk_example("io1#en2fr", "en", "fr", "a", "b"), registry),
        render_cpt_mono("io2", "sw", "jambo"),
    ]
    buf = io.StringIO()
    assert write_prompted(pes, buf) == 2
    back = list(read_prompted(io.StringIO(buf.getvalue())))
    assert back == pes
    obj_keys = list(pes[0].to_json())
    assert obj_keys == [
        "text", "loss_start", "loss_end", "format", "src_lang",
        "tgt_lang", "aux_lang", "id", "prompt_schema",
    ]


@given(src=plain_text, tgt=plain_text)
def test_stp_span_property(registry, src, tgt):
    from mmtkit.records import DirectionalExample

    ex = DirectionalExample(id="p#en2ja", src_lang="en", tgt_lang="ja", src=src, tgt=tgt)
    pe = render_stp(ex, registry)
    assert span_bytes(pe) == tgt.encode("utf-8")


@given(src=plain_text, aux=plain_text, tgt=plain_text)
def test_pmp_span_property(registry, src, aux, tgt):
    from mmtkit.records import DirectionalExample

    ex = DirectionalExample(id="p#en2bg", src_lang="en", tgt_lang="bg", src=src, tgt=tgt)
    pe = render_pmp(ex, aux, "ru", registry)
    assert span_bytes(pe) == tgt.encode("utf-8")


@given(src=bracket_free, tgt=bracket_free)
def test_cpt_roundtrip_property(src, tgt):
    from mmtkit.records import DirectionalExample

    ex = DirectionalExample(id="p#fr2zh", src_lang="fr", tgt_lang="zh", src=src, tgt=tgt)
    pe = render_cpt_bilingual(ex)
    assert span_bytes(pe) == tgt.encode("utf-8")
    parsed = parse_cpt_bilingual(pe.text)
    assert parsed == ("fr", "zh", src, tgt)
