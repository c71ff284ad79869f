import random
import re

import pytest
import yaml
from hypothesis import given, strategies as st

from spatialhops.directions import ANSWER_DIRECTIONS, Direction
from spatialhops.lingo import (
    PACK_DIR, SHIPPED_PACKS, AmbiguousTemplates, IncompleteLexicon, MissingTemplate, SchemaError, Template,
    check_unambiguous, load_pack, parse_pack, render_fact, render_question, render_story, shipped_pack,
)
from spatialhops.walks import Fact, generate_walk, make_skeleton

EN = shipped_pack("english")


def base_doc():
    return yaml.safe_load((PACK_DIR / "english.yaml").read_text(encoding="utf-8"))


@pytest.mark.parametrize("lang", SHIPPED_PACKS)
def test_shipped_packs_load(lang):
    pack = shipped_pack(lang)
    assert set(pack.answer_lexicon) == set(ANSWER_DIRECTIONS)
    assert set(pack.fact_templates) == set(ANSWER_DIRECTIONS)
    assert pack.digest and pack.question_templates
    check_unambiguous(pack)


def test_english_template_counts():
    assert sum(len(v) for v in EN.fact_templates.values()) >= 150
    assert min(len(v) for v in EN.fact_templates.values()) >= 9


@pytest.mark.parametrize("pattern,rel,s,o,text", [
    ("{A} is over {B}.", Direction.TOP, "XAB", "XCD", "XAB is over XCD."),
    ("{B} is over there with {A} above.", Direction.TOP, "XAT", "XAV", "XAV is over there with XAT above."),
    ("{A} is at {B}’s 9 o’clock.", Direction.LEFT, "XAV", "XAA", "XAV is at XAA’s 9 o’clock."),
])
def test_fill_examples(pattern, rel, s, o, text):
    assert Template(pattern, rel).fill(s, o) == text


def test_templates_present_in_english():
    patterns = {t.pattern: t.relation for t in EN.all_templates()}
    assert patterns["{A} is at {B}’s 9 o’clock."] == Direction.LEFT
    assert patterns["{A} is below {B} at 4 o’clock."] == Direction.DOWN_RIGHT
    assert patterns["If {B} is the center of a clock face, {A} is located between 10 and 11."] == Direction.TOP_LEFT


CLOCK = {12: "top", 1: "top_right", 2: "top_right", 3: "right", 4: "down_right", 5: "down_right",
         6: "down", 7: "down_left", 8: "down_left", 9: "left", 10: "top_left", 11: "top_left"}


def test_clock_hours_agree_with_relation():
    clock = [t for t in EN.all_templates() if t.style == "clock"]
    assert len(clock) >= 30
    for t in clock:
        hours = {int(h) for h in re.findall(r"\d+", t.pattern) if h != "00"}
        assert hours and all(CLOCK[h] == t.relation.value for h in hours), t.pattern


def test_styles_cover_cardinal():
    assert {t.style for t in EN.all_templates()} == {"plain", "clock", "cardinal"}


def test_render_story_numbering_and_no_braces():
    rng = random.Random(0)
    s = make_skeleton(generate_walk(4, rng), rng)
    names = {i: f"XA{chr(65 + i)}" for i in range(5)}
    for lang in SHIPPED_PACKS:
        story = render_story(s, names, shipped_pack(lang), random.Random(1))
        assert len(story.lines) == 4
        assert [l.split(" ", 1)[0] for l in story.lines] == ["1", "2", "3", "4"]
        assert not any("{" in l or "}" in l for l in story.lines + [story.question])


def test_render_question():
    q = render_question(("XAX", "XAY"), None, EN, random.Random(0))
    assert q == "What is the relation of the agent XAX to the agent XAY?"


def test_render_fact_uses_only_relation_templates():
    f = Fact(Direction.TOP, "XU", "XJX")
    outs = {render_fact(f, None, EN, random.Random(i)) for i in range(200)}
    allowed = {t.fill("XU", "XJX") for t in EN.fact_templates[Direction.TOP]}
    assert outs <= allowed and len(outs) > 3


def test_missing_template():
    pack = shipped_pack("english")
    saved = pack.fact_templates.pop(Direction.TOP)
    try:
        with pytest.raises(MissingTemplate):
            render_fact(Fact(Direction.TOP, "XA", "XB"), None, pack, random.Random(0))
    finally:
        pack.fact_templates[Direction.TOP] = saved


@given(st.integers(0, 2**32))
def test_render_deterministic(seed):
    rng = random.Random(seed)
    s = make_skeleton(generate_walk(3, rng), rng)
    names = {i: f"X{chr(65 + i)}" for i in range(4)}
    assert render_story(s, names, EN, random.Random(seed)) == render_story(s, names, EN, random.Random(seed))


def test_incomplete_lexicon():
    doc = base_doc()
    del doc["answer_lexicon"]["top_left"]
    with pytest.raises(IncompleteLexicon):
        parse_pack(doc)


def test_duplicate_labels():
    doc = base_doc()
    doc["answer_lexicon"]["top_left"] = "above"
    with pytest.raises(IncompleteLexicon):
        parse_pack(doc)


def test_ambiguous_templates():
    doc = base_doc()
    doc["fact_templates"]["down"].append("{A} is over {B}.")
    with pytest.raises(AmbiguousTemplates):
        parse_pack(doc)


def test_ambiguous_by_swapped_roles():
    doc = base_doc()
    doc["fact_templates"]["down"].append({"pattern": "{A} is over {B}!", "subject": "B"})
    doc["fact_templates"]["top"].append("{A} is over {B}!")
    with pytest.raises(AmbiguousTemplates):
        parse_pack(doc)


@pytest.mark.parametrize("bad", ["{A} is over {C}.", "{A} is over.", "{A} {{B}} x", "{A} is {B} {D}."])
def test_bad_placeholders(bad):
    doc = base_doc()
    doc["fact_templates"]["top"].append(bad)
    with pytest.raises(SchemaError):
        parse_pack(doc)


def test_repeated_placeholder_allowed():
    t = Template("{A} and {B} are vertical and {A} is above {B}.", Direction.TOP)
    assert t.parse("XA and XB are vertical and XA is above XB.") == (Direction.TOP, "XA", "XB")
    assert t.parse("XA and XB are vertical and XC is above XB.") is None


def test_overlap_not_a_story_relation():
    doc = base_doc()
    doc["fact_templates"]["overlap"] = ["{A} is on {B}."]
    with pytest.raises(SchemaError):
        parse_pack(doc)


def test_missing_field_and_bad_yaml(tmp_path):
    doc = base_doc()
    del doc["question_templates"]
    with pytest.raises(SchemaError):
        parse_pack(doc)
    p = tmp_path / "bad.yaml"
    p.write_text("language: [unclosed", encoding="utf-8")
    with pytest.raises(SchemaError):
        load_pack(p)


def test_unknown_pack():
    with pytest.raises(KeyError):
        shipped_pack("klingon")


def test_nonce_pack_expansion():
    pack = shipped_pack("nonce-direction")
    assert len(pack.fact_templates[Direction.TOP]) == 4
    assert len(pack.fact_templates[Direction.TOP_LEFT]) == 8
    assert any(t.pattern == "{A} is to the eliam unclust of {B}." for t in pack.fact_templates[Direction.TOP_LEFT])
