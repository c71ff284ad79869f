"""Template packs and natural-language realisation of facts and questions."""

from __future__ import annotations

import hashlib
import random
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Mapping

import yaml

from .directions import ANSWER_DIRECTIONS, Direction
from .naming import NAME_RE
from .walks import Fact, Skeleton, render_order_key

STYLES = ("plain", "clock", "cardinal")
PACK_DIR = resources.files("spatialhops") / "data" / "packs"
SHIPPED_PACKS = ("english", "hindi", "swedish", "nonce-direction")

_SLOT_RE = re.compile(r"\{([^{}]*)\}")
_NAME = NAME_RE.pattern


class SchemaError(ValueError):
    pass


class AmbiguousTemplates(ValueError):
    pass


class IncompleteLexicon(ValueError):
    pass


class MissingTemplate(KeyError):
    pass


class Matcher:
    """Literal segments around two capture slots; repeated slots must repeat the same name."""

    def __init__(self, pattern: str):
        parts = []
        seen = set()
        pos = 0
        literals = []
        for m in _SLOT_RE.finditer(pattern):
            lit = pattern[pos:m.start()]
            literals.append(lit)
            parts.append(re.escape(lit))
            slot = m.group(1)
            parts.append(f"(?P={slot})" if slot in seen else f"(?P<{slot}>{_NAME})")
            seen.add(slot)
            pos = m.end()
        literals.append(pattern[pos:])
        parts.append(re.escape(pattern[pos:]))
        self.regex = re.compile("".join(parts))
        self.key = max(literals, key=len)

    def match(self, text: str) -> tuple[str, str] | None:
        if self.key not in text:
            return None
        m = self.regex.fullmatch(text)
        return (m.group("A"), m.group("B")) if m else None


@dataclass(frozen=True)
class Template:
    pattern: str
    relation: Direction
    subject_slot: str = "A"
    style: str = "plain"

    def __post_init__(self):
        slots = _SLOT_RE.findall(self.pattern)
        if set(slots) != {"A", "B"} or "{" in _SLOT_RE.sub("", self.pattern) or "}" in _SLOT_RE.sub("", self.pattern):
            raise SchemaError(f"template must use exactly the placeholders {{A}} and {{B}}: {self.pattern!r}")
        if self.subject_slot not in ("A", "B"):
            raise SchemaError(f"subject slot must be A or B: {self.pattern!r}")
        if self.style not in STYLES:
            raise SchemaError(f"unknown style {self.style!r}")

    @property
    def matcher(self) -> Matcher:
        return _matcher(self.pattern)

    def fill(self, subject: str, obj: str) -> str:
        a, b = (subject, obj) if self.subject_slot == "A" else (obj, subject)
        return self.pattern.replace("{A}", a).replace("{B}", b)

    def parse(self, text: str) -> tuple[Direction, str, str] | None:
        got = self.matcher.match(text)
        if got is None:
            return None
        a, b = got
        return (self.relation, a, b) if self.subject_slot == "A" else (self.relation, b, a)


@lru_cache(maxsize=None)
def _matcher(pattern: str) -> Matcher:
    return Matcher(pattern)


@dataclass
class TemplatePack:
    language: str
    fact_templates: dict[Direction, list[Template]]
    question_templates: list[str]
    answer_lexicon: dict[Direction, str]
    direction_lexicon: dict[str, object] = field(default_factory=dict)
    answer_marker: str = "### Answer:"
    story_header: str = "Story:"
    version: str = "0"
    partial: bool = False
    digest: str = ""

    def all_templates(self) -> list[Template]:
        return [t for ts in self.fact_templates.values() for t in ts]

    @cached_property
    def parse_index(self) -> list[tuple[str, re.Pattern, Direction, bool]]:
        """(literal key, regex, relation, subject-is-A) per template, for fast scanning."""
        return [(t.matcher.key, t.matcher.regex, t.relation, t.subject_slot == "A") for t in self.all_templates()]

    def label_of(self, d: Direction) -> str:
        return self.answer_lexicon[Direction(d)]

    def direction_for_label(self, label: str) -> Direction:
        for d, lab in self.answer_lexicon.items():
            if lab.casefold() == label.casefold():
                return d
        raise KeyError(label)


@dataclass
class RenderedStory:
    sentences: list[str]
    question: str
    language: str

    @property
    def lines(self) -> list[str]:
        return [f"{i} {s}" for i, s in enumerate(self.sentences, 1)]


def _template_entries(relation: Direction, raw) -> list[Template]:
    out = []
    for item in raw:
        if isinstance(item, str):
            out.append(Template(item, relation))
        elif isinstance(item, dict) and "pattern" in item:
            out.append(Template(item["pattern"], relation, item.get("subject", "A"), item.get("style", "plain")))
        else:
            raise SchemaError(f"bad template entry for {relation.value}: {item!r}")
    return out


def _expand_nonce(doc: dict) -> dict[str, list]:
    tokens = doc["tokens"]
    vertical = {Direction.TOP: tokens["up"], Direction.DOWN: tokens["down"]}
    horizontal = {Direction.LEFT: tokens["left"], Direction.RIGHT: tokens["right"]}
    phrases: dict[str, list[str]] = {d.value: list(v) for d, v in {**vertical, **horizontal}.items()}
    for (v, vt), (h, ht) in ((a, b) for a in vertical.items() for b in horizontal.items()):
        name = f"{v.value}_{h.value}"
        phrases[name] = [f"{x} {y}" for x in vt for y in ht]
    flat = [t for v in tokens.values() for t in v]
    if len(set(flat)) != len(flat):
        raise SchemaError("nonce direction tokens must be distinct")
    return {d: [f.replace("{dir}", p) for p in ps for f in doc["frames"]] for d, ps in phrases.items()}


def parse_pack(doc: dict, source: str = "<pack>") -> TemplatePack:
    try:
        language = doc["language"]
        lexicon_raw = doc["answer_lexicon"]
        questions = list(doc["question_templates"])
        templates_raw = _expand_nonce(doc) if "tokens" in doc else doc["fact_templates"]
    except (KeyError, TypeError) as e:
        raise SchemaError(f"{source}: missing field {e}") from None
    try:
        answer_lexicon = {Direction(k): str(v) for k, v in lexicon_raw.items()}
        fact_templates = {Direction(k): _template_entries(Direction(k), v) for k, v in templates_raw.items()}
    except ValueError as e:
        if isinstance(e, SchemaError):
            raise
        raise SchemaError(f"{source}: {e}") from None
    missing = [d.value for d in ANSWER_DIRECTIONS if d not in answer_lexicon]
    extra = [d.value for d in answer_lexicon if d not in ANSWER_DIRECTIONS]
    if missing or extra:
        raise IncompleteLexicon(f"{source}: answer lexicon missing {missing}, unexpected {extra}")
    if len(set(l.casefold() for l in answer_lexicon.values())) != len(answer_lexicon):
        raise IncompleteLexicon(f"{source}: answer labels must be distinct")
    if Direction.OVERLAP in fact_templates:
        raise SchemaError(f"{source}: overlap is not a story relation")
    if not questions:
        raise SchemaError(f"{source}: no question templates")
    for q in questions:
        Template(q, Direction.OVERLAP)  # placeholder check only
    pack = TemplatePack(
        language=language,
        fact_templates=fact_templates,
        question_templates=questions,
        answer_lexicon=answer_lexicon,
        direction_lexicon=dict(doc.get("direction_lexicon") or doc.get("tokens") or {}),
        answer_marker=doc.get("answer_marker", "### Answer:"),
        story_header=doc.get("story_header", "Story:"),
        version=str(doc.get("version", "0")),
        partial=bool(doc.get("partial", False)),
    )
    check_unambiguous(pack)
    return pack


# Probe names used to detect templates that can parse each other's output.
_PROBES = [("XAB", "XCD"), ("Milton Keynes", "Stoke-on-Trent")]


def check_unambiguous(pack: TemplatePack) -> None:
    templates = pack.all_templates()
    patterns: dict[str, Template] = {}
    for t in templates:
        if t.pattern in patterns:
            raise AmbiguousTemplates(f"pattern appears twice: {t.pattern!r}")
        patterns[t.pattern] = t
    for t in templates:
        for s, o in _PROBES:
            text = t.fill(s, o)
            expected = (t.relation, s, o)
            for other in templates:
                got = other.parse(text)
                if got is not None and got != expected:
                    raise AmbiguousTemplates(f"{other.pattern!r} also matches {text!r}")


def load_pack(path) -> TemplatePack:
    path = Path(str(path))
    raw = path.read_bytes()
    try:
        doc = yaml.safe_load(raw.decode("utf-8"))
    except yaml.YAMLError as e:
        raise SchemaError(f"{path}: {e}") from None
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: expected a mapping")
    pack = parse_pack(doc, str(path))
    pack.digest = hashlib.sha256(raw).hexdigest()[:16]
    return pack


@lru_cache(maxsize=None)
def shipped_pack(language: str) -> TemplatePack:
    if language not in SHIPPED_PACKS:
        raise KeyError(f"no shipped pack for {language!r}; choose from {SHIPPED_PACKS}")
    return load_pack(PACK_DIR / f"{language.replace('-', '_')}.yaml")


def _name(names: Mapping | None, node) -> str:
    return str(node) if names is None else names[node]


def render_fact(f: Fact, names: Mapping | None, pack: TemplatePack, rng: random.Random) -> str:
    choices = pack.fact_templates.get(Direction(f.relation))
    if not choices:
        raise MissingTemplate(f"{pack.language} pack has no template for {f.relation}")
    return rng.choice(choices).fill(_name(names, f.subject), _name(names, f.object))


def render_question(query: tuple, names: Mapping | None, pack: TemplatePack, rng: random.Random) -> str:
    q = rng.choice(pack.question_templates)
    s, o = query
    return q.replace("{A}", _name(names, s)).replace("{B}", _name(names, o))


def render_story(s: Skeleton, names: Mapping, pack: TemplatePack, rng: random.Random) -> RenderedStory:
    """Question first, then facts in generation order, so paired variants share wording."""
    question = render_question(s.query, names, pack, rng)
    text = {f: render_fact(f, names, pack, rng) for f in sorted(s.facts, key=render_order_key)}
    return RenderedStory([text[f] for f in s.facts], question, pack.language)
