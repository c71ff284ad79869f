"""Deterministic translation of pack-rendered text back into facts, and ASP emission."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources

from .directions import Direction
from .lingo import RenderedStory, Template, TemplatePack
from .walks import Fact

ASP_DIR = resources.files("spatialhops") / "data" / "asp"
_NUMBER_PREFIX = re.compile(r"^\d+ ")


class NoMatch(ValueError):
    def __init__(self, text: str, line: int | None = None):
        self.text = text
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}no template matches {text!r}")


class AmbiguousMatch(ValueError):
    pass


@dataclass
class ParsedProgram:
    facts: list[Fact]
    query: tuple[str, str]


def parse_sentence(text: str, pack: TemplatePack) -> Fact:
    text = text.strip()
    found = set()
    for key, regex, rel, a_is_subject in pack.parse_index:
        if key not in text:
            continue
        m = regex.fullmatch(text)
        if m is not None:
            a, b = m.group("A"), m.group("B")
            found.add((rel, a, b) if a_is_subject else (rel, b, a))
    if not found:
        raise NoMatch(text)
    if len(found) > 1:
        raise AmbiguousMatch(f"{text!r} matches {sorted(map(str, found))}")
    rel, s, o = found.pop()
    return Fact(rel, s, o)


def parse_question(text: str, pack: TemplatePack) -> tuple[str, str]:
    text = text.strip()
    for q in pack.question_templates:
        got = Template(q, Direction.OVERLAP).matcher.match(text)
        if got is not None:
            return got
    raise NoMatch(text)


def strip_number(line: str) -> str:
    return _NUMBER_PREFIX.sub("", line.strip(), count=1)


def parse_story(story: RenderedStory | list[str], pack: TemplatePack, question: str | None = None) -> ParsedProgram:
    """Facts in story order plus the query; accepts numbered or bare lines."""
    if isinstance(story, RenderedStory):
        lines, question = story.sentences, story.question
    else:
        lines = story
    facts = []
    for i, line in enumerate(lines, 1):
        try:
            facts.append(parse_sentence(strip_number(line), pack))
        except NoMatch as e:
            raise NoMatch(e.text, i) from None
    if question is None:
        raise ValueError("a question is required")
    return ParsedProgram(facts, parse_question(question, pack))


def knowledge_module() -> str:
    return (ASP_DIR / "knowledge.lp").read_text(encoding="utf-8")


def answer_rules() -> str:
    return (ASP_DIR / "answer.lp").read_text(encoding="utf-8")


def _q(name: str) -> str:
    return '"' + str(name).replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_asp(p: ParsedProgram, include_knowledge: bool = False) -> str:
    lines = [f"{Direction(f.relation).value}({_q(f.subject)}, {_q(f.object)})." for f in p.facts]
    lines.append(f"query({_q(p.query[0])}, {_q(p.query[1])}).")
    out = "\n".join(lines) + "\n"
    if include_knowledge:
        out += "\n" + knowledge_module() + "\n" + answer_rules()
    return out
