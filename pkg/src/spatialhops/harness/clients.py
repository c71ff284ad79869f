"""Chat clients: a live chat-completions endpoint plus offline stand-ins."""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from ..lingo import shipped_pack
from ..oracle import NoMatch, emit_asp, parse_story
from ..solver import Answer, solve


@dataclass(frozen=True)
class ChatRequest:
    key: str  # "<instance id>#<repeat>"
    messages: list[dict] = field(hash=False)
    language: str = "english"
    mode: str = "five_shot_default"


class ChatClient(Protocol):
    name: str

    def complete(self, request: ChatRequest) -> str: ...


@dataclass
class EndpointConfig:
    base_url: str = ""
    model: str = ""
    max_tokens: int | None = 512
    api_key_env: str = "CHAT_API_KEY"
    timeout: float = 120.0
    extra: dict = field(default_factory=dict)  # passed through untouched (temperature, top_p, ...)

    @classmethod
    def from_env(cls, **overrides) -> "EndpointConfig":
        cfg = cls(base_url=os.environ.get("CHAT_BASE_URL", "https://api.openai.com/v1"),
                  model=os.environ.get("CHAT_MODEL", ""))
        for k, v in overrides.items():
            if v is not None:
                setattr(cfg, k, v)
        return cfg


class LiveClient:
    """POST {base_url}/chat/completions with the standard messages payload."""

    def __init__(self, cfg: EndpointConfig, transport: httpx.BaseTransport | None = None):
        if not cfg.model:
            raise ValueError("a model name is required (set CHAT_MODEL or pass --model)")
        self.cfg = cfg
        self.name = cfg.model
        headers = {}
        key = os.environ.get(cfg.api_key_env)
        if key:
            headers["Authorization"] = f"Bearer {key}"
        self._http = httpx.Client(base_url=cfg.base_url.rstrip("/"), headers=headers,
                                  timeout=cfg.timeout, transport=transport)

    def payload(self, request: ChatRequest) -> dict:
        body = {"model": self.cfg.model, "messages": request.messages, **self.cfg.extra}
        if self.cfg.max_tokens is not None:
            body["max_tokens"] = self.cfg.max_tokens
        return body

    def complete(self, request: ChatRequest) -> str:
        resp = self._http.post("/chat/completions", json=self.payload(request))
        resp.raise_for_status()
        return resp.json()["choices"][0]["message"]["content"] or ""

    def close(self):
        self._http.close()


def _split_target(text: str, header: str) -> tuple[list[str], str]:
    body = text[text.rfind(header + "\n") + len(header) + 1:] if header + "\n" in text else text
    lines = [ln.strip() for ln in body.split("\n") if ln.strip()]
    return lines[:-1], lines[-1]


class MockOracleClient:
    """Answers from the final user message alone, by parsing it and solving."""

    name = "mock-oracle"

    def complete(self, request: ChatRequest) -> str:
        pack = shipped_pack(request.language)
        text = next(m["content"] for m in reversed(request.messages) if m["role"] == "user")
        story, question = _split_target(text, pack.story_header)
        try:
            program = parse_story(story, pack, question=question)
        except (NoMatch, ValueError):
            return "I cannot determine the relation."
        if request.mode == "asp_translation":
            return emit_asp(program)
        outcome = solve(program.facts, program.query)
        if not isinstance(outcome, Answer):
            return "The information in the story is insufficient."
        return f"{pack.answer_marker} {pack.label_of(outcome.direction)}"


class MockUniformClient:
    """A uniformly random answer label, fixed by a hash of the request key."""

    name = "mock-uniform"

    def __init__(self, salt: str = ""):
        self.salt = salt

    def complete(self, request: ChatRequest) -> str:
        pack = shipped_pack(request.language)
        labels = list(pack.answer_lexicon.values())
        h = int.from_bytes(hashlib.sha256(f"{self.salt}{request.key}".encode()).digest()[:8], "big")
        return f"{pack.answer_marker} {labels[h % len(labels)]}"


class ReplayClient:
    """Returns completions recorded in a transcript JSONL file, keyed by request key."""

    def __init__(self, path, name: str | None = None):
        self.records = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    self.records[rec["key"]] = rec.get("completion")
        self.name = name or f"replay:{Path(path).stem}"

    def complete(self, request: ChatRequest) -> str:
        if request.key not in self.records:
            raise KeyError(f"no recorded completion for {request.key}")
        completion = self.records[request.key]
        if completion is None:
            raise RuntimeError(f"recorded failure for {request.key}")
        return completion


CLIENTS = ("live", "mock-oracle", "mock-uniform", "replay")


def make_client(kind: str, transcript: str | None = None, **endpoint) -> ChatClient:
    if kind == "mock-oracle":
        return MockOracleClient()
    if kind == "mock-uniform":
        return MockUniformClient()
    if kind == "replay":
        if not transcript:
            raise ValueError("replay needs a transcript file")
        return ReplayClient(transcript)
    if kind == "live":
        return LiveClient(EndpointConfig.from_env(**endpoint))
    raise ValueError(f"unknown client {kind!r}; choose from {CLIENTS}")


_FACT_LINE = re.compile(r'^\s*([A-Za-z_]+)\s*\(\s*"?\s*([^",()]+?)\s*"?\s*,\s*"?\s*([^",()]+?)\s*"?\s*\)\s*\.?\s*$')


def parse_fact_lines(text: str) -> tuple[list[tuple[str, str, str]], tuple[str, str] | None, int]:
    """Lenient reader for `rel("A","B").` lines; returns (facts, query, skipped line count)."""
    facts, query, skipped = [], None, 0
    for line in text.replace('\\"', '"').splitlines():
        line = line.strip().strip("`")
        if not line:
            continue
        m = _FACT_LINE.match(line)
        if not m:
            skipped += 1
            continue
        rel, a, b = m.groups()
        if rel == "query":
            query = (a, b)
        else:
            facts.append((a, rel, b))
    return facts, query, skipped
