"""Prompt assets and chat message construction for each evaluation mode."""

from __future__ import annotations

import copy
import hashlib
import json
import random
import re
from collections import defaultdict, deque
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from ..lingo import TemplatePack, shipped_pack
from ..oracle import parse_story, strip_number

PROMPT_DIR = resources.files("spatialhops") / "data" / "prompts"
MODES = ("zero_shot", "five_shot_default", "five_shot_familiarization", "asp_translation", "five_shot_ordered")
ICL_KS = (1, 3, 5, 7, 10)

# Symbolic labels used inside the fixed example stories.
_SYMBOL = re.compile(r"\bX[A-Z0-9]{1,3}\b")


class MissingAsset(LookupError):
    pass


@dataclass(frozen=True)
class PromptSpec:
    mode: str = "five_shot_default"
    language: str = "english"
    naming: str = "symbolic"  # names substituted into the worked examples

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; choose from {MODES}")


def available_assets() -> list[tuple[str, str]]:
    """(mode, language) pairs that build_prompt can serve."""
    out = []
    for entry in PROMPT_DIR.iterdir():
        name = entry.name
        if name.endswith(".json"):
            mode, language = name[:-5].split(".", 1)
            out.append((mode, language))
            if mode == "five_shot_default":
                out.append(("five_shot_ordered", language))
    return sorted(out)


def chain_order(story: list[str], question: str, pack: TemplatePack) -> list[str]:
    """Reorder sentences to follow the chain from the queried object to the queried subject."""
    lines = [strip_number(s) for s in story]
    prog = parse_story(lines, pack, question=question)
    adj = defaultdict(list)
    for i, f in enumerate(prog.facts):
        adj[f.subject].append((f.object, i))
        adj[f.object].append((f.subject, i))
    subject, obj = prog.query
    prev: dict = {obj: None}
    queue = deque([obj])
    while queue:
        node = queue.popleft()
        for nxt, i in adj[node]:
            if nxt not in prev:
                prev[nxt] = (node, i)
                queue.append(nxt)
    path = []
    node = subject
    while prev.get(node) is not None:
        node, i = prev[node]
        path.append(i)
    path.reverse()
    rest = [i for i in range(len(lines)) if i not in set(path)]
    return [lines[i] for i in path + rest]


@lru_cache(maxsize=None)
def _load_raw(mode: str, language: str) -> dict:
    if mode == "five_shot_ordered":
        base = copy.deepcopy(_load_raw("five_shot_default", language))
        pack = shipped_pack(language)
        for ex in base["examples"]:
            ex["story"] = chain_order(ex["story"], ex["question"], pack)
        base["mode"] = mode
        base["provenance"] = "Derived from five_shot_default by ordering each example along its query chain."
        return base
    path = PROMPT_DIR / f"{mode}.{language}.json"
    if not path.is_file():
        raise MissingAsset(f"no prompt asset for mode {mode!r} in language {language!r}")
    return json.loads(path.read_text(encoding="utf-8"))


def load_asset(mode: str, language: str) -> dict:
    return copy.deepcopy(_load_raw(mode, language))


@lru_cache(maxsize=None)
def _example_names(naming: str, mode: str, language: str) -> dict[str, str]:
    from ..dataset import BuildConfig, Builder

    asset = _load_raw(mode, language)
    text = json.dumps(asset["examples"], ensure_ascii=False)
    symbols = list(dict.fromkeys(_SYMBOL.findall(text)))
    pool = Builder(BuildConfig(naming=naming)).pool
    seed = int.from_bytes(hashlib.sha256(f"icl:{naming}:{mode}:{language}".encode()).digest()[:8], "big")
    return dict(zip(symbols, random.Random(seed).sample(pool.entries, len(symbols))))


def rename_examples(asset: dict, naming: str) -> dict:
    """Substitute the symbolic labels of the worked examples with names from another scheme."""
    if naming == "symbolic":
        return asset
    mapping = _example_names(naming, asset["mode"], asset["language"])
    sub = lambda s: _SYMBOL.sub(lambda m: mapping.get(m.group(0), m.group(0)), s)

    def walk(obj):
        if isinstance(obj, str):
            return sub(obj)
        if isinstance(obj, list):
            return [walk(o) for o in obj]
        if isinstance(obj, dict):
            return {k: (walk(v) if k in ("story", "question", "equivalent", "answer") else v) for k, v in obj.items()}
        return obj

    out = dict(asset)
    out["examples"] = [walk(ex) for ex in asset["examples"]]
    return out


def numbered(story: list[str]) -> str:
    return "\n".join(f"{i} {strip_number(s)}" for i, s in enumerate(story, 1))


def story_block(story: list[str], question: str, header: str) -> str:
    return f"{header}\n{numbered(story)}\n\n{question}"


def _user(text: str) -> dict:
    return {"role": "user", "content": text}


def _assistant(text: str) -> dict:
    return {"role": "assistant", "content": text}


def build_prompt(instance, spec: PromptSpec) -> list[dict]:
    """Chat messages for one instance; each call is an independent session."""
    asset = rename_examples(load_asset(spec.mode, spec.language), spec.naming)
    pack = shipped_pack(spec.language)
    header, marker = pack.story_header, pack.answer_marker
    instr = asset["instruction"]

    if spec.mode == "zero_shot":
        return [_user(instr + story_block(instance.story, instance.question, header))]

    if spec.mode == "asp_translation":
        ex = asset["examples"][0]
        first = instr + f"{header}\n" + "\n".join(ex["story"]) + "\n" + ex["question"]
        target = f"{header}\n\n{numbered(instance.story)}\n\n{instance.question}"
        return [_user(first), _assistant(ex["answer"]), _user(target)]

    messages = []
    for i, ex in enumerate(asset["examples"]):
        text = story_block(ex["story"], ex["question"], header)
        if "equivalent" in ex:
            eq = ex["equivalent"]
            text += f"\n\n{asset['equivalence']}\n{numbered(eq['story'])}\n\n{eq['question']}"
        messages.append(_user(instr + text if i == 0 else text))
        messages.append(_assistant(f"{marker} {ex['answer']}"))
    messages.append(_user(story_block(instance.story, instance.question, header)))
    return messages
