"""Run instances through a chat client and score the completions."""

from __future__ import annotations

import json
import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from ..directions import UnknownTerm, normalize
from ..lingo import shipped_pack
from ..solver import Answer, SolveOutcome, solve
from .clients import ChatClient, ChatRequest, parse_fact_lines
from .prompts import PromptSpec, build_prompt
from .scoring import OTHER, EvalRecord, ScoreTable, extract_answer

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    repeats: int = 3
    workers: int = 4
    retries: int = 3
    backoff: float = 1.0  # seconds, doubled per retry
    exclude_failures: bool = False


def asp_outcome(completion: str) -> SolveOutcome | None:
    """Solve the facts recovered from an ASP-style completion; None when no query is found."""
    triples, query, _ = parse_fact_lines(completion)
    facts = []
    for s, rel, o in triples:
        try:
            facts.append((s, normalize(rel), o))
        except UnknownTerm:
            continue  # malformed relation: the line is dropped
    if query is None:
        return None
    return solve(facts, query)


def _extract(completion: str | None, spec: PromptSpec) -> str:
    if spec.mode == "asp_translation":
        if not completion:
            return OTHER
        outcome = asp_outcome(completion)
        return outcome.direction.value if isinstance(outcome, Answer) else OTHER
    return extract_answer(completion, shipped_pack(spec.language))


def _call(client: ChatClient, request: ChatRequest, cfg: RunConfig) -> tuple[str | None, str | None, float]:
    delay = cfg.backoff
    err = None
    start = time.perf_counter()
    for attempt in range(cfg.retries + 1):
        try:
            return client.complete(request), None, time.perf_counter() - start
        except Exception as e:  # transport or client failure
            err = f"{type(e).__name__}: {e}"
            if attempt < cfg.retries:
                log.warning("retrying %s after %s", request.key, err)
                time.sleep(delay)
                delay *= 2
    return None, err, time.perf_counter() - start


def evaluate_one(instance, repeat: int, spec: PromptSpec, client: ChatClient, cfg: RunConfig) -> tuple[EvalRecord, list]:
    pack = shipped_pack(spec.language)
    messages = build_prompt(instance, spec)
    request = ChatRequest(f"{instance.id}#{repeat}", messages, spec.language, spec.mode)
    completion, err, latency = _call(client, request, cfg)
    extracted = _extract(completion, spec)
    gold = pack.direction_for_label(instance.answer).value
    rec = EvalRecord(instance.id, instance.k, repeat, completion, extracted, gold,
                     extracted == gold, latency, err)
    return rec, messages


def run_eval(dataset, spec: PromptSpec, client: ChatClient, cfg: RunConfig | None = None,
             transcript_path=None) -> tuple[ScoreTable, list[EvalRecord]]:
    """One independent session per (instance, repeat); records come back in dataset order."""
    cfg = cfg or RunConfig()
    jobs = [(inst, r) for inst in dataset for r in range(cfg.repeats)]
    lock = threading.Lock()
    fh = open(transcript_path, "w", encoding="utf-8") if transcript_path else None

    def work(job):
        rec, messages = evaluate_one(job[0], job[1], spec, client, cfg)
        if fh is not None:
            line = json.dumps({"key": rec.key, "model": client.name, "mode": spec.mode,
                               "language": spec.language, "messages": messages, **asdict(rec)},
                              ensure_ascii=False)
            with lock:
                fh.write(line + "\n")
        return rec

    try:
        if cfg.workers <= 1:
            records = [work(j) for j in jobs]
        else:
            with ThreadPoolExecutor(cfg.workers) as pool:
                records = list(pool.map(work, jobs))
    finally:
        if fh is not None:
            fh.close()
    return ScoreTable.from_records(client.name, records, cfg.exclude_failures), records


def run_llm_asp(instance, client: ChatClient, repeat: int = 0) -> SolveOutcome | None:
    """Ask the client for ASP facts, then solve them; None if the completion has no query."""
    spec = PromptSpec("asp_translation", "english")
    request = ChatRequest(f"{instance.id}#{repeat}", build_prompt(instance, spec), spec.language, spec.mode)
    return asp_outcome(client.complete(request))
