"""Answer extraction and per-k aggregation."""

from __future__ import annotations

import statistics
from collections import defaultdict
from dataclasses import dataclass, field

from ..lingo import TemplatePack

OTHER = "OTHER"
GUESS_RATE = 1 / 8


def extract_answer(completion: str | None, pack: TemplatePack) -> str:
    """Canonical direction name after the last answer marker, or OTHER. Never raises."""
    if not completion:
        return OTHER
    try:
        folded = completion.casefold()
        at = folded.rfind(pack.answer_marker.casefold())
        if at < 0:
            return OTHER
        rest = folded[at + len(pack.answer_marker):].lstrip(" \t\r\n*_`\"'")
        # longest label first so "lower-left" is not read as "left"
        for d, label in sorted(pack.answer_lexicon.items(), key=lambda kv: -len(kv[1])):
            lab = label.casefold()
            if rest.startswith(lab):
                nxt = rest[len(lab):len(lab) + 1]
                if not nxt or not (nxt.isalnum() or nxt == "-"):
                    return d.value
        return OTHER
    except Exception:  # extraction must be total
        return OTHER


@dataclass
class EvalRecord:
    instance_id: str
    k: int
    repeat: int
    completion: str | None
    extracted: str
    gold: str
    correct: bool
    latency: float = 0.0
    error: str | None = None

    @property
    def key(self) -> str:
        return f"{self.instance_id}#{self.repeat}"


@dataclass
class ScoreRow:
    k: int
    mean: float
    std: float | None
    n: int
    other_rate: float
    failures: int


@dataclass
class ScoreTable:
    model: str
    rows: list[ScoreRow] = field(default_factory=list)
    guess_rate: float = GUESS_RATE

    @classmethod
    def from_records(cls, model: str, records, exclude_failures: bool = False) -> "ScoreTable":
        """Mean over all records at each k; std is the population std of the per-repeat accuracies."""
        by_k: dict[int, dict[int, list[EvalRecord]]] = defaultdict(lambda: defaultdict(list))
        for r in records:
            if exclude_failures and r.error is not None:
                continue
            by_k[r.k][r.repeat].append(r)
        rows = []
        for k in sorted(by_k):
            reps = by_k[k]
            accs = [sum(r.correct for r in rs) / len(rs) for _, rs in sorted(reps.items())]
            flat = [r for rs in reps.values() for r in rs]
            rows.append(ScoreRow(
                k=k,
                mean=sum(r.correct for r in flat) / len(flat),
                std=statistics.pstdev(accs) if len(accs) > 1 else None,
                n=len(flat),
                other_rate=sum(r.extracted == OTHER for r in flat) / len(flat),
                failures=sum(r.error is not None for r in flat),
            ))
        return cls(model, rows)

    def by_k(self) -> dict[int, ScoreRow]:
        return {r.k: r for r in self.rows}
