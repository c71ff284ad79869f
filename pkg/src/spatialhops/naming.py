"""Entity naming schemes and nonce-word synthesis."""

from __future__ import annotations

import csv
import gzip
import io
import itertools
import random
import re
import string
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

SCHEMES = ("symbolic", "male", "female", "city", "nonce")

# Entity names must be one or more capitalised tokens; the oracle parser
# relies on this to find name boundaries inside templates.
NAME_RE = re.compile(r"[A-Z][A-Za-z0-9\-]*(?: [A-Z][A-Za-z0-9\-]*)*")

DATA = resources.files("spatialhops") / "data"


class PoolExhausted(ValueError):
    pass


class GenerationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class NamePool:
    scheme: str
    entries: tuple[str, ...]
    source: str = ""

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown naming scheme {self.scheme!r}")
        if len(set(self.entries)) != len(self.entries):
            raise ValueError(f"{self.scheme} pool has duplicate entries")
        bad = [e for e in self.entries if not NAME_RE.fullmatch(e)]
        if bad:
            raise ValueError(f"names not usable as entity labels: {bad[:5]}")

    def __len__(self) -> int:
        return len(self.entries)


def symbolic_pool(max_letters: int = 2) -> NamePool:
    """Labels "X" + 1..max_letters uppercase letters: XA, ..., XZ, XAA, ..."""
    entries = []
    for n in range(1, max_letters + 1):
        entries.extend("X" + "".join(t) for t in itertools.product(string.ascii_uppercase, repeat=n))
    return NamePool("symbolic", tuple(entries), source=f"generated:X+1..{max_letters}")


def _clean(name: str) -> str:
    return " ".join(name.split())


def load_name_csv(path, scheme: str) -> NamePool:
    """One name per row in the first column; header rows and unusable names are skipped."""
    if not hasattr(path, "read_text"):
        path = Path(path)
    text = path.read_text(encoding="utf-8")
    seen: dict[str, None] = {}
    for row in csv.reader(io.StringIO(text)):
        if not row:
            continue
        name = _clean(row[0])
        if name and NAME_RE.fullmatch(name):
            seen.setdefault(name, None)
    return NamePool(scheme, tuple(seen), source=str(path))


def builtin_pool(scheme: str) -> NamePool:
    if scheme == "symbolic":
        return symbolic_pool()
    files = {"male": "male.csv", "female": "female.csv", "city": "cities.csv"}
    if scheme not in files:
        raise ValueError(f"scheme {scheme!r} has no built-in file pool")
    return load_name_csv(DATA / "names" / files[scheme], scheme)


def assign_names(node_count: int, pool: NamePool, rng: random.Random) -> dict[int, str]:
    """Injective map from node ids 0..node_count-1 to pool entries."""
    if node_count > len(pool):
        if pool.scheme == "symbolic":
            pool = symbolic_pool(3)
        if node_count > len(pool):
            raise PoolExhausted(f"{pool.scheme} pool has {len(pool)} names, {node_count} needed")
    return dict(enumerate(rng.sample(pool.entries, node_count)))


def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# -- nonce words ----------------------------------------------------------

_WORD_RE = re.compile(r"[a-z]+")


def read_words(path) -> list[str]:
    """Newline-delimited word list, optionally gzipped."""
    path = Path(str(path))
    raw = path.read_bytes()
    if path.suffix == ".gz":
        raw = gzip.decompress(raw)
    return [w.strip() for w in raw.decode("utf-8").splitlines() if w.strip()]


@dataclass
class NonceSpec:
    corpus: object = None
    dictionary: object = None
    length: int = 7
    min_distance: int = 2
    max_attempts: int = 200_000

    def __post_init__(self):
        if self.length < 3:
            raise ValueError("nonce length must be at least 3")
        if self.min_distance < 1:
            raise ValueError("min_distance must be at least 1")
        if self.corpus is None:
            self.corpus = DATA / "lexicon" / "corpus_en.txt"
        if self.dictionary is None:
            self.dictionary = DATA / "lexicon" / "dictionary_en.txt.gz"


class TrigramModel:
    """Character trigram chain over corpus tokens with start/end sentinels."""

    START, END = "^", "$"

    def __init__(self, tokens: Iterable[str]):
        counts: dict[str, Counter] = defaultdict(Counter)
        for tok in tokens:
            padded = self.START * 2 + tok + self.END
            for i in range(len(padded) - 2):
                counts[padded[i:i + 2]][padded[i + 2]] += 1
        if not counts:
            raise ValueError("empty corpus")
        self._table = {ctx: (list(c), list(itertools.accumulate(c.values()))) for ctx, c in counts.items()}

    @classmethod
    def from_text(cls, text: str) -> "TrigramModel":
        return cls(_WORD_RE.findall(text.lower()))

    def sample(self, rng: random.Random, max_len: int = 30) -> str:
        ctx = self.START * 2
        out = []
        while len(out) < max_len:
            chars, cum = self._table[ctx]
            c = rng.choices(chars, cum_weights=cum)[0]
            if c == self.END:
                break
            out.append(c)
            ctx = ctx[1] + c
        return "".join(out)


class DistanceFilter:
    """Accepts words at Levenshtein distance >= min_distance from every dictionary word."""

    def __init__(self, dictionary: Iterable[str], min_distance: int = 2):
        self.min_distance = min_distance
        self.words = {w.lower() for w in dictionary}
        self.alphabet = sorted({c for w in self.words for c in w})
        self._by_len: dict[int, list[str]] = defaultdict(list)
        for w in self.words:
            self._by_len[len(w)].append(w)

    def _edits1(self, word: str) -> set[str]:
        splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
        out = {a + b[1:] for a, b in splits if b}
        out |= {a + c + b[1:] for a, b in splits if b for c in self.alphabet}
        out |= {a + c + b for a, b in splits for c in self.alphabet}
        return out

    def nearest_distance_below(self, word: str, bound: int) -> bool:
        """True when some dictionary word lies at distance < bound."""
        if bound <= 0:
            return False
        if word in self.words:
            return True
        if bound == 1:
            return False
        if bound == 2:
            return not self.words.isdisjoint(self._edits1(word))
        for n in range(len(word) - bound + 1, len(word) + bound):
            for w in self._by_len.get(n, ()):
                if levenshtein(word, w) < bound:
                    return True
        return False

    def passes(self, word: str) -> bool:
        return not self.nearest_distance_below(word.lower(), self.min_distance)


def gen_nonce_words(n: int, spec: NonceSpec, rng: random.Random, exclude: Iterable[str] = (),
                    model: TrigramModel | None = None, filt: DistanceFilter | None = None) -> list[str]:
    """n distinct lowercase words of spec.length letters, far from every dictionary word."""
    if n == 0:
        return []
    if model is None:
        model = TrigramModel.from_text(Path(str(spec.corpus)).read_text(encoding="utf-8"))
    if filt is None:
        filt = DistanceFilter(read_words(spec.dictionary), spec.min_distance)
    excluded = {e.lower() for e in exclude}
    out: list[str] = []
    seen: set[str] = set()
    for _ in range(spec.max_attempts):
        w = model.sample(rng, max_len=spec.length + 1)
        if len(w) != spec.length or w in seen or w in excluded:
            continue
        seen.add(w)
        if filt.passes(w):
            out.append(w)
            if len(out) == n:
                return out
    raise GenerationExhausted(f"only {len(out)} of {n} nonce words after {spec.max_attempts} draws")


def nonce_pool(size: int, spec: NonceSpec, rng: random.Random, exclude: Sequence[str] = ()) -> NamePool:
    """A pool of capitalised nonce names, disjoint from `exclude` (e.g. direction tokens)."""
    words = gen_nonce_words(size, spec, rng, exclude=exclude)
    return NamePool("nonce", tuple(w.capitalize() for w in words), source=f"nonce:{spec.length}/{spec.min_distance}")
