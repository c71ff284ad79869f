"""Instance skeletons: self-avoiding walks, facts, distractors and story order.

Node ids are integers. A walk of depth k uses ids 0..k in walk order;
distractor nodes get fresh ids k+1, k+2, ...
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from typing import Hashable

from .directions import ANSWER_DIRECTIONS, Direction, direction_of, invert, offset_of

DEFAULT_MAX_K = 100
WALK_ATTEMPTS = 1000


class GenerationExhausted(RuntimeError):
    pass


class PlacementExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class Fact:
    """`relation(subject, object)`: pos(subject) - pos(object) == offset_of(relation)."""

    relation: Direction
    subject: Hashable
    object: Hashable
    on_path: bool = True

    def triple(self) -> tuple:
        return (self.subject, self.relation, self.object)


@dataclass
class Walk:
    positions: list[tuple[int, int]]
    steps: list[Direction]

    @property
    def k(self) -> int:
        return len(self.steps)

    @property
    def nodes(self) -> list[int]:
        return list(range(len(self.positions)))


@dataclass
class Skeleton:
    k: int
    facts: list[Fact]
    query: tuple[int, int]
    answer: Direction
    positions: dict[int, tuple[int, int]]
    noisy: bool = False
    shuffled: bool = False
    seed: int | None = None
    distractors: int = 0

    @property
    def variant(self) -> str:
        return f"{'noisy' if self.noisy else 'clean'}-{'shuffled' if self.shuffled else 'ordered'}"

    def path_facts(self) -> list[Fact]:
        return [f for f in self.facts if f.on_path]


def generate_walk(k: int, rng: random.Random, max_k: int = DEFAULT_MAX_K,
                  attempts: int = WALK_ATTEMPTS) -> Walk:
    """Self-avoiding walk of k unit steps over the 8 compass directions, from the origin."""
    if not 1 <= k <= max_k:
        raise ValueError(f"k must be in [1, {max_k}], got {k}")
    for _ in range(attempts):
        positions = [(0, 0)]
        visited = {(0, 0)}
        steps: list[Direction] = []
        while len(steps) < k:
            x, y = positions[-1]
            options = []
            for d in ANSWER_DIRECTIONS:
                dx, dy = offset_of(d)
                if (x + dx, y + dy) not in visited:
                    options.append(d)
            if not options:
                break
            d = rng.choice(options)
            dx, dy = offset_of(d)
            positions.append((x + dx, y + dy))
            visited.add(positions[-1])
            steps.append(d)
        else:
            return Walk(positions, steps)
    raise GenerationExhausted(f"no self-avoiding walk of length {k} in {attempts} attempts")


def make_skeleton(walk: Walk, rng: random.Random, orient_facts: bool = True,
                  randomize_query: bool = False) -> Skeleton:
    """One fact per walk edge; the query links the walk's two endpoints."""
    facts = []
    for i, step in enumerate(walk.steps):
        if orient_facts and rng.random() < 0.5:
            facts.append(Fact(invert(step), i, i + 1))
        else:
            facts.append(Fact(step, i + 1, i))
    positions = dict(enumerate(walk.positions))
    end, start = walk.k, 0
    if randomize_query and rng.random() < 0.5:
        end, start = start, end
    (xs, ys), (xo, yo) = positions[end], positions[start]
    return Skeleton(k=walk.k, facts=facts, query=(end, start),
                    answer=direction_of((xs - xo, ys - yo)), positions=positions)


def default_distractor_count(k: int) -> int:
    return max(1, math.ceil(k / 2))


def inject_noise(s: Skeleton, m: int, rng: random.Random, chain_depth: int = 1,
                 orient_facts: bool = True) -> Skeleton:
    """Attach m consistent distractor facts, each joining a fresh node to an existing one.

    A distractor is anchored on a node whose distance from the path is below
    `chain_depth` (1 means path nodes only). Every node occupies its own cell,
    so the fact graph stays a tree and the query path is unchanged. Each new
    fact is placed right after the first fact that mentions its anchor.
    """
    if m == 0:
        return s
    positions = dict(s.positions)
    occupied = set(positions.values())
    facts = list(s.facts)
    depth = {n: 0 for n in positions}
    next_id = max(positions) + 1
    for _ in range(m):
        anchors = [n for n, d in depth.items() if d < chain_depth]
        rng.shuffle(anchors)
        for anchor in anchors:
            ax, ay = positions[anchor]
            free = [d for d in ANSWER_DIRECTIONS
                    if (ax + offset_of(d)[0], ay + offset_of(d)[1]) not in occupied]
            if free:
                break
        else:
            raise PlacementExhausted("no free cell next to any eligible anchor")
        d = rng.choice(free)
        node = next_id
        next_id += 1
        positions[node] = (ax + offset_of(d)[0], ay + offset_of(d)[1])
        occupied.add(positions[node])
        depth[node] = depth[anchor] + 1
        if orient_facts and rng.random() < 0.5:
            fact = Fact(invert(d), anchor, node, on_path=False)
        else:
            fact = Fact(d, node, anchor, on_path=False)
        at = next(i for i, f in enumerate(facts) if anchor in (f.subject, f.object))
        facts.insert(at + 1, fact)
    return replace(s, facts=facts, positions=positions, noisy=True, distractors=s.distractors + m)


@dataclass(frozen=True)
class ShufflePolicy:
    """`ordered`, `full`, or `partial` with a fraction p of transpositions."""

    kind: str = "full"
    p: float = 0.5

    def __post_init__(self):
        if self.kind not in ("ordered", "full", "partial"):
            raise ValueError(f"unknown shuffle policy {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("partial shuffle fraction must be in [0, 1]")

    @classmethod
    def parse(cls, text: str) -> "ShufflePolicy":
        # "full", "ordered", "partial" or "partial:0.3"
        kind, _, p = text.partition(":")
        return cls(kind, float(p)) if p else cls(kind)


def order_story(s: Skeleton, policy: ShufflePolicy | str, rng: random.Random) -> Skeleton:
    if isinstance(policy, str):
        policy = ShufflePolicy.parse(policy)
    facts = list(s.facts)
    n = len(facts)
    if policy.kind == "ordered":
        return s
    if policy.kind == "full":
        rng.shuffle(facts)
    elif n > 1:
        for _ in range(math.ceil(policy.p * n)):
            i, j = rng.sample(range(n), 2)
            facts[i], facts[j] = facts[j], facts[i]
    return replace(s, facts=facts, shuffled=True)


def render_order_key(f: Fact) -> tuple:
    """Generation order independent of story order: path edges first, then distractors."""
    if f.on_path:
        return (0, min(f.subject, f.object))
    return (1, max(f.subject, f.object))
