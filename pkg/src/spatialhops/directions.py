"""Direction algebra on the unit grid.

Canonical relation names, their unit offsets, inversion, the synonym
closure used to normalise surface relation terms, and the signum rule that
classifies an arbitrary displacement.
"""

from __future__ import annotations

from collections import defaultdict
from enum import Enum
from typing import NamedTuple


class Direction(str, Enum):
    TOP = "top"
    DOWN = "down"
    LEFT = "left"
    RIGHT = "right"
    TOP_LEFT = "top_left"
    TOP_RIGHT = "top_right"
    DOWN_LEFT = "down_left"
    DOWN_RIGHT = "down_right"
    OVERLAP = "overlap"

    def __str__(self) -> str:
        return self.value


class Offset(NamedTuple):
    dx: int
    dy: int

    def __neg__(self) -> "Offset":
        return Offset(-self.dx, -self.dy)


class UnknownTerm(KeyError):
    """A relation term outside the synonym closure."""


OFFSETS: dict[Direction, Offset] = {
    Direction.OVERLAP: Offset(0, 0),
    Direction.TOP: Offset(0, 1),
    Direction.DOWN: Offset(0, -1),
    Direction.LEFT: Offset(-1, 0),
    Direction.RIGHT: Offset(1, 0),
    Direction.TOP_LEFT: Offset(-1, 1),
    Direction.TOP_RIGHT: Offset(1, 1),
    Direction.DOWN_LEFT: Offset(-1, -1),
    Direction.DOWN_RIGHT: Offset(1, -1),
}

_BY_OFFSET: dict[Offset, Direction] = {off: d for d, off in OFFSETS.items()}

# The eight legal answers; overlap is internal only.
ANSWER_DIRECTIONS: tuple[Direction, ...] = tuple(d for d in Direction if d is not Direction.OVERLAP)

# Undirected synonym edges of the logic knowledge base, plus the `up` alias
# that its translation rules map onto `top`.
_SYNONYM_EDGES = [
    ("north", "northOf"),
    ("south", "southOf"),
    ("west", "westOf"),
    ("east", "eastOf"),
    ("top", "northOf"),
    ("down", "southOf"),
    ("left", "westOf"),
    ("right", "eastOf"),
    ("up", "top"),
]


def _synonym_closure() -> dict[str, Direction]:
    graph: dict[str, set[str]] = defaultdict(set)
    for a, b in _SYNONYM_EDGES:
        graph[a].add(b)
        graph[b].add(a)
    canonical = {d.value: d for d in Direction}
    table = dict(canonical)
    for start in list(graph):
        seen = {start}
        stack = [start]
        while stack:
            for nxt in graph[stack.pop()] - seen:
                seen.add(nxt)
                stack.append(nxt)
        canon = [t for t in seen if t in canonical]
        assert len(canon) == 1, f"synonym class {sorted(seen)} is not anchored to one direction"
        for term in seen:
            table[term] = canonical[canon[0]]
    return table


SYNONYMS: dict[str, Direction] = _synonym_closure()


def offset_of(d: Direction) -> Offset:
    return OFFSETS[Direction(d)]


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def direction_of(delta: tuple[int, int]) -> Direction:
    """Classify a displacement by the component-wise sign of (dx, dy)."""
    dx, dy = delta
    return _BY_OFFSET[Offset(_sign(dx), _sign(dy))]


def invert(d: Direction) -> Direction:
    return _BY_OFFSET[-OFFSETS[Direction(d)]]


def normalize(term: str | Direction) -> Direction:
    if isinstance(term, Direction):
        return term
    try:
        return SYNONYMS[term]
    except KeyError:
        raise UnknownTerm(term) from None
