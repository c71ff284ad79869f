"""Coordinate-propagation solver equivalent to the logic knowledge module.

Every stated relation is a unit displacement. Coordinates are propagated
breadth-first from an anchor in each connected component; an entity whose
coordinate would leave the [-BOUND, BOUND] box is left unlocated, as the
bounded search domain of the logic program does.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Hashable, Iterable

from .directions import Direction, direction_of, normalize, offset_of

BOUND = 100


@dataclass(frozen=True)
class Answer:
    direction: Direction


@dataclass(frozen=True)
class InsufficientInfo:
    pass


@dataclass(frozen=True)
class Contradiction:
    edge: tuple


SolveOutcome = Answer | InsufficientInfo | Contradiction


def _triples(facts: Iterable) -> list[tuple[Hashable, Direction, Hashable]]:
    out = []
    for f in facts:
        if isinstance(f, tuple):
            s, rel, o = f
        else:
            s, rel, o = f.subject, f.relation, f.object
        out.append((s, normalize(rel), o))
    return out


def locate(facts: Iterable, anchors: Iterable = (), bound: int = BOUND):
    """Assign coordinates; returns (coords, component of each node, first conflicting edge or None).

    Consistency is checked on unbounded coordinates. Only nodes reachable from
    their component's root through in-box nodes are returned as located.
    """
    edges = _triples(facts)
    adj: dict = defaultdict(list)
    for e in edges:
        s, rel, o = e
        dx, dy = offset_of(rel)
        adj[o].append((s, dx, dy))
        adj[s].append((o, -dx, -dy))
    full: dict = {}
    component: dict = {}
    located: dict = {}
    order = [a for a in anchors if a in adj] + list(adj)
    for root in order:
        if root in full:
            continue
        full[root] = located[root] = (0, 0)
        component[root] = root
        queue = deque([root])
        while queue:
            node = queue.popleft()
            x, y = full[node]
            for nxt, dx, dy in adj[node]:
                if nxt in full:
                    continue
                full[nxt] = (x + dx, y + dy)
                component[nxt] = root
                queue.append(nxt)
        queue = deque([root])
        while queue:
            node = queue.popleft()
            for nxt, _, _ in adj[node]:
                nx, ny = full[nxt]
                if nxt not in located and abs(nx) <= bound and abs(ny) <= bound:
                    located[nxt] = (nx, ny)
                    queue.append(nxt)
    for s, rel, o in edges:
        (xs, ys), (xo, yo) = full[s], full[o]
        if (xs - xo, ys - yo) != offset_of(rel):
            return located, component, (s, rel, o)
    return located, component, None


def solve(facts: Iterable, query: tuple) -> SolveOutcome:
    subject, obj = query
    coords, component, conflict = locate(facts, anchors=[obj])
    if conflict is not None:
        return Contradiction(conflict)
    if subject not in coords or obj not in coords or component[subject] != component[obj]:
        return InsufficientInfo()
    (xs, ys), (xo, yo) = coords[subject], coords[obj]
    return Answer(direction_of((xs - xo, ys - yo)))


def verify_instance(instance, pack=None) -> bool:
    """True iff parsing the rendered story and solving reproduces the stored answer."""
    from .oracle import parse_story
    from .lingo import shipped_pack

    if pack is None:
        pack = shipped_pack(instance.meta["language"])
    program = parse_story(instance.story, pack, question=instance.question)
    try:
        expected = pack.direction_for_label(instance.answer)
    except KeyError:
        return False
    return solve(program.facts, program.query) == Answer(expected)
