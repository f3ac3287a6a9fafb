"""Exact max-flow / min-cut on small capacitated undirected graphs.

Capacities are rationals; they are scaled to integers by their common
denominator so the augmenting-path loop runs on Python ints.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


@dataclass
class CapGraph:
    n: int
    edges: list[tuple[int, int, Fraction]] = field(default_factory=list)

    def __post_init__(self):
        for a, b, c in self.edges:
            if a == b:
                raise ValueError(f"self-loop at {a}")
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise ValueError(f"edge ({a},{b}) out of range")
            if c <= 0:
                raise ValueError(f"capacity must be positive, got {c} on ({a},{b})")

    def cut_value(self, side) -> Fraction:
        side = set(side)
        return sum((Fraction(c) for a, b, c in self.edges if (a in side) != (b in side)), Fraction(0))


def _integer_capacities(g: CapGraph) -> tuple[list[dict[int, int]], int]:
    den = 1
    for _, _, c in g.edges:
        den = math.lcm(den, Fraction(c).denominator)
    cap: list[dict[int, int]] = [dict() for _ in range(g.n)]
    for a, b, c in g.edges:
        w = int(Fraction(c) * den)
        cap[a][b] = cap[a].get(b, 0) + w
        cap[b][a] = cap[b].get(a, 0) + w
    return cap, den


def _max_flow(cap: list[dict[int, int]], a: int, b: int) -> tuple[int, set[int]]:
    """Edmonds-Karp on a symmetric integer capacity table; returns (value, reachable set)."""
    residual = [dict(row) for row in cap]
    flow = 0
    while True:
        parent = {a: None}
        queue = deque([a])
        while queue and b not in parent:
            x = queue.popleft()
            for y, r in residual[x].items():
                if r > 0 and y not in parent:
                    parent[y] = x
                    queue.append(y)
        if b not in parent:
            return flow, set(parent)
        bottleneck = None
        y = b
        while parent[y] is not None:
            x = parent[y]
            r = residual[x][y]
            bottleneck = r if bottleneck is None or r < bottleneck else bottleneck
            y = x
        y = b
        while parent[y] is not None:
            x = parent[y]
            residual[x][y] -= bottleneck
            residual[y][x] = residual[y].get(x, 0) + bottleneck
            y = x
        flow += bottleneck


def min_st_cut(g: CapGraph, a: int, b: int) -> tuple[Fraction, frozenset[int]]:
    """Minimum a-b cut value and the inclusion-minimal side containing ``a``."""
    if a == b:
        raise ValueError("min_st_cut needs two distinct terminals")
    cap, den = _integer_capacities(g)
    value, side = _max_flow(cap, a, b)
    crossing = sum(w for x in side for y, w in cap[x].items() if y not in side)
    assert crossing == value, "max-flow value differs from the residual cut capacity"
    return Fraction(value, den), frozenset(side)


def global_min_cut(g: CapGraph) -> tuple[Fraction, frozenset[int]]:
    """Minimum nontrivial cut via n-1 max-flows from vertex 0.

    The returned side is the one *not* containing vertex 0 (complement of the
    residual-reachable set of the best flow); ties go to the lowest sink.
    """
    if g.n < 2:
        raise ValueError("global_min_cut needs at least 2 vertices")
    cap, den = _integer_capacities(g)
    best = None
    for v in range(1, g.n):
        value, side = _max_flow(cap, 0, v)
        if best is None or value < best[0]:
            best = (value, side)
    value, side = best
    return Fraction(value, den), frozenset(range(g.n)) - side


def min_cuts_from_root(g: CapGraph, root: int, sinks: Sequence[int]) -> list[tuple[Fraction, frozenset[int]]]:
    """One max-flow per sink; each entry is (value, root side). Shares the scaling work."""
    cap, den = _integer_capacities(g)
    out = []
    for v in sinks:
        value, side = _max_flow(cap, root, v)
        out.append((Fraction(value, den), frozenset(side)))
    return out


def components(n: int, edges) -> list[list[int]]:
    """Connected components of an undirected graph, each sorted, ordered by min vertex."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, *_ in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())
