"""Tree, parity correction and shortcutting: turning a Held-Karp point into a path."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import networkx as nx

from .flow import components
from .instance import Edge, EdgeVector, MetricInstance, edge


class ParityError(ValueError):
    pass


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[Edge, ...]

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(sorted(edge(*e) for e in self.edges)))

    def length(self, inst: MetricInstance) -> Fraction:
        return sum((inst.lengths[a][b] for a, b in self.edges), Fraction(0))

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def odd_vertices(self) -> frozenset[int]:
        deg = Counter(w for e in self.edges for w in e)
        return frozenset(w for w, d in deg.items() if d % 2)


@dataclass(frozen=True)
class ParityTarget:
    q: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "q", frozenset(self.q))
        if len(self.q) % 2:
            raise ParityError(f"parity target must have even size, got {sorted(self.q)}")


def _kruskal(n: int, candidates: Iterable[Edge], inst: MetricInstance) -> list[Edge]:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    chosen = []
    for a, b in sorted(candidates, key=lambda e: (inst.lengths[e[0]][e[1]], e[0], e[1])):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
            chosen.append((a, b))
            if len(chosen) == n - 1:
                break
    return chosen


def mst_on_support(inst: MetricInstance, y: EdgeVector) -> SpanningTree:
    """Shortest spanning tree using only edges with y_e > 0; ties broken by (ℓ, u, v)."""
    support = y.support()
    if len(components(inst.n, support)) > 1:
        raise ParityError("support is disconnected, so the vector is not a Held-Karp point")
    return SpanningTree(tuple(_kruskal(inst.n, support, inst)))


def minimum_spanning_tree(inst: MetricInstance) -> SpanningTree:
    return SpanningTree(tuple(_kruskal(inst.n, inst.edges(), inst)))


def q_target(inst: MetricInstance, tree: SpanningTree) -> ParityTarget:
    """Vertices of odd tree degree, with the parity of s and t flipped."""
    return ParityTarget(tree.odd_vertices() ^ {inst.s, inst.t})


def min_q_join(inst: MetricInstance, q: ParityTarget | Iterable[int]) -> list[Edge]:
    """Minimum-length Q-join as a minimum perfect matching on Q (ℓ is metric)."""
    verts = sorted(q.q if isinstance(q, ParityTarget) else set(q))
    if len(verts) % 2:
        raise ParityError(f"odd number of terminals: {verts}")
    if not verts:
        return []
    if len(verts) == 2:
        return [edge(*verts)]
    # integer weights keep networkx's blossom on its exact integer path
    den = 1
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            den = math.lcm(den, inst.lengths[a][b].denominator)
    top = max(inst.lengths[a][b] for i, a in enumerate(verts) for b in verts[i + 1:]) + 1
    g = nx.Graph()
    for i, a in enumerate(verts):
        for b in verts[i + 1:]:
            g.add_edge(a, b, weight=int((top - inst.lengths[a][b]) * den))
    matching = nx.max_weight_matching(g, maxcardinality=True)
    if 2 * len(matching) != len(verts):
        raise ParityError("matching is not perfect")
    return sorted(edge(a, b) for a, b in matching)


def euler_shortcut(inst: MetricInstance, tree: SpanningTree | Sequence[Edge],
                   j_edges: Sequence[Edge]) -> tuple[int, ...]:
    """Hamiltonian s-t path from the Eulerian s-t trail of T ⊎ J.

    The trail comes from Hierholzer's algorithm started at s, visiting
    neighbours in increasing order. Shortcutting keeps the first occurrence of
    every vertex other than t and appends t at the end.
    """
    t_edges = tree.edges if isinstance(tree, SpanningTree) else tuple(edge(*e) for e in tree)
    multi = list(t_edges) + [edge(*e) for e in j_edges]
    deg = Counter(w for e in multi for w in e)
    odd = {w for w, d in deg.items() if d % 2}
    if odd != {inst.s, inst.t}:
        raise ParityError(f"odd-degree set is {sorted(odd)}, expected {{{inst.s}, {inst.t}}}")
    if len(components(inst.n, multi)) > 1:
        raise ParityError("tree plus join does not span all vertices")

    adj: dict[int, list[tuple[int, int]]] = {w: [] for w in range(inst.n)}
    for i, (a, b) in enumerate(multi):
        adj[a].append((b, i))
        adj[b].append((a, i))
    for w in adj:
        adj[w].sort(reverse=True)  # pop() yields the smallest neighbour
    used = [False] * len(multi)
    stack, trail = [inst.s], []
    while stack:
        w = stack[-1]
        nbrs = adj[w]
        while nbrs and used[nbrs[-1][1]]:
            nbrs.pop()
        if nbrs:
            nxt, i = nbrs.pop()
            used[i] = True
            stack.append(nxt)
        else:
            trail.append(stack.pop())
    trail.reverse()
    assert trail[0] == inst.s and trail[-1] == inst.t and len(trail) == len(multi) + 1

    seen, order = set(), []
    for w in trail:
        if w != inst.t and w not in seen:
            seen.add(w)
            order.append(w)
    order.append(inst.t)
    return tuple(order)


def hoogeveen_baseline(inst: MetricInstance) -> tuple[int, ...]:
    """Christofides-style path: full MST, minimum Q_T-join, shortcut."""
    tree = minimum_spanning_tree(inst)
    return euler_shortcut(inst, tree, min_q_join(inst, q_target(inst, tree)))
