"""Shortest B-good Held-Karp point via a shortest path in an auxiliary digraph.

Nodes are (cut, vertex, polarity) triples. A plus node (B, u) has u outside B,
a minus node (B, v) has v inside B; the sentinels are the plus node (∅, s)
and the minus node (V, t). "HK" arcs go from a plus node (B⁺, u) to a minus node
(B⁻, v) with B⁺ ⊊ B⁻ and u, v ∈ B⁻∖B⁺; their length is the optimum of the
Held-Karp relaxation on B⁻∖B⁺ from u to v with load >= 3 on every family cut
in between that separates u from v. "E" arcs go from (B, v)⁻ to (B, u)⁺ and
cost ℓ(v, u).

Two search strategies are provided:

* ``"dag"`` evaluates every arc that lies on some source-target path and runs
  a dynamic program over the topological order, breaking ties towards the
  lexicographically smallest node sequence.
* ``"astar"`` (default) evaluates arc lengths lazily. An HK arc first enters
  the queue with the lower bound max(ℓ(u,v), MST(B⁻∖B⁺)) and is only solved
  when that estimate reaches the front. The node potential is the MST of the
  vertices still to be covered, which is consistent because every Held-Karp
  piece lies in the spanning tree polytope of its ground set.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

from .heldkarp import HeldKarpSpec, solve_held_karp
from .instance import Cut, Edge, EdgeVector, MetricInstance, edge, members

PLUS = "plus"
MINUS = "minus"
HK = "HK"
E = "E"
INF = math.inf


class NoBGoodPointError(RuntimeError):
    pass


class AuxNode(NamedTuple):
    cut: int
    vertex: int
    polarity: str

    def order_key(self) -> tuple[int, int, int, int]:
        # minus before plus within a cut level; the graph is acyclic under this key
        return (self.cut.bit_count(), 0 if self.polarity == MINUS else 1, self.cut, self.vertex)

    def describe(self) -> str:
        sign = "+" if self.polarity == PLUS else "-"
        return f"({{{','.join(map(str, members(self.cut)))}}},{self.vertex}){sign}"


@dataclass
class AuxArc:
    tail: AuxNode
    head: AuxNode
    kind: str
    length: Fraction | float | None = None
    witness: EdgeVector | None = None

    @property
    def ground(self) -> int:
        return self.head.cut & ~self.tail.cut


@dataclass
class AuxDigraph:
    inst: MetricInstance
    family: list[int]
    nodes: list[AuxNode]
    arcs: list[AuxArc]

    @property
    def source(self) -> AuxNode:
        return AuxNode(0, self.inst.s, PLUS)

    @property
    def target(self) -> AuxNode:
        return AuxNode((1 << self.inst.n) - 1, self.inst.t, MINUS)

    def dump(self) -> str:
        """Plain-text adjacency listing, one arc per line."""
        lines = []
        for arc in sorted(self.arcs, key=lambda a: (a.tail.order_key(), a.head.order_key())):
            length = "?" if arc.length is None else ("inf" if arc.length == INF else str(arc.length))
            lines.append(f"{arc.tail.describe()} -> {arc.head.describe()} [{arc.kind}] {length}")
        return "\n".join(lines)


@dataclass
class BGoodResult:
    y: EdgeVector
    integral_one_cuts: list[tuple[Cut, Edge]]
    d_star: Fraction
    path_nodes: list[AuxNode]
    lp_solves: int = 0
    arcs_evaluated: int = 0
    node_count: int = 0
    strategy: str = "astar"


def _cut_bits(c) -> int:
    return c.cut.bits if hasattr(c, "cut") else (c.bits if isinstance(c, Cut) else int(c))


class _Structure:
    """Implicit auxiliary digraph: successor generation plus arc-length evaluation."""

    def __init__(self, inst: MetricInstance, family: Sequence):
        self.inst = inst
        self.n = inst.n
        self.full = (1 << inst.n) - 1
        fam = sorted({_cut_bits(c) for c in family}, key=lambda b: (b.bit_count(), b))
        for b in fam:
            if not (b >> inst.s & 1) or b >> inst.t & 1:
                raise ValueError(f"{Cut(b)} is not an s-t cut")
        self.family = fam
        self.fam_set = set(fam)
        self.supersets = {c: [b for b in fam if b != c and c & ~b == 0] + [self.full]
                          for c in [0] + fam}
        self.lp_solves = 0
        self.arcs_evaluated = 0
        self._memo: dict[tuple, tuple] = {}

    def node_count(self) -> int:
        return len(self.family) * self.n + 2

    def side_cuts(self, lo: int, hi: int, u: int, v: int) -> list[int]:
        return [b for b in self.supersets[lo][:-1]
                if b & ~hi == 0 and b >> u & 1 and not b >> v & 1]

    def _structurally_infinite(self, lo: int, hi: int, u: int, v: int) -> bool:
        W = hi & ~lo
        if u == v:
            return W != 1 << u
        # a side cut meeting W only in u (or in all of W but v) forces load 1 < 3
        left = lo | 1 << u
        right = hi & ~(1 << v)
        return (left in self.fam_set and left != hi) or (right in self.fam_set and right >> u & 1 and right != lo)

    def successors(self, node: AuxNode, prune: bool = True) -> Iterator[AuxArc]:
        cut, w, pol = node
        if pol == PLUS:
            for hi in self.supersets[cut]:
                if not hi >> w & 1:
                    continue
                ground = hi & ~cut
                heads = [self.inst.t] if hi == self.full else members(ground)
                for v in heads:
                    if not ground >> v & 1:
                        continue
                    if prune and self._structurally_infinite(cut, hi, w, v):
                        continue
                    yield AuxArc(node, AuxNode(hi, v, MINUS), HK)
        elif cut != self.full:
            for u in range(self.n):
                if not cut >> u & 1:
                    yield AuxArc(node, AuxNode(cut, u, PLUS), E, self.inst.lengths[w][u])

    def evaluate(self, arc: AuxArc) -> None:
        """Fill in the length (and witness) of an arc."""
        if arc.length is not None:
            return
        lo, hi = arc.tail.cut, arc.head.cut
        u, v = arc.tail.vertex, arc.head.vertex
        self.arcs_evaluated += 1
        if self._structurally_infinite(lo, hi, u, v):
            arc.length = INF
            return
        W = hi & ~lo
        sides = self.side_cuts(lo, hi, u, v)
        key = (W, u, v, frozenset(b & W for b in sides))
        hit = self._memo.get(key)
        if hit is None:
            if W != 1 << u:
                self.lp_solves += 1
            res = solve_held_karp(HeldKarpSpec(self.inst, W, u, v, tuple(sides)))
            hit = (res.value, res.x) if res.feasible else (INF, None)
            self._memo[key] = hit
        arc.length, arc.witness = hit

    def source(self) -> AuxNode:
        return AuxNode(0, self.inst.s, PLUS)

    def target(self) -> AuxNode:
        return AuxNode(self.full, self.inst.t, MINUS)


def build_aux_graph(inst: MetricInstance, b_family: Sequence, *, prune: bool = True) -> AuxDigraph:
    """Materialize all nodes and arcs (lengths of HK arcs left unset).

    With ``prune`` (default) HK arcs that are infinite for structural reasons
    are left out: u = v on a ground set of two or more vertices, or a family
    cut whose intersection with the ground set is {u} or everything but v.
    """
    st = _Structure(inst, b_family)
    nodes = [st.source()]
    for b in st.family:
        for w in range(inst.n):
            nodes.append(AuxNode(b, w, MINUS if b >> w & 1 else PLUS))
    nodes.append(st.target())
    nodes.sort(key=AuxNode.order_key)
    arcs = [arc for node in nodes for arc in st.successors(node, prune)]
    for arc in arcs:
        assert arc.tail.order_key() < arc.head.order_key(), "auxiliary digraph is not acyclic"
    return AuxDigraph(inst, st.family, nodes, arcs)


def arc_length(inst: MetricInstance, b_family: Sequence, arc: AuxArc):
    """Length of an arc (∞ when its program is infeasible) and the optimal point, if any."""
    st = _Structure(inst, b_family)
    if arc.kind == E:
        return inst.lengths[arc.tail.vertex][arc.head.vertex], None
    st.evaluate(arc)
    return arc.length, arc.witness


class _SpanningBound:
    """Minimum spanning tree length of vertex subsets, cached."""

    def __init__(self, inst: MetricInstance):
        self.lengths = inst.lengths
        self.cache: dict[int, Fraction] = {}

    def __call__(self, mask: int) -> Fraction:
        hit = self.cache.get(mask)
        if hit is not None:
            return hit
        verts = members(mask)
        total = Fraction(0)
        if len(verts) > 1:
            L = self.lengths
            best = {v: L[verts[0]][v] for v in verts[1:]}
            while best:
                v = min(best, key=lambda x: (best[x], x))
                total += best.pop(v)
                row = L[v]
                for x in best:
                    if row[x] < best[x]:
                        best[x] = row[x]
        self.cache[mask] = total
        return total


def shortest_bgood_point(inst: MetricInstance, b_family: Sequence, *, strategy: str = "astar") -> BGoodResult:
    """A B-good point of P_HK with minimum length, assembled along a shortest path."""
    st = _Structure(inst, b_family)
    if strategy == "astar":
        path = _astar(st)
    elif strategy == "dag":
        path = _dag(st)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    if path is None:
        raise NoBGoodPointError("no B-good point found: the auxiliary digraph has no finite path")
    limit = st.node_count() ** 2
    assert st.lp_solves <= limit, f"{st.lp_solves} arc programs exceed the (|B|n+2)^2 = {limit} bound"
    return _assemble(inst, st, path, strategy)


def _assemble(inst: MetricInstance, st: _Structure, path: list[AuxArc], strategy: str) -> BGoodResult:
    y = EdgeVector()
    ones: list[tuple[Cut, Edge]] = []
    d_star = Fraction(0)
    for arc in path:
        d_star += arc.length
        if arc.kind == HK:
            if arc.witness is not None:
                y = y + arc.witness
        else:
            e = edge(arc.tail.vertex, arc.head.vertex)
            y = y + EdgeVector({e: 1})
            ones.append((Cut(arc.tail.cut), e))
    nodes = [path[0].tail] + [arc.head for arc in path]
    return BGoodResult(y, ones, d_star, nodes, st.lp_solves, st.arcs_evaluated, st.node_count(), strategy)


def _astar(st: _Structure) -> list[AuxArc] | None:
    mst = _SpanningBound(st.inst)
    L = st.inst.lengths
    full = st.full

    def potential(node: AuxNode) -> Fraction:
        rest = full & ~node.cut
        return mst(rest | 1 << node.vertex if node.polarity == MINUS else rest)

    source, target = st.source(), st.target()
    settled: dict[AuxNode, tuple[Fraction, AuxArc | None]] = {}
    counter = itertools.count()
    heap: list = []
    # entry: (f, -g, node order, seq, node, g, arc, exact)
    heapq.heappush(heap, (potential(source), 0, source.order_key(), next(counter), source, Fraction(0), None, True))
    while heap:
        f, _, _, _, node, g, arc, exact = heapq.heappop(heap)
        if node in settled:
            continue
        if not exact:
            st.evaluate(arc)
            if arc.length == INF:
                continue
            g_new = g + arc.length
            heapq.heappush(heap, (g_new + potential(node), -g_new, node.order_key(), next(counter),
                                  node, g_new, arc, True))
            continue
        settled[node] = (g, arc)
        if node == target:
            break
        for nxt in st.successors(node):
            head = nxt.head
            if head in settled:
                continue
            if nxt.kind == E:
                g_new = g + nxt.length
                heapq.heappush(heap, (g_new + potential(head), -g_new, head.order_key(), next(counter),
                                      head, g_new, nxt, True))
            else:
                u, v = node.vertex, head.vertex
                bound = max(L[u][v], mst(nxt.ground))
                est = g + bound
                heapq.heappush(heap, (est + potential(head), -est, head.order_key(), next(counter),
                                      head, g, nxt, False))
    if target not in settled:
        return None
    path = []
    node = target
    while node != source:
        _, arc = settled[node]
        path.append(arc)
        node = arc.tail
    return path[::-1]


def _dag(st: _Structure) -> list[AuxArc] | None:
    source, target = st.source(), st.target()
    out: dict[AuxNode, list[AuxArc]] = {}
    order: list[AuxNode] = []
    stack = [source]
    seen = {source}
    while stack:
        node = stack.pop()
        order.append(node)
        arcs = list(st.successors(node))
        out[node] = arcs
        for arc in arcs:
            if arc.head not in seen:
                seen.add(arc.head)
                stack.append(arc.head)
    order.sort(key=AuxNode.order_key)
    to_target: dict[AuxNode, Fraction | float] = {node: INF for node in order}
    if target in to_target:
        to_target[target] = Fraction(0)
    for node in reversed(order):
        best = to_target[node]
        for arc in out[node]:
            if to_target[arc.head] == INF:
                continue
            st.evaluate(arc)
            cand = arc.length + to_target[arc.head]
            if cand < best:
                best = cand
        to_target[node] = best
    if to_target.get(source, INF) == INF:
        return None
    path = []
    node = source
    while node != target:
        remaining = to_target[node]
        arc = min((a for a in out[node]
                   if to_target[a.head] != INF and a.length is not None and a.length != INF
                   and a.length + to_target[a.head] == remaining),
                  key=lambda a: (a.head.cut.bit_count(), a.head.cut, a.head.vertex))
        path.append(arc)
        node = arc.head
    return path
