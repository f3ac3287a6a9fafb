"""Exhaustive reference computations used to audit the solver.

Nothing here calls the flow, cut-enumeration or separation code: subset
families are enumerated outright with numpy over all bitmasks, so agreement
with the solver is independent evidence.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .instance import Cut, Edge, EdgeVector, MetricInstance, edge, members, scaled_integer_matrix
from .lp import EQ, GE, LinearProgram, solve

EXACT_LIMIT = 18
SUBSET_LIMIT = 20


class VerifierDisagreement(AssertionError):
    """The cut description and the spanning-tree description gave different verdicts."""


@dataclass(frozen=True)
class BGoodViolation:
    cut: Cut
    load: Fraction
    crossing: tuple[tuple[Edge, Fraction], ...]


@dataclass(frozen=True)
class PHKViolation:
    constraint: str
    subset: Cut | None = None
    activity: Fraction | None = None


@dataclass(frozen=True)
class JoinViolation:
    cut: Cut
    load: Fraction


# ---------------------------------------------------------------------------
# exact path TSP

def exact_path_tsp(inst: MetricInstance) -> tuple[Fraction, tuple[int, ...]]:
    """Bellman-Held-Karp over subsets of V∖{t}; ties go to the smallest predecessor."""
    n, s, t = inst.n, inst.s, inst.t
    if n > EXACT_LIMIT:
        raise ValueError(f"exact_path_tsp supports n <= {EXACT_LIMIT}, got {n}")
    if n == 2:
        return inst.lengths[s][t], (s, t)
    mat, den = scaled_integer_matrix(inst.lengths)
    verts = [w for w in range(n) if w != t]          # local index -> vertex
    m = len(verts)
    si = verts.index(s)
    L = np.array([[mat[a][b] for b in verts] for a in verts], dtype=object)
    big = max(max(row) for row in mat) * n + 1
    dtype = np.int64 if big < 2 ** 62 else object
    L = L.astype(dtype)
    size = 1 << m
    cost = np.full((size, m), big, dtype=dtype)
    parent = np.full((size, m), -1, dtype=np.int64)
    cost[1 << si, si] = 0
    all_masks = np.arange(size, dtype=np.int64)
    counts = _popcount(all_masks)
    with_s = (all_masks >> si) & 1 == 1
    for k in range(1, m):
        layer = all_masks[(counts == k) & with_s]
        for v in range(m):
            free = layer[(layer >> v) & 1 == 0]
            if not len(free):
                continue
            cand = cost[free] + L[:, v][None, :]                # via predecessor u
            best_u = np.argmin(cand, axis=1)
            best = cand[np.arange(len(free)), best_u]
            tgt = free | (1 << v)
            better = best < cost[tgt, v]
            cost[tgt[better], v] = best[better]
            parent[tgt[better], v] = best_u[better]
    full = size - 1
    to_t = np.array([mat[w][t] for w in verts], dtype=dtype)
    final = cost[full] + to_t
    last = int(np.argmin(final))
    opt = Fraction(int(final[last]), den)
    order = []
    mask, v = full, last
    while v != -1:
        order.append(verts[v])
        prev = int(parent[mask, v])
        mask ^= 1 << v
        v = prev
    order.reverse()
    order.append(t)
    assert order[0] == s and len(order) == n
    return opt, tuple(order)


def permutation_path_tsp(inst: MetricInstance) -> tuple[Fraction, tuple[int, ...]]:
    """Minimum over all (n-2)! interior orders; first minimum in lexicographic order."""
    s, t = inst.s, inst.t
    L = inst.lengths
    interior = [w for w in range(inst.n) if w not in (s, t)]
    best = None
    for perm in itertools.permutations(interior):
        order = (s, *perm, t)
        length = sum((L[a][b] for a, b in zip(order, order[1:])), Fraction(0))
        if best is None or length < best[0]:
            best = (length, order)
    return best


def all_hamiltonian_paths(inst: MetricInstance) -> Iterable[tuple[int, ...]]:
    interior = [w for w in range(inst.n) if w not in (inst.s, inst.t)]
    for perm in itertools.permutations(interior):
        yield (inst.s, *perm, inst.t)


# ---------------------------------------------------------------------------
# subset tables

def _scaled(x: EdgeVector) -> tuple[list[tuple[int, int, int]], int]:
    den = 1
    for _, v in x.items():
        den = math.lcm(den, v.denominator)
    return [(a, b, int(v * den)) for (a, b), v in x.items()], den


def _subset_masks(ground: Sequence[int]) -> np.ndarray:
    idx = np.arange(1 << len(ground), dtype=np.int64)
    masks = np.zeros(len(idx), dtype=np.int64)
    for i, w in enumerate(ground):
        masks |= ((idx >> i) & 1) << w
    return masks


def _tables(masks: np.ndarray, edges) -> tuple[np.ndarray, np.ndarray]:
    """(crossing load, inside load) for each mask, in scaled integers."""
    total = sum(w for *_, w in edges) + 1
    dtype = np.int64 if total < 2 ** 62 else object
    cross = np.zeros(len(masks), dtype=dtype)
    inside = np.zeros(len(masks), dtype=dtype)
    for a, b, w in edges:
        ia, ib = (masks >> a) & 1, (masks >> b) & 1
        cross += (ia ^ ib).astype(dtype) * w
        inside += (ia & ib).astype(dtype) * w
    return cross, inside


def _popcount(masks: np.ndarray) -> np.ndarray:
    return np.bitwise_count(masks.astype(np.uint64)).astype(np.int64)


# ---------------------------------------------------------------------------
# B-goodness

def verify_bgood(inst: MetricInstance, y: EdgeVector, b_family: Iterable) -> BGoodViolation | None:
    """None when every cut has load >= 3 or a single crossing edge of value exactly 1."""
    for c in b_family:
        cut = c.cut if hasattr(c, "cut") else (c if isinstance(c, Cut) else Cut(int(c)))
        crossing = tuple((e, v) for e, v in sorted(y.items())
                         if (cut.bits >> e[0] & 1) != (cut.bits >> e[1] & 1))
        load = sum((v for _, v in crossing), Fraction(0))
        if load >= 3:
            continue
        if load == 1 and len(crossing) == 1:
            continue
        return BGoodViolation(cut, load, crossing)
    return None


# ---------------------------------------------------------------------------
# membership in the Held-Karp path polytope, two ways

def _degree_violation(x: EdgeVector, ground: list[int], u: int, v: int) -> PHKViolation | None:
    for w in ground:
        want = 1 if w in (u, v) else 2
        got = x.degree(w)
        if got != want:
            return PHKViolation(f"degree {w} = {want}", Cut(1 << w), got)
    return None


def _outside_violation(x: EdgeVector, W: int) -> PHKViolation | None:
    for a, b in x.support():
        if not (W >> a & 1 and W >> b & 1):
            return PHKViolation(f"edge {a}-{b} outside E[W]", None, x[(a, b)])
    return None


def _cut_form(x: EdgeVector, W: int, u: int, v: int) -> PHKViolation | None:
    ground = members(W)
    bad = _outside_violation(x, W) or _degree_violation(x, ground, u, v)
    if bad:
        return bad
    edges, den = _scaled(x)
    masks = _subset_masks(ground)
    cross, _ = _tables(masks, edges)
    has_u = (masks >> u) & 1 == 1
    has_v = (masks >> v) & 1 == 1
    separating = has_u & ~has_v
    low = np.nonzero(separating & (cross < den))[0]
    if len(low):
        i = low[0]
        return PHKViolation("u-v cut >= 1", Cut(int(masks[i])), Fraction(int(cross[i]), den))
    nonsep = ~has_u & ~has_v & (masks != 0)
    low = np.nonzero(nonsep & (cross < 2 * den))[0]
    if len(low):
        i = low[0]
        return PHKViolation("non-separating cut >= 2", Cut(int(masks[i])), Fraction(int(cross[i]), den))
    return None


def _tree_form(x: EdgeVector, W: int, u: int, v: int) -> PHKViolation | None:
    ground = members(W)
    bad = _outside_violation(x, W) or _degree_violation(x, ground, u, v)
    if bad:
        return bad
    edges, den = _scaled(x)
    masks = _subset_masks(ground)
    _, inside = _tables(masks, edges)
    sizes = _popcount(masks)
    full = np.nonzero(masks == W)[0][0]
    if inside[full] != (len(ground) - 1) * den:
        return PHKViolation("x(E[W]) = |W| - 1", Cut(W), Fraction(int(inside[full]), den))
    over = np.nonzero((masks != 0) & (inside > (sizes - 1) * den))[0]
    if len(over):
        i = over[0]
        return PHKViolation("x(E[S]) <= |S| - 1", Cut(int(masks[i])), Fraction(int(inside[i]), den))
    return None


def verify_in_phk(inst: MetricInstance, x: EdgeVector, W=None, u: int | None = None,
                  v: int | None = None) -> PHKViolation | None:
    """None when x lies in P_HK(W, u, v); defaults to the top-level polytope.

    Checks the cut description and the degree-bounded spanning-tree
    description separately and raises VerifierDisagreement if they differ.
    """
    W = (1 << inst.n) - 1 if W is None else (W.bits if isinstance(W, Cut) else
                                             W if isinstance(W, int) else sum(1 << w for w in W))
    u = inst.s if u is None else u
    v = inst.t if v is None else v
    if W.bit_count() > SUBSET_LIMIT:
        raise ValueError(f"exhaustive membership check limited to |W| <= {SUBSET_LIMIT}")
    if u == v:
        if W != 1 << u:
            return PHKViolation("u = v on two or more vertices: empty polytope")
        return None if len(x) == 0 else PHKViolation("only the zero vector is feasible")
    a = _cut_form(x, W, u, v)
    b = _tree_form(x, W, u, v)
    if (a is None) != (b is None):
        raise VerifierDisagreement(f"cut form says {a}, spanning-tree form says {b}")
    return a


# ---------------------------------------------------------------------------
# T-join dominant

def verify_join_dominant(inst: MetricInstance, x: EdgeVector, q: Iterable[int]) -> JoinViolation | None:
    """None when x(δ(C)) >= 1 for every C with |C ∩ q| odd."""
    q = frozenset(getattr(q, "q", q))
    if len(q) % 2:
        raise ValueError("q must have even size")
    if not q:
        return None
    n = inst.n
    if n > SUBSET_LIMIT:
        raise ValueError(f"exhaustive join check limited to n <= {SUBSET_LIMIT}")
    # C and its complement give the same cut: fix vertex n-1 outside
    masks = _subset_masks(list(range(n - 1)))
    qmask = sum(1 << w for w in q)
    odd = _popcount(masks & qmask) % 2 == 1
    edges, den = _scaled(x)
    cross, _ = _tables(masks, edges)
    low = np.nonzero(odd & (cross < den))[0]
    if len(low):
        i = low[0]
        return JoinViolation(Cut(int(masks[i])), Fraction(int(cross[i]), den))
    return None


# ---------------------------------------------------------------------------
# small exhaustive references

def brute_min_st_cut(n: int, capacities: Iterable[tuple[int, int, object]], a: int,
                     b: int) -> tuple[Fraction, frozenset[int]]:
    """Minimum a-b cut over all 2^(n-2) sides; ties go to the smallest side, then bitmask."""
    caps = [(x, y, Fraction(c)) for x, y, c in capacities]
    den = 1
    for *_, c in caps:
        den = math.lcm(den, c.denominator)
    edges = [(x, y, int(c * den)) for x, y, c in caps]
    others = [w for w in range(n) if w not in (a, b)]
    masks = _subset_masks(others) | (1 << a)
    cross, _ = _tables(masks, edges)
    best = min(range(len(masks)), key=lambda i: (cross[i], int(masks[i]).bit_count(), int(masks[i])))
    return Fraction(int(cross[best]), den), frozenset(members(int(masks[best])))


def _matchings(verts: list[int]):
    if not verts:
        yield []
        return
    a = verts[0]
    for i in range(1, len(verts)):
        rest = verts[1:i] + verts[i + 1:]
        for m in _matchings(rest):
            yield [(a, verts[i])] + m


def brute_min_perfect_matching(inst: MetricInstance, q: Iterable[int]) -> tuple[Fraction, list[Edge]]:
    verts = sorted(getattr(q, "q", q))
    if len(verts) % 2:
        raise ValueError("odd number of terminals")
    L = inst.lengths
    best = None
    for m in _matchings(verts):
        cost = sum((L[a][b] for a, b in m), Fraction(0))
        if best is None or cost < best[0]:
            best = (cost, sorted(edge(a, b) for a, b in m))
    return best


def materialized_held_karp(inst: MetricInstance, W=None, u: int | None = None,
                           v: int | None = None) -> tuple[Fraction, EdgeVector] | None:
    """Held-Karp path LP with every cut row written out; None when infeasible."""
    W = (1 << inst.n) - 1 if W is None else W
    u = inst.s if u is None else u
    v = inst.t if v is None else v
    ground = members(W)
    if u == v:
        return (Fraction(0), EdgeVector()) if W == 1 << u else None
    pairs = [(a, b) for i, a in enumerate(ground) for b in ground[i + 1:]]
    lp = LinearProgram({p: inst.lengths[p[0]][p[1]] for p in pairs})
    for w in ground:
        lp.add_row({p: 1 for p in pairs if w in p}, EQ, 1 if w in (u, v) else 2)
    rest = [w for w in ground if w not in (u, v)]
    for k in range(1 << len(rest)):
        inner = {w for i, w in enumerate(rest) if k >> i & 1}
        cross = lambda side: {p: 1 for p in pairs if (p[0] in side) != (p[1] in side)}
        lp.add_row(cross(inner | {u}), GE, 1)
        if inner:
            lp.add_row(cross(inner), GE, 2)
    sol = solve(lp)
    if not sol.optimal:
        return None
    return sol.value, EdgeVector(sol.point)
