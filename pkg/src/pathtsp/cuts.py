"""Enumeration of the s-t cuts of load strictly below 3.

Two independent methods: exhaustive enumeration of all 2^(n-2) s-t
bipartitions, and randomized edge contraction on the support augmented by a
unit s-t edge (in that graph every cut has load >= 2, and the wanted cuts are
exactly the s-t cuts of load < 4, i.e. within twice the minimum).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from .flow import CapGraph, min_st_cut
from .instance import Cut, EdgeVector, MetricInstance

BRUTE_LIMIT = 22
DEFAULT_CONTRACT_TO = 8
DEFAULT_TRIAL_FACTOR = 3.0


class CutEnumerationError(ValueError):
    """The vector has an s-t cut of load below 1, so it is not a Held-Karp point."""

    def __init__(self, cut: Cut, load: Fraction):
        super().__init__(f"s-t cut {cut} has load {load} < 1")
        self.cut = cut
        self.load = load


class WeightedCut(NamedTuple):
    cut: Cut
    load: Fraction


def _scaled_edges(z: EdgeVector) -> tuple[list[tuple[int, int, int]], int]:
    den = 1
    for _, val in z.items():
        den = math.lcm(den, val.denominator)
    return [(a, b, int(val * den)) for (a, b), val in z.items()], den


def _loads(masks: np.ndarray, edges: Sequence[tuple[int, int, int]], bound: int) -> np.ndarray:
    dtype = np.int64 if bound < 2 ** 62 else object
    load = np.zeros(len(masks), dtype=dtype)
    for a, b, w in edges:
        crossing = ((masks >> a) ^ (masks >> b)) & 1
        load += crossing.astype(dtype) * w
    return load


def _check_connectivity(inst: MetricInstance, z: EdgeVector) -> None:
    g = CapGraph(inst.n, [(a, b, v) for (a, b), v in z.items()])
    value, side = min_st_cut(g, inst.s, inst.t)
    if value < 1:
        raise CutEnumerationError(Cut.of(side), value)


def brute_b_cuts(inst: MetricInstance, z: EdgeVector, threshold: Fraction = Fraction(3)) -> list[WeightedCut]:
    """Every s-t cut with z-load < threshold, by exhaustive enumeration."""
    n, s, t = inst.n, inst.s, inst.t
    if n > BRUTE_LIMIT:
        raise ValueError(f"brute-force enumeration is limited to n <= {BRUTE_LIMIT}")
    others = [w for w in range(n) if w not in (s, t)]
    idx = np.arange(1 << len(others), dtype=np.int64)
    masks = np.full(len(idx), 1 << s, dtype=np.int64)
    for i, w in enumerate(others):
        masks |= ((idx >> i) & 1) << w
    edges, den = _scaled_edges(z)
    limit = threshold * den
    load = _loads(masks, edges, sum(w for *_, w in edges) + 1)
    hits = np.nonzero(load < limit)[0]
    out = [WeightedCut(Cut(int(masks[i])), Fraction(int(load[i]), den)) for i in hits]
    return sorted(out, key=lambda wc: (wc.load, wc.cut.bits))


def contraction_trials(n: int, factor: float = DEFAULT_TRIAL_FACTOR, contract_to: int = DEFAULT_CONTRACT_TO) -> int:
    """Trials so that a fixed target cut is missed with probability <= n^-factor.

    At i super-vertices the augmented graph has total capacity >= i (every
    super-vertex has degree >= 2), so a cut of capacity < 4 survives a
    contraction step with probability >= 1 - 4/i.
    """
    k = max(4, contract_to)
    if n <= k:
        return 1
    survive = 1.0
    for i in range(k + 1, n + 1):
        survive *= (i - 4) / i
    return math.ceil(factor * math.log(n) / survive)


def contraction_b_cuts(inst: MetricInstance, z: EdgeVector, *, seed: int = 0,
                       factor: float = DEFAULT_TRIAL_FACTOR, contract_to: int = DEFAULT_CONTRACT_TO,
                       trials: int | None = None) -> list[WeightedCut]:
    """s-t cuts with z-load < 3 found by repeated weighted random contraction."""
    n, s, t = inst.n, inst.s, inst.t
    edges, den = _scaled_edges(z)
    cap: dict[tuple[int, int], int] = {}
    for a, b, w in edges:
        cap[(a, b)] = cap.get((a, b), 0) + w
    st = (min(s, t), max(s, t))
    cap[st] = cap.get(st, 0) + den
    h_edges = sorted(cap.items())
    ea = [e[0][0] for e in h_edges]
    eb = [e[0][1] for e in h_edges]
    weights = np.array([float(w) for _, w in h_edges])
    int_w = [w for _, w in h_edges]
    limit = 4 * den
    k = max(2, min(contract_to, n))
    if trials is None:
        trials = contraction_trials(n, factor, contract_to)
    rng = np.random.default_rng(seed)
    subset_cache: dict[int, np.ndarray] = {}
    found: set[int] = set()

    for _ in range(trials):
        # exponential race: the first surviving edge is drawn proportionally to capacity
        order = np.argsort(rng.exponential(size=len(weights)) / weights, kind="stable")
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        groups = n
        for e in order:
            if groups <= k:
                break
            ra, rb = find(ea[e]), find(eb[e])
            if ra != rb:
                parent[rb] = ra
                groups -= 1
        roots = sorted({find(v) for v in range(n)})
        label = {r: i for i, r in enumerate(roots)}
        comp = [label[find(v)] for v in range(n)]
        cs, ct = comp[s], comp[t]
        if cs == ct:
            continue
        size = len(roots)
        comp_mask = [0] * size
        for v in range(n):
            comp_mask[comp[v]] |= 1 << v
        ccap: dict[tuple[int, int], int] = {}
        for a, b, w in zip(ea, eb, int_w):
            x, y = comp[a], comp[b]
            if x != y:
                key = (x, y) if x < y else (y, x)
                ccap[key] = ccap.get(key, 0) + w
        free = [c for c in range(size) if c not in (cs, ct)]
        nfree = len(free)
        idx = subset_cache.get(nfree)
        if idx is None:
            idx = subset_cache[nfree] = np.arange(1 << nfree, dtype=np.int64)
        sides = np.full(len(idx), 1 << cs, dtype=np.int64)
        for i, c in enumerate(free):
            sides |= ((idx >> i) & 1) << c
        load = _loads(sides, [(x, y, w) for (x, y), w in ccap.items()], sum(int_w) + 1)
        for i in np.nonzero(load < limit)[0]:
            side = int(sides[i])
            found.add(sum(comp_mask[c] for c in range(size) if side >> c & 1))

    out = [WeightedCut(Cut(bits), z.load(bits)) for bits in found]
    return sorted(out, key=lambda wc: (wc.load, wc.cut.bits))


def enumerate_b_cuts(inst: MetricInstance, z: EdgeVector, method: str = "auto", *, seed: int = 0,
                     factor: float = DEFAULT_TRIAL_FACTOR, contract_to: int = DEFAULT_CONTRACT_TO,
                     trials: int | None = None) -> list[WeightedCut]:
    """All s-t cuts C with z(δ(C)) < 3, sorted by (load, bitmask).

    ``method`` is ``"brute"``, ``"contraction"`` or ``"auto"`` (brute up to
    n = 22). Raises :class:`CutEnumerationError` if some s-t cut has load < 1.
    """
    _check_connectivity(inst, z)
    if method == "auto":
        method = "brute" if inst.n <= BRUTE_LIMIT else "contraction"
    if method == "brute":
        return brute_b_cuts(inst, z)
    if method == "contraction":
        return contraction_b_cuts(inst, z, seed=seed, factor=factor, contract_to=contract_to, trials=trials)
    raise ValueError(f"unknown cut enumeration method {method!r}")


def verify_cut_count_bound(inst: MetricInstance, cuts: Sequence) -> bool:
    """True iff the family has at most n^4 members."""
    return len(cuts) <= inst.n ** 4


def augmented_graph(inst: MetricInstance, z: EdgeVector) -> CapGraph:
    """Support of z plus an extra s-t edge of capacity 1."""
    edges = [(a, b, v) for (a, b), v in z.items()]
    edges.append((inst.s, inst.t, Fraction(1)))
    return CapGraph(inst.n, edges)


def is_chain(cuts: Sequence[Cut]) -> bool:
    bits = sorted((c.bits for c in cuts), key=lambda b: b.bit_count())
    return all(a & ~b == 0 for a, b in zip(bits, bits[1:]))


def narrow_cuts(cuts: Sequence[WeightedCut]) -> list[Cut]:
    return [wc.cut for wc in cuts if wc.load < 2]
