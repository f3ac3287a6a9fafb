"""Held-Karp path relaxations P_HK(W, u, v), optionally with ">= 3" side cuts.

The degree equalities are explicit LP rows; the two exponential cut families
(u-v cuts >= 1, non-separating cuts >= 2) and the listed side cuts are added
lazily by separation oracles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .flow import CapGraph, components, min_cuts_from_root, min_st_cut
from .instance import Cut, Edge, EdgeVector, MetricInstance, mask_of, members
from .lp import EQ, GE, INFEASIBLE, OPTIMAL, LinearProgram, Row, solve_with_separation


@dataclass(frozen=True)
class HeldKarpSpec:
    """Ground set ``W`` (bitmask), endpoints ``u``/``v`` and side cuts needing load >= 3."""

    inst: MetricInstance
    W: int
    u: int
    v: int
    extra_cuts: tuple[int, ...] = ()

    def __post_init__(self):
        W = _bits(self.W)
        object.__setattr__(self, "W", W)
        object.__setattr__(self, "extra_cuts", tuple(_bits(b) for b in self.extra_cuts))
        if not (W >> self.u & 1 and W >> self.v & 1):
            raise ValueError(f"endpoints {self.u}, {self.v} must lie in W")
        if W >> self.inst.n:
            raise ValueError("W contains vertices outside the instance")
        for b in self.extra_cuts:
            c = b & W
            if not (c >> self.u & 1) or c >> self.v & 1:
                raise ValueError(f"side cut {Cut(b)} must contain u={self.u} and exclude v={self.v}")

    @classmethod
    def top_level(cls, inst: MetricInstance) -> "HeldKarpSpec":
        return cls(inst, (1 << inst.n) - 1, inst.s, inst.t)

    @property
    def vertices(self) -> list[int]:
        return members(self.W)

    def side_cuts_in_w(self) -> list[int]:
        """Side cuts intersected with W, deduplicated, in input order."""
        seen, out = set(), []
        for b in self.extra_cuts:
            c = b & self.W
            if c not in seen:
                seen.add(c)
                out.append(c)
        return out


def _bits(x) -> int:
    if isinstance(x, Cut):
        return x.bits
    if isinstance(x, int):
        return x
    return mask_of(x)


@dataclass
class HeldKarpResult:
    status: str
    x: EdgeVector | None = None
    value: Fraction | None = None
    rounds: int = 0
    pivots: int = 0
    rows: list[Row] = field(default_factory=list)

    @property
    def feasible(self) -> bool:
        return self.status == OPTIMAL


def cut_row(vertices: Iterable[int], cut: int, rhs) -> Row:
    """x(δ(C)) >= rhs over the edges of the complete graph on ``vertices``."""
    inside = [w for w in vertices if cut >> w & 1]
    outside = [w for w in vertices if not cut >> w & 1]
    coeffs = {(min(a, b), max(a, b)): Fraction(1) for a in inside for b in outside}
    return Row(coeffs, GE, Fraction(rhs))


def degree_row(vertices: Iterable[int], w: int, rhs) -> Row:
    coeffs = {(min(a, w), max(a, w)): Fraction(1) for a in vertices if a != w}
    return Row(coeffs, EQ, Fraction(rhs))


def _degree_target(spec: HeldKarpSpec, w: int) -> int:
    return 1 if w in (spec.u, spec.v) else 2


def _load(point: Mapping[Edge, Fraction], cut: int) -> Fraction:
    return sum((val for (a, b), val in point.items() if (cut >> a & 1) != (cut >> b & 1)), Fraction(0))


def _side_cut_rows(spec: HeldKarpSpec, point) -> list[Row]:
    verts = spec.vertices
    return [cut_row(verts, c, 3) for c in spec.side_cuts_in_w() if _load(point, c) < 3]


def _uv_cut_rows(spec: HeldKarpSpec, point) -> list[Row]:
    verts = spec.vertices
    label = {w: i for i, w in enumerate(verts)}
    g = CapGraph(len(verts), [(label[a], label[b], val) for (a, b), val in point.items()])
    value, side = min_st_cut(g, label[spec.u], label[spec.v])
    if value < 1:
        return [cut_row(verts, mask_of(verts[i] for i in side), 1)]
    return []


def _nonseparating_rows(spec: HeldKarpSpec, point) -> list[Row]:
    verts = spec.vertices
    others = [w for w in verts if w not in (spec.u, spec.v)]
    if not others:
        return []
    # u and v share label 0, so every cut of the contracted graph keeps them together
    label = {spec.u: 0, spec.v: 0}
    label.update((w, i) for i, w in enumerate(others, 1))
    k = len(others) + 1
    edges = [(label[a], label[b], val) for (a, b), val in point.items() if label[a] != label[b]]
    comps = components(k, edges)
    if len(comps) > 1:
        sides = [frozenset(c) for c in comps if 0 not in c]
    else:
        g = CapGraph(k, edges)
        everything = frozenset(range(k))
        sides = [everything - side for value, side in min_cuts_from_root(g, 0, range(1, k)) if value < 2]
    rows, seen = [], set()
    for side in sides:
        cut = mask_of(others[i - 1] for i in side)
        if cut not in seen:
            seen.add(cut)
            rows.append(cut_row(verts, cut, 2))
    return rows


def solve_held_karp(spec: HeldKarpSpec, *, bit_limit: int | None = None) -> HeldKarpResult:
    """Exact minimum of ℓ(x) over P_HK(W, u, v) intersected with the side-cut rows."""
    W, u, v = spec.W, spec.u, spec.v
    if u == v:
        if W == 1 << u:
            return HeldKarpResult(OPTIMAL, EdgeVector(), Fraction(0))
        return HeldKarpResult(INFEASIBLE)
    for c in spec.side_cuts_in_w():
        # the side of the cut is a single endpoint, whose degree is pinned to 1
        if c == 1 << u or c == W & ~(1 << v):
            return HeldKarpResult(INFEASIBLE)

    verts = spec.vertices
    lengths = spec.inst.lengths
    lp = LinearProgram({(a, b): lengths[a][b] for i, a in enumerate(verts) for b in verts[i + 1:]})
    for w in verts:
        row = degree_row(verts, w, _degree_target(spec, w))
        lp.add_row(row.coeffs, row.relation, row.rhs)

    oracles = [lambda p: _side_cut_rows(spec, p),
               lambda p: _uv_cut_rows(spec, p),
               lambda p: _nonseparating_rows(spec, p)]
    kwargs = {} if bit_limit is None else {"bit_limit": bit_limit}
    sol = solve_with_separation(lp, oracles, **kwargs)
    if not sol.optimal:
        return HeldKarpResult(sol.status, rounds=sol.rounds, pivots=sol.pivots, rows=lp.rows)
    return HeldKarpResult(OPTIMAL, EdgeVector(sol.point), sol.value, sol.rounds, sol.pivots, lp.rows)


def separate_point(spec: HeldKarpSpec, x: EdgeVector) -> Row | None:
    """A row of the relaxation strictly violated by ``x``, or None if x is feasible.

    Checks in order: degree equalities, side cuts, u-v cuts, non-separating cuts.
    """
    verts = spec.vertices
    W = spec.W
    outside = [e for e in x.support() if not (W >> e[0] & 1 and W >> e[1] & 1)]
    if outside:
        a, b = outside[0]
        return Row({(a, b): Fraction(1)}, EQ, Fraction(0))
    if spec.u == spec.v:
        if W == 1 << spec.u:
            return None
        # empty polytope: 0 >= 1 is violated by every point
        return Row({}, GE, Fraction(1))
    point = dict(x.items())
    for w in verts:
        target = _degree_target(spec, w)
        if x.degree(w) != target:
            return degree_row(verts, w, target)
    for check in (_side_cut_rows, _uv_cut_rows, _nonseparating_rows):
        rows = check(spec, point)
        if rows:
            return rows[0]
    return None
