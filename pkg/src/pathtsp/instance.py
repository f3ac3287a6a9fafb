"""Metric Path TSP instances, edge-indexed vectors and s-t cuts.

Everything here is exact: lengths and vector entries are ``Fraction``.
Vertices are the integers ``0..n-1``; vertex sets are stored as int bitmasks
internally and exposed through :class:`Cut` at the API boundary.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

MAX_VERTICES = 64

Edge = tuple[int, int]


class InstanceError(ValueError):
    """Malformed or non-metric instance data."""


def edge(u: int, v: int) -> Edge:
    """Canonical key of the unordered pair {u, v}."""
    if u == v:
        raise ValueError(f"self-loop {{{u},{v}}} is not an edge")
    return (u, v) if u < v else (v, u)


def mask_of(vertices: Iterable[int]) -> int:
    bits = 0
    for v in vertices:
        bits |= 1 << v
    return bits


def members(bits: int) -> list[int]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return out


@dataclass(frozen=True, order=True)
class Cut:
    """A vertex subset, stored as a bitmask.

    Cuts handed around by the solver are s-t cuts (``s`` inside, ``t``
    outside); the class itself only enforces nonnegativity of the mask so the
    sentinels ``∅`` and ``V`` of the auxiliary digraph can reuse it.
    """

    bits: int

    def __post_init__(self):
        if self.bits < 0:
            raise ValueError("cut bitmask must be nonnegative")

    @classmethod
    def of(cls, vertices: Iterable[int]) -> "Cut":
        return cls(mask_of(vertices))

    def members(self) -> list[int]:
        return members(self.bits)

    def __contains__(self, v: int) -> bool:
        return bool(self.bits >> v & 1)

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter(self.members())

    def issubset(self, other: "Cut") -> bool:
        return self.bits & ~other.bits == 0

    def separates(self, s: int, t: int) -> bool:
        return s in self and t not in self

    def __repr__(self) -> str:
        return f"Cut({{{', '.join(map(str, self.members()))}}})"


def popcount(bits: int) -> int:
    return bits.bit_count()


class EdgeVector:
    """Nonnegative rational vector on the edges of the complete graph.

    Only positive entries are stored, so ``support()`` is just the key set.
    """

    __slots__ = ("_values",)

    def __init__(self, values: Mapping[Edge, object] | Iterable[tuple[Edge, object]] = ()):
        items = values.items() if isinstance(values, Mapping) else values
        store: dict[Edge, Fraction] = {}
        for (a, b), raw in items:
            val = _as_fraction(raw)
            if val < 0:
                raise ValueError(f"negative entry {val} on edge {(a, b)}")
            if val:
                key = edge(a, b)
                store[key] = store.get(key, Fraction(0)) + val
        self._values = store

    @classmethod
    def indicator(cls, edges: Iterable[Edge]) -> "EdgeVector":
        """Characteristic vector of an edge multiset (repeated edges add up)."""
        return cls((e, 1) for e in edges)

    @classmethod
    def of_path(cls, order: Sequence[int]) -> "EdgeVector":
        return cls.indicator(zip(order, order[1:]))

    def __getitem__(self, e: Edge) -> Fraction:
        return self._values.get(edge(*e), Fraction(0))

    def items(self):
        return self._values.items()

    def support(self) -> list[Edge]:
        return sorted(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __eq__(self, other) -> bool:
        return isinstance(other, EdgeVector) and self._values == other._values

    def __hash__(self):
        return hash(frozenset(self._values.items()))

    def __add__(self, other: "EdgeVector") -> "EdgeVector":
        out = EdgeVector()
        out._values = dict(self._values)
        for e, v in other._values.items():
            out._values[e] = out._values.get(e, Fraction(0)) + v
        return out

    def scale(self, factor) -> "EdgeVector":
        factor = _as_fraction(factor)
        return EdgeVector((e, v * factor) for e, v in self._values.items())

    def load(self, cut) -> Fraction:
        """x(δ(C)); ``cut`` may be a Cut, a bitmask or an iterable of vertices."""
        bits = _bits(cut)
        total = Fraction(0)
        for (a, b), v in self._values.items():
            if (bits >> a & 1) != (bits >> b & 1):
                total += v
        return total

    def degree(self, v: int) -> Fraction:
        return self.load(1 << v)

    def inside(self, cut) -> Fraction:
        """x(E[S])."""
        bits = _bits(cut)
        return sum((val for (a, b), val in self._values.items()
                    if bits >> a & 1 and bits >> b & 1), Fraction(0))

    def total(self) -> Fraction:
        return sum(self._values.values(), Fraction(0))

    def length(self, inst: "MetricInstance") -> Fraction:
        return sum((v * inst.lengths[a][b] for (a, b), v in self._values.items()), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self._values.values())

    def vertices(self) -> set[int]:
        return {w for e in self._values for w in e}

    def __repr__(self) -> str:
        body = ", ".join(f"{a}-{b}: {v}" for (a, b), v in sorted(self._values.items()))
        return f"EdgeVector({{{body}}})"


def _bits(cut) -> int:
    if isinstance(cut, Cut):
        return cut.bits
    if isinstance(cut, int):
        return cut
    return mask_of(cut)


def _as_fraction(raw) -> Fraction:
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or decimal string")
    num, den = getattr(raw, "numerator", None), getattr(raw, "denominator", None)
    if num is not None and den is not None:
        return Fraction(int(num), int(den))
    return Fraction(str(raw))


@dataclass(frozen=True)
class MetricInstance:
    """Complete graph with exact metric lengths and endpoints ``s != t``."""

    lengths: tuple[tuple[Fraction, ...], ...]
    s: int
    t: int
    name: str = "instance"
    coords: tuple[tuple[Fraction, Fraction], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        n = len(self.lengths)
        if n < 2:
            raise InstanceError("an instance needs at least 2 vertices")
        if n > MAX_VERTICES:
            raise InstanceError(f"n={n} exceeds the supported maximum of {MAX_VERTICES}")
        if not (0 <= self.s < n and 0 <= self.t < n):
            raise InstanceError(f"endpoints ({self.s}, {self.t}) out of range for n={n}")
        if self.s == self.t:
            raise InstanceError("s and t must be distinct")
        rows = tuple(tuple(_as_fraction(x) for x in row) for row in self.lengths)
        if any(len(r) != n for r in rows):
            raise InstanceError("length matrix is not square")
        object.__setattr__(self, "lengths", rows)
        for u in range(n):
            if rows[u][u] != 0:
                raise InstanceError(f"nonzero diagonal entry at {u}")
            for v in range(u + 1, n):
                if rows[u][v] != rows[v][u]:
                    raise InstanceError(f"asymmetric lengths at ({u},{v})")
                if rows[u][v] < 0:
                    raise InstanceError(f"negative length at ({u},{v})")
        witness = triangle_violation(rows)
        if witness is not None:
            u, v, w = witness
            raise InstanceError(f"triangle inequality violated at ({u},{v},{w})")

    @property
    def n(self) -> int:
        return len(self.lengths)

    def __getitem__(self, e: Edge) -> Fraction:
        return self.lengths[e[0]][e[1]]

    def edges(self) -> Iterator[Edge]:
        n = self.n
        for u in range(n):
            for v in range(u + 1, n):
                yield (u, v)

    def with_endpoints(self, s: int, t: int) -> "MetricInstance":
        return MetricInstance(self.lengths, s, t, self.name, self.coords)


def scaled_integer_matrix(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """Return (integer matrix, common denominator D) with rows = matrix / D."""
    den = 1
    for row in rows:
        for x in row:
            den = math.lcm(den, x.denominator)
    return [[int(x * den) for x in row] for row in rows], den


def triangle_violation(rows: Sequence[Sequence[Fraction]]) -> tuple[int, int, int] | None:
    """First triple (u, v, w) with ℓ(u,w) > ℓ(u,v) + ℓ(v,w), or None.

    The reported triple is ordered as (u, v, w) with v the intermediate vertex;
    ``(0, 1, 2)`` for ℓ(0,2)=10, ℓ(0,1)=ℓ(1,2)=1.
    """
    n = len(rows)
    ints, _ = scaled_integer_matrix(rows)
    biggest = max((max(r) for r in ints), default=0)
    if biggest < 2 ** 61:
        d = np.array(ints, dtype=np.int64)
        for v in range(n):
            bad = d > d[:, v:v + 1] + d[v:v + 1, :]
            if bad.any():
                u, w = (int(i) for i in np.argwhere(bad)[0])
                return (min(u, w), v, max(u, w))
        return None
    for v in range(n):
        for u in range(n):
            for w in range(n):
                if ints[u][w] > ints[u][v] + ints[v][w]:
                    return (min(u, w), v, max(u, w))
    return None


def metric_closure(rows: Sequence[Sequence[Fraction]]) -> tuple[tuple[Fraction, ...], ...]:
    """All-pairs shortest-path distances (Floyd-Warshall, exact)."""
    n = len(rows)
    d = [list(map(_as_fraction, r)) for r in rows]
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                via = dik + dk[j]
                if via < di[j]:
                    di[j] = via
    return tuple(tuple(r) for r in d)


def path_length(inst: MetricInstance, order: Sequence[int]) -> Fraction:
    """Exact length of a Hamiltonian s-t path given as a vertex sequence."""
    check_path(inst, order)
    return sum((inst.lengths[a][b] for a, b in zip(order, order[1:])), Fraction(0))


def check_path(inst: MetricInstance, order: Sequence[int]) -> None:
    if len(order) != inst.n or sorted(order) != list(range(inst.n)):
        raise ValueError(f"not a permutation of 0..{inst.n - 1}: {list(order)}")
    if order[0] != inst.s or order[-1] != inst.t:
        raise ValueError(f"path must run from s={inst.s} to t={inst.t}, got {order[0]}..{order[-1]}")


# ---------------------------------------------------------------------------
# TSPLIB subset

_KEYWORDS = {"NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT",
             "NODE_COORD_TYPE", "DISPLAY_DATA_TYPE", "CAPACITY"}


def euc_2d(p: tuple[Fraction, Fraction], q: tuple[Fraction, Fraction]) -> int:
    """TSPLIB EUC_2D: Euclidean distance rounded half-up, computed exactly."""
    sq = (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2
    num, den = sq.numerator, sq.denominator
    r = math.isqrt(num * den) // den
    # round up iff (r + 1/2)^2 <= sq
    return r + 1 if (2 * r + 1) ** 2 * den <= 4 * num else r


def parse_instance(text: str, s: int, t: int, *, metric_closure_fix: bool = False) -> MetricInstance:
    """Read the supported TSPLIB subset (EUC_2D or EXPLICIT FULL_MATRIX/UPPER_ROW)."""
    header: dict[str, str] = {}
    tokens_after: dict[str, list[str]] = {}
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.upper() == "EOF":
            break
        m = re.match(r"^([A-Z_]+)\s*(?::\s*(.*))?$", line)
        if m and (m.group(1) in _KEYWORDS and m.group(2) is not None):
            header[m.group(1)] = m.group(2).strip()
            section = None
            continue
        if m and m.group(1).endswith("_SECTION") and m.group(2) is None:
            section = m.group(1)
            tokens_after.setdefault(section, [])
            continue
        if section is None:
            raise InstanceError(f"unexpected line outside any section: {line!r}")
        tokens_after[section].extend(line.split())

    try:
        n = int(header["DIMENSION"])
    except (KeyError, ValueError):
        raise InstanceError("missing or invalid DIMENSION") from None
    if n < 2:
        raise InstanceError("DIMENSION must be at least 2")
    if n > MAX_VERTICES:
        raise InstanceError(f"DIMENSION {n} exceeds the supported maximum of {MAX_VERTICES}")
    kind = header.get("EDGE_WEIGHT_TYPE", "").upper()
    coords = None
    if kind == "EUC_2D":
        toks = tokens_after.get("NODE_COORD_SECTION")
        if toks is None or len(toks) != 3 * n:
            raise InstanceError("NODE_COORD_SECTION must list exactly DIMENSION 'id x y' triples")
        coords = [None] * n
        for i in range(n):
            ident, x, y = toks[3 * i:3 * i + 3]
            idx = _int_token(ident) - 1
            if not 0 <= idx < n or coords[idx] is not None:
                raise InstanceError(f"bad or repeated node id {ident}")
            coords[idx] = (_num_token(x), _num_token(y))
        rows = [[Fraction(euc_2d(coords[a], coords[b])) for b in range(n)] for a in range(n)]
    elif kind == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT", "").upper()
        vals = [_num_token(x) for x in tokens_after.get("EDGE_WEIGHT_SECTION", [])]
        rows = [[Fraction(0)] * n for _ in range(n)]
        if fmt == "FULL_MATRIX":
            if len(vals) != n * n:
                raise InstanceError(f"FULL_MATRIX needs {n * n} weights, found {len(vals)}")
            rows = [vals[i * n:(i + 1) * n] for i in range(n)]
        elif fmt == "UPPER_ROW":
            if len(vals) != n * (n - 1) // 2:
                raise InstanceError(f"UPPER_ROW needs {n * (n - 1) // 2} weights, found {len(vals)}")
            it = iter(vals)
            for a in range(n):
                for b in range(a + 1, n):
                    rows[a][b] = rows[b][a] = next(it)
        else:
            raise InstanceError(f"unsupported EDGE_WEIGHT_FORMAT {fmt or '(missing)'}")
    else:
        raise InstanceError(f"unsupported EDGE_WEIGHT_TYPE {kind or '(missing)'}")

    if metric_closure_fix:
        rows = metric_closure(rows)
    name = header.get("NAME", "instance")
    frozen_coords = tuple(coords) if coords else None
    return MetricInstance(tuple(tuple(r) for r in rows), s, t, name, frozen_coords)


def _int_token(tok: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise InstanceError(f"expected an integer, got {tok!r}") from None


def _num_token(tok: str) -> Fraction:
    try:
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise InstanceError(f"expected a number, got {tok!r}") from None


def format_instance(inst: MetricInstance) -> str:
    """Write an instance as TSPLIB EXPLICIT FULL_MATRIX (lengths verbatim)."""
    lines = [f"NAME : {inst.name}", "TYPE : TSP", f"DIMENSION : {inst.n}",
             "EDGE_WEIGHT_TYPE : EXPLICIT", "EDGE_WEIGHT_FORMAT : FULL_MATRIX",
             "EDGE_WEIGHT_SECTION"]
    for row in inst.lengths:
        lines.append(" ".join(str(x) for x in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators

FAMILIES = ("euclidean-grid", "random-euclidean", "graph-metric")


def generate_instance(kind: str, n: int, seed: int = 0) -> MetricInstance:
    """Deterministic instance of the given family with s = 0, t = n - 1.

    Euclidean families use TSPLIB rounding; when rounding breaks the triangle
    inequality the lengths are replaced by their shortest-path closure, so every
    generated instance is metric.
    """
    if n < 2:
        raise InstanceError("n must be at least 2")
    if n > MAX_VERTICES:
        raise InstanceError(f"n={n} exceeds the supported maximum of {MAX_VERTICES}")
    rng = np.random.default_rng(seed)
    coords = None
    if kind == "euclidean-grid":
        side = math.isqrt(n - 1) + 1
        coords = [(Fraction(i % side), Fraction(i // side)) for i in range(n)]
        rows = _closed_euclidean(coords)
    elif kind == "random-euclidean":
        pts = rng.integers(0, 1000, size=(n, 2))
        coords = [(Fraction(int(x)), Fraction(int(y))) for x, y in pts]
        rows = _closed_euclidean(coords)
    elif kind == "graph-metric":
        rows = _graph_metric(n, rng)
    else:
        raise InstanceError(f"unknown family {kind!r}; choose from {', '.join(FAMILIES)}")
    return MetricInstance(rows, 0, n - 1, f"{kind}-n{n}-s{seed}",
                          tuple(coords) if coords else None)


def _closed_euclidean(coords) -> tuple[tuple[Fraction, ...], ...]:
    n = len(coords)
    rows = [[Fraction(euc_2d(coords[a], coords[b])) for b in range(n)] for a in range(n)]
    if triangle_violation(rows) is not None:
        return metric_closure(rows)
    return tuple(tuple(r) for r in rows)


def _graph_metric(n: int, rng: np.random.Generator) -> tuple[tuple[Fraction, ...], ...]:
    # random spanning tree (attach each vertex to an earlier one) plus extra edges
    adj = [set() for _ in range(n)]
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(0, i)])
        adj[a].add(b)
        adj[b].add(a)
    extra = rng.random((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            if extra[a, b] < 2.0 / n:
                adj[a].add(b)
                adj[b].add(a)
    rows = []
    for src in range(n):
        dist = [-1] * n
        dist[src] = 0
        frontier = [src]
        while frontier:
            nxt = []
            for a in frontier:
                for b in adj[a]:
                    if dist[b] < 0:
                        dist[b] = dist[a] + 1
                        nxt.append(b)
            frontier = nxt
        rows.append(tuple(Fraction(d) for d in dist))
    return tuple(rows)
