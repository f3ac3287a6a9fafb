"""Exact rational linear programming with a row-generation driver.

``solve`` runs a two-phase primal simplex on a dense tableau of ``gmpy2.mpq``
entries. Pricing is Dantzig's rule, switching to Bland's rule after a streak of
degenerate pivots, which keeps the method finite. ``solve_with_separation``
keeps the tableau between rounds: each violated row is expressed in the current
basis and enters with an artificial variable, so a round restarts from the
previous optimal basis rather than from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

GE = ">="
EQ = "=="

ZERO = mpq(0)
ONE = mpq(1)

DEFAULT_BIT_LIMIT = 4096
DEGENERATE_STREAK = 30


class LPError(RuntimeError):
    pass


class SeparationError(LPError):
    """An oracle returned a row the candidate point does not violate."""


class LPResourceError(LPError):
    """Rational entries outgrew the configured bit-size guard."""


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


@dataclass(frozen=True)
class Row:
    coeffs: Mapping[Hashable, Fraction]
    relation: str
    rhs: Fraction

    def __post_init__(self):
        if self.relation not in (GE, EQ):
            raise ValueError(f"relation must be '>=' or '==', got {self.relation!r}")

    def activity(self, point: Mapping[Hashable, Fraction]) -> Fraction:
        return sum((Fraction(c) * point.get(v, 0) for v, c in self.coeffs.items()), Fraction(0))

    def satisfied_by(self, point: Mapping[Hashable, Fraction]) -> bool:
        act = self.activity(point)
        return act >= self.rhs if self.relation == GE else act == self.rhs


class LinearProgram:
    """min objective·x subject to rows, x >= 0.

    The order of ``objective`` fixes the variable order, which the pivot rule
    uses for tie-breaking.
    """

    def __init__(self, objective: Mapping[Hashable, object]):
        self.objective = {v: Fraction(c) for v, c in objective.items()}
        self.variables = list(self.objective)
        self.rows: list[Row] = []

    def add_row(self, coeffs: Mapping[Hashable, object], relation: str, rhs) -> Row:
        unknown = [v for v in coeffs if v not in self.objective]
        if unknown:
            raise ValueError(f"row references undeclared variables {unknown[:3]}")
        row = Row({v: Fraction(c) for v, c in coeffs.items() if c}, relation, Fraction(rhs))
        self.rows.append(row)
        return row

    def copy(self) -> "LinearProgram":
        out = LinearProgram(self.objective)
        out.rows = list(self.rows)
        return out


@dataclass
class LPSolution:
    status: str
    point: dict[Hashable, Fraction] | None = None
    value: Fraction | None = None
    rounds: int = 0
    pivots: int = 0
    added_rows: list[Row] = field(default_factory=list)

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    """Dense simplex tableau; columns are structural vars, then slacks/artificials."""

    def __init__(self, costs: Sequence[mpq], bit_limit: int):
        self.nv = len(costs)
        self.cost = list(costs)
        self.kind = ["x"] * self.nv
        self.rows: list[list[mpq]] = []
        self.rhs: list[mpq] = []
        self.basis: list[int] = []
        self.bit_limit = bit_limit
        self.pivots = 0
        self.dead = False

    def _append_column(self, kind: str) -> int:
        for row in self.rows:
            row.append(ZERO)
        self.kind.append(kind)
        self.cost.append(ZERO)
        return len(self.kind) - 1

    def add_row(self, coeffs: Mapping[int, mpq], relation: str, rhs: mpq) -> None:
        slack = self._append_column("s") if relation == GE else None
        row = [ZERO] * len(self.kind)
        for j, c in coeffs.items():
            row[j] = c
        if slack is not None:
            row[slack] = -ONE
        b = rhs
        for i, bcol in enumerate(self.basis):
            f = row[bcol]
            if f:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        row[j] -= f * v
                b -= f * self.rhs[i]
        if slack is not None and b <= 0:
            self.rows.append([-v for v in row])
            self.rhs.append(-b)
            self.basis.append(slack)
            return
        if b < 0:
            row = [-v for v in row]
            b = -b
        if not any(row):
            if b:
                self.dead = True
            return
        art = self._append_column("a")
        row.append(ONE)
        self.rows.append(row)
        self.rhs.append(b)
        self.basis.append(art)

    def _pivot(self, r: int, c: int) -> list[int]:
        prow = self.rows[r]
        p = prow[c]
        if p != ONE:
            inv = ONE / p
            prow = [v * inv if v else v for v in prow]
            self.rows[r] = prow
            self.rhs[r] *= inv
        nz = [j for j, v in enumerate(prow) if v]
        br = self.rhs[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
                self.rhs[i] -= f * br
        self.basis[r] = c
        self.pivots += 1
        if br and (br.numerator.bit_length() > self.bit_limit or br.denominator.bit_length() > self.bit_limit):
            raise LPResourceError(f"rational entry exceeded {self.bit_limit} bits")
        return nz

    def _optimize(self, cost: Sequence[mpq], allowed: Sequence[bool]) -> str:
        d = list(cost)
        for i, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb:
                for j, v in enumerate(self.rows[i]):
                    if v:
                        d[j] -= cb * v
        streak = 0
        ncols = len(d)
        while True:
            enter = -1
            if streak >= DEGENERATE_STREAK:
                for j in range(ncols):
                    if allowed[j] and d[j] < 0:
                        enter = j
                        break
            else:
                best = ZERO
                for j in range(ncols):
                    if allowed[j] and d[j] < best:
                        best, enter = d[j], j
            if enter < 0:
                return OPTIMAL
            leave, ratio = -1, None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    r = self.rhs[i] / a
                    if ratio is None or r < ratio or (r == ratio and self.basis[i] < self.basis[leave]):
                        leave, ratio = i, r
            if leave < 0:
                return UNBOUNDED
            nz = self._pivot(leave, enter)
            f = d[enter]
            prow = self.rows[leave]
            for j in nz:
                d[j] -= f * prow[j]
            streak = streak + 1 if ratio == 0 else 0

    def objective_value(self, cost: Sequence[mpq]) -> mpq:
        return sum((cost[b] * v for b, v in zip(self.basis, self.rhs)), ZERO)

    def solve(self) -> str:
        if self.dead:
            return INFEASIBLE
        arts = [k == "a" for k in self.kind]
        if any(arts):
            phase1 = [ONE if a else ZERO for a in arts]
            self._optimize(phase1, [True] * len(arts))
            if self.objective_value(phase1) > 0:
                self.dead = True
                return INFEASIBLE
            self._drop_artificials()
        return self._optimize(self.cost, [True] * len(self.kind))

    def _drop_artificials(self) -> None:
        i = 0
        while i < len(self.rows):
            if self.kind[self.basis[i]] == "a":
                row = self.rows[i]
                j = next((j for j, v in enumerate(row) if v and self.kind[j] != "a"), None)
                if j is None:
                    del self.rows[i], self.rhs[i], self.basis[i]
                    continue
                self._pivot(i, j)
            i += 1
        keep = [j for j, k in enumerate(self.kind) if k != "a"]
        if len(keep) == len(self.kind):
            return
        remap = {j: new for new, j in enumerate(keep)}
        self.rows = [[row[j] for j in keep] for row in self.rows]
        self.kind = [self.kind[j] for j in keep]
        self.cost = [self.cost[j] for j in keep]
        self.basis = [remap[b] for b in self.basis]

    def point(self) -> list[mpq]:
        vals = [ZERO] * self.nv
        for bcol, v in zip(self.basis, self.rhs):
            if bcol < self.nv:
                vals[bcol] = v
        return vals


class _Engine:
    def __init__(self, lp: LinearProgram, bit_limit: int):
        self.lp = lp
        self.index = {v: j for j, v in enumerate(lp.variables)}
        self.tab = _Tableau([_mpq(lp.objective[v]) for v in lp.variables], bit_limit)
        for row in lp.rows:
            self.add(row)

    def add(self, row: Row) -> None:
        coeffs = {self.index[v]: _mpq(c) for v, c in row.coeffs.items()}
        self.tab.add_row(coeffs, row.relation, _mpq(row.rhs))

    def run(self) -> LPSolution:
        status = self.tab.solve()
        if status != OPTIMAL:
            return LPSolution(status, pivots=self.tab.pivots)
        vals = self.tab.point()
        point = {v: _frac(q) for v, q in zip(self.lp.variables, vals) if q}
        value = sum((self.lp.objective[v] * x for v, x in point.items()), Fraction(0))
        return LPSolution(OPTIMAL, point, value, pivots=self.tab.pivots)


def solve(lp: LinearProgram, *, bit_limit: int = DEFAULT_BIT_LIMIT) -> LPSolution:
    """Exact optimum of ``lp`` at a basic feasible solution."""
    return _Engine(lp, bit_limit).run()


Oracle = Callable[[Mapping[Hashable, Fraction]], "Row | Sequence[Row] | None"]


def solve_with_separation(lp: LinearProgram, oracles: Iterable[Oracle], *,
                          bit_limit: int = DEFAULT_BIT_LIMIT, max_rounds: int = 100_000) -> LPSolution:
    """Cutting-plane loop: solve, ask the oracles in order, add the first violation, repeat.

    An oracle returns ``None`` (or an empty sequence) when it certifies the
    candidate, otherwise one violated row or several. Rows it emits are also
    appended to ``lp.rows``.
    """
    oracles = list(oracles)
    engine = _Engine(lp, bit_limit)
    added: list[Row] = []
    rounds = 0
    while True:
        sol = engine.run()
        sol.rounds, sol.added_rows = rounds, added
        if not sol.optimal:
            return sol
        found: Sequence[Row] = ()
        for oracle in oracles:
            out = oracle(sol.point)
            if out:
                found = [out] if isinstance(out, Row) else list(out)
                break
        if not found:
            return sol
        rounds += 1
        if rounds > max_rounds:
            raise LPError(f"separation did not converge within {max_rounds} rounds")
        for row in found:
            if row.satisfied_by(sol.point):
                raise SeparationError(f"oracle returned a row the candidate satisfies: {row}")
            unknown = [v for v in row.coeffs if v not in engine.index]
            if unknown:
                raise SeparationError(f"oracle row references undeclared variables {unknown[:3]}")
            lp.rows.append(row)
            added.append(row)
            engine.add(row)
