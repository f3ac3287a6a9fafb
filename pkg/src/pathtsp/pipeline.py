"""End-to-end solve with audits, JSON reports and seeded batches."""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from typing import Any, Sequence

from . import oracles
from .bgood import shortest_bgood_point
from .cuts import DEFAULT_CONTRACT_TO, DEFAULT_TRIAL_FACTOR, contraction_trials, enumerate_b_cuts, \
    is_chain, narrow_cuts
from .heldkarp import HeldKarpSpec, separate_point, solve_held_karp
from .instance import MetricInstance, generate_instance, path_length
from .parity import euler_shortcut, hoogeveen_baseline, min_q_join, mst_on_support, q_target

SCHEMA = "pathtsp-report/1"
MODES = ("bgood", "hoogeveen", "exact")
AUDIT_LEVELS = ("off", "fast", "full")
ORACLE_LIMIT = 14
EXHAUSTIVE_LIMIT = 14

_RATIONAL_FIELDS = ("lx", "d_star", "ly", "lT", "lJ", "final", "opt", "ratio_opt", "ratio_lp")


class PipelineError(RuntimeError):
    def __init__(self, step: str, cause: BaseException):
        super().__init__(f"{step}: {cause}")
        self.step = step
        self.cause = cause


@dataclass
class SolveOptions:
    mode: str = "bgood"
    cut_enum: str = "auto"
    audit: str = "fast"
    oracle: bool | None = None       # None: run the exact solver when n <= ORACLE_LIMIT
    seed: int = 0
    trial_factor: float = DEFAULT_TRIAL_FACTOR
    contract_to: int = DEFAULT_CONTRACT_TO
    strategy: str = "astar"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.audit not in AUDIT_LEVELS:
            raise ValueError(f"audit must be one of {AUDIT_LEVELS}, got {self.audit!r}")


@dataclass
class Audit:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class SolveReport:
    name: str
    n: int
    s: int
    t: int
    mode: str
    seed: int | None = None
    family: str | None = None
    lx: Fraction | None = None
    support_size: int | None = None
    b_count: int | None = None
    cut_method: str | None = None
    cut_trials: int | None = None
    d_star: Fraction | None = None
    ly: Fraction | None = None
    lT: Fraction | None = None
    q_size: int | None = None
    lJ: Fraction | None = None
    final: Fraction | None = None
    path: list[int] = field(default_factory=list)
    opt: Fraction | None = None
    ratio_opt: Fraction | None = None
    ratio_lp: Fraction | None = None
    lp_solves: int | None = None
    audits: list[Audit] = field(default_factory=list)
    times: dict[str, float] = field(default_factory=dict)
    error: str | None = None
    error_step: str | None = None

    @property
    def audits_passed(self) -> bool:
        return all(a.passed for a in self.audits)

    def audit(self, name: str) -> Audit | None:
        return next((a for a in self.audits if a.name == name), None)

    def to_dict(self, *, with_times: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {"schema": SCHEMA}
        for f in fields(self):
            val = getattr(self, f.name)
            if f.name in _RATIONAL_FIELDS:
                out[f.name] = None if val is None else {"exact": f"{val.numerator}/{val.denominator}",
                                                       "float": float(val)}
            elif f.name == "audits":
                out[f.name] = [asdict(a) for a in val]
            elif f.name == "times":
                if with_times:
                    out[f.name] = dict(val)
            else:
                out[f.name] = val
        return out

    def to_json(self, *, with_times: bool = True) -> str:
        return json.dumps(self.to_dict(with_times=with_times), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SolveReport":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unsupported report schema {data.get('schema')!r}")
        kwargs = {}
        for f in fields(cls):
            if f.name not in data:
                continue
            val = data[f.name]
            if f.name in _RATIONAL_FIELDS and val is not None:
                val = Fraction(val["exact"])
            elif f.name == "audits":
                val = [Audit(**a) for a in val]
            kwargs[f.name] = val
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "SolveReport":
        return cls.from_dict(json.loads(text))


class _Clock:
    def __init__(self, times: dict[str, float]):
        self.times = times

    def run(self, step: str, fn, *args, **kwargs):
        start = time.perf_counter()
        try:
            return fn(*args, **kwargs)
        except PipelineError:
            raise
        except Exception as exc:
            raise PipelineError(step, exc) from exc
        finally:
            self.times[step] = self.times.get(step, 0.0) + time.perf_counter() - start


def _check(report: SolveReport, name: str, passed: bool, detail: str = "") -> None:
    report.audits.append(Audit(name, bool(passed), "" if passed else detail))


def run_pipeline(inst: MetricInstance, options: SolveOptions | None = None, *,
                 seed: int | None = None, family: str | None = None) -> SolveReport:
    """Solve one instance in the selected mode and audit the result.

    Module failures are re-raised as :class:`PipelineError` tagged with the step.
    """
    opt_ = options or SolveOptions()
    report = SolveReport(inst.name, inst.n, inst.s, inst.t, opt_.mode, seed, family)
    clock = _Clock(report.times)
    want_oracle = opt_.oracle if opt_.oracle is not None else inst.n <= ORACLE_LIMIT
    if want_oracle or opt_.mode == "exact":
        report.opt, exact_path = clock.run("oracle", oracles.exact_path_tsp, inst)

    if opt_.mode == "exact":
        report.path = list(exact_path)
        report.final = report.opt
    elif opt_.mode == "hoogeveen":
        report.path = list(clock.run("hoogeveen", hoogeveen_baseline, inst))
        report.final = path_length(inst, report.path)
        if opt_.audit != "off":
            x = clock.run("held_karp", solve_held_karp, HeldKarpSpec.top_level(inst)).x
            report.lx = x.length(inst)
    else:
        _run_bgood(inst, opt_, report, clock)

    if report.opt:
        report.ratio_opt = report.final / report.opt
    elif report.opt == 0:
        report.ratio_opt = Fraction(1)
    if report.lx:
        report.ratio_lp = report.final / report.lx
    if opt_.audit != "off" and report.opt is not None:
        bound = {"bgood": Fraction(3, 2), "hoogeveen": Fraction(5, 3), "exact": Fraction(1)}[opt_.mode]
        _check(report, "final <= bound * OPT", report.final <= bound * report.opt,
               f"{report.final} > {bound} * {report.opt}")
    return report


def _run_bgood(inst: MetricInstance, opt_: SolveOptions, report: SolveReport, clock: _Clock) -> None:
    top = HeldKarpSpec.top_level(inst)
    hk = clock.run("held_karp", solve_held_karp, top)
    if not hk.feasible:
        raise PipelineError("held_karp", RuntimeError(f"top-level relaxation is {hk.status}"))
    x = hk.x
    report.lx = hk.value
    report.support_size = len(x)

    method = opt_.cut_enum
    if method == "auto":
        method = "brute" if inst.n <= 22 else "contraction"
    report.cut_method = method
    report.cut_trials = (contraction_trials(inst.n, opt_.trial_factor, opt_.contract_to)
                         if method == "contraction" else None)
    cuts = clock.run("cut_enum", enumerate_b_cuts, inst, x, method, seed=opt_.seed,
                     factor=opt_.trial_factor, contract_to=opt_.contract_to)
    family = [wc.cut for wc in cuts]
    report.b_count = len(family)

    res = clock.run("dp", shortest_bgood_point, inst, family, strategy=opt_.strategy)
    y = res.y
    report.d_star = res.d_star
    report.ly = y.length(inst)
    report.lp_solves = res.lp_solves

    tree = clock.run("tree", mst_on_support, inst, y)
    report.lT = tree.length(inst)
    q = q_target(inst, tree)
    report.q_size = len(q.q)
    join = clock.run("join", min_q_join, inst, q)
    report.lJ = sum((inst.lengths[a][b] for a, b in join), Fraction(0))
    report.path = list(clock.run("shortcut", euler_shortcut, inst, tree, join))
    report.final = path_length(inst, report.path)

    if opt_.audit == "off":
        return
    start = time.perf_counter()
    n = inst.n
    _check(report, "d_star = l(y)", res.d_star == report.ly, f"{res.d_star} != {report.ly}")
    _check(report, "|supp(x*)| <= 2n - 3", len(x) <= max(1, 2 * n - 3), f"{len(x)} edges")
    _check(report, "|B| <= n^4", len(family) <= n ** 4, f"{len(family)} cuts")
    _check(report, "cut loads in [1, 3)", all(1 <= wc.load < 3 for wc in cuts),
           str([(str(wc.cut), str(wc.load)) for wc in cuts if not 1 <= wc.load < 3][:3]))
    _check(report, "narrow cuts form a chain", is_chain(narrow_cuts(cuts)))
    row = separate_point(top, y)
    _check(report, "y passes separation", row is None, str(row))
    bad = oracles.verify_bgood(inst, y, family)
    _check(report, "y is B-good", bad is None, str(bad))
    one_cuts = {c.bits for c, _ in res.integral_one_cuts}
    tight = {c.bits for c in family if y.load(c) == 1}
    _check(report, "integral-one cuts are the load-1 cuts", one_cuts == tight)
    _check(report, "integral-one cuts cross T once",
           all(sum((c.bits >> a & 1) != (c.bits >> b & 1) for a, b in tree.edges) == 1
               for c, _ in res.integral_one_cuts))
    _check(report, "l(T) <= l(y)", report.lT <= report.ly, f"{report.lT} > {report.ly}")
    quarter = (report.lx + report.ly) / 4
    _check(report, "l(J) <= (l(x*) + l(y)) / 4", report.lJ <= quarter, f"{report.lJ} > {quarter}")
    _check(report, "final <= l(T) + l(J)", report.final <= report.lT + report.lJ)
    _check(report, "final <= 3/2 l(x*)", report.final <= Fraction(3, 2) * report.lx,
           f"{report.final} > 3/2 * {report.lx}")
    if report.opt is not None:
        _check(report, "l(y) <= OPT", report.ly <= report.opt, f"{report.ly} > {report.opt}")
    if opt_.audit == "full" and n <= EXHAUSTIVE_LIMIT:
        bad = oracles.verify_in_phk(inst, x)
        _check(report, "x* in P_HK (exhaustive)", bad is None, str(bad))
        bad = oracles.verify_in_phk(inst, y)
        _check(report, "y in P_HK (exhaustive)", bad is None, str(bad))
        half_z = (x + y).scale(Fraction(1, 4))
        bad = oracles.verify_join_dominant(inst, half_z, q.q)
        _check(report, "z/2 in Q_T-join dominant", bad is None, str(bad))
    report.times["audit"] = time.perf_counter() - start


# ---------------------------------------------------------------------------
# batches

@dataclass
class ModeSummary:
    mode: str
    count: int
    failures: int
    max_ratio: Fraction | None
    mean_ratio: Fraction | None

    def row(self) -> str:
        mx = "-" if self.max_ratio is None else f"{float(self.max_ratio):.4f}"
        mean = "-" if self.mean_ratio is None else f"{float(self.mean_ratio):.4f}"
        return f"{self.mode:<10} {self.count:>6} {self.failures:>8} {mx:>10} {mean:>10}"


def summarize(reports: Sequence[SolveReport], modes: Sequence[str]) -> list[ModeSummary]:
    out = []
    for mode in modes:
        rows = [r for r in reports if r.mode == mode]
        ratios = [r.ratio_opt for r in rows if r.ratio_opt is not None and r.error is None]
        failures = sum(1 for r in rows if r.error is not None or not r.audits_passed)
        out.append(ModeSummary(mode, len(rows), failures, max(ratios) if ratios else None,
                               sum(ratios, Fraction(0)) / len(ratios) if ratios else None))
    return out


def format_summary(summary: Sequence[ModeSummary]) -> str:
    head = f"{'mode':<10} {'count':>6} {'failures':>8} {'max ratio':>10} {'mean ratio':>10}"
    return "\n".join([head] + [s.row() for s in summary])


def _batch_task(args) -> SolveReport:
    family, n, seed, mode, options = args
    inst = generate_instance(family, n, seed)
    opts = SolveOptions(**{**asdict(options), "mode": mode})
    try:
        return run_pipeline(inst, opts, seed=seed, family=family)
    except PipelineError as exc:
        return SolveReport(inst.name, inst.n, inst.s, inst.t, mode, seed, family,
                           error=str(exc.cause), error_step=exc.step)


def run_batch(family: str, n: int, count: int, seed: int = 0, modes: Sequence[str] = MODES,
              options: SolveOptions | None = None, workers: int | None = None
              ) -> tuple[list[SolveReport], list[ModeSummary]]:
    """One report per (instance, mode), instance i seeded with ``seed + i``; input order kept."""
    options = options or SolveOptions()
    tasks = [(family, n, seed + i, mode, options) for i in range(count) for mode in modes]
    workers = workers or min(len(tasks) or 1, os.cpu_count() or 1)
    if workers <= 1:
        reports = [_batch_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_batch_task, tasks))
    return reports, summarize(reports, modes)
