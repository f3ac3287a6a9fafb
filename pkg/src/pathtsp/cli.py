"""Command-line front end: ``pathtsp solve | bench | gen``.

Exit codes: 0 success, 2 instance or parse error, 3 audit failure,
4 resource guard (rational size or instance size limits).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .instance import FAMILIES, InstanceError, format_instance, generate_instance, parse_instance
from .lp import LPResourceError
from .oracles import EXACT_LIMIT
from .pipeline import AUDIT_LEVELS, MODES, PipelineError, SolveOptions, format_summary, run_batch, \
    run_pipeline

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_AUDIT = 3
EXIT_RESOURCE = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pathtsp", description="Path TSP 3/2-approximation with exact audits")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve one TSPLIB instance")
    s.add_argument("--instance", required=True, type=Path)
    s.add_argument("--source", required=True, type=int)
    s.add_argument("--sink", required=True, type=int)
    s.add_argument("--mode", choices=MODES, default="bgood")
    s.add_argument("--cut-enum", choices=("brute", "contraction", "auto"), default="auto")
    s.add_argument("--audit", choices=AUDIT_LEVELS, default="fast")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--metric-closure", action="store_true",
                   help="replace lengths by shortest-path distances instead of rejecting non-metric input")
    s.add_argument("--json", type=Path, dest="json_out")

    b = sub.add_parser("bench", help="run a seeded batch and print a summary table")
    b.add_argument("--family", choices=FAMILIES, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--count", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--modes", nargs="+", choices=MODES, default=list(MODES))
    b.add_argument("--audit", choices=AUDIT_LEVELS, default="fast")
    b.add_argument("--workers", type=int, default=None)
    b.add_argument("--json", type=Path, dest="json_out")

    g = sub.add_parser("gen", help="write a seeded instance in TSPLIB format")
    g.add_argument("--family", choices=FAMILIES, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", type=Path, required=True)
    return p


def _print_report(report) -> None:
    print(f"{report.name}: n={report.n} s={report.s} t={report.t} mode={report.mode}")
    for label, val in (("l(x*)", report.lx), ("d*", report.d_star), ("l(T)", report.lT),
                       ("l(J)", report.lJ), ("final", report.final), ("OPT", report.opt),
                       ("final/OPT", report.ratio_opt)):
        if val is not None:
            print(f"  {label:<10} {val}  ({float(val):.6g})")
    if report.b_count is not None:
        print(f"  |B(x*)|    {report.b_count}  ({report.cut_method})")
    print(f"  path       {' '.join(map(str, report.path))}")
    for a in report.audits:
        print(f"  [{'ok' if a.passed else 'FAIL'}] {a.name}{'' if a.passed else ': ' + a.detail}")


def _solve(args) -> int:
    try:
        text = args.instance.read_text()
        inst = parse_instance(text, args.source, args.sink, metric_closure_fix=args.metric_closure)
    except (OSError, InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.mode == "exact" and inst.n > EXACT_LIMIT:
        print(f"error: exact mode supports n <= {EXACT_LIMIT}", file=sys.stderr)
        return EXIT_RESOURCE
    opts = SolveOptions(mode=args.mode, cut_enum=args.cut_enum, audit=args.audit, seed=args.seed,
                        oracle=None if inst.n <= EXACT_LIMIT else False)
    try:
        report = run_pipeline(inst, opts, seed=args.seed)
    except PipelineError as exc:
        code = EXIT_RESOURCE if isinstance(exc.cause, LPResourceError) else 1
        print(f"error in {exc.step}: {exc.cause}", file=sys.stderr)
        return code
    _print_report(report)
    if args.json_out:
        args.json_out.write_text(report.to_json() + "\n")
    return EXIT_OK if report.audits_passed else EXIT_AUDIT


def _bench(args) -> int:
    if args.count < 0 or args.n < 2:
        print("error: need count >= 0 and n >= 2", file=sys.stderr)
        return EXIT_INPUT
    if "exact" in args.modes and args.n > EXACT_LIMIT:
        print(f"error: exact mode supports n <= {EXACT_LIMIT}", file=sys.stderr)
        return EXIT_RESOURCE
    reports, summary = run_batch(args.family, args.n, args.count, args.seed, args.modes,
                                 SolveOptions(audit=args.audit), workers=args.workers)
    print(format_summary(summary))
    for r in reports:
        if r.error:
            print(f"  seed {r.seed} {r.mode}: failed in {r.error_step}: {r.error}")
    if args.json_out:
        payload = {"schema": "pathtsp-report/1", "reports": [r.to_dict() for r in reports],
                   "summary": [{"mode": s.mode, "count": s.count, "failures": s.failures,
                                "max_ratio": None if s.max_ratio is None else str(s.max_ratio),
                                "mean_ratio": None if s.mean_ratio is None else str(s.mean_ratio)}
                               for s in summary]}
        args.json_out.write_text(json.dumps(payload, sort_keys=True) + "\n")
    if any(r.error for r in reports):
        return 1
    return EXIT_OK if all(r.audits_passed for r in reports) else EXIT_AUDIT


def _gen(args) -> int:
    try:
        inst = generate_instance(args.family, args.n, args.seed)
    except (InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    args.out.write_text(format_instance(inst))
    print(f"wrote {args.out} (n={inst.n}, s={inst.s}, t={inst.t})")
    return EXIT_OK


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return {"solve": _solve, "bench": _bench, "gen": _gen}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
