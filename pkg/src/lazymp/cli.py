"""Command-line entry point: ``lazymp {plan,bench,sample-eval,esdf}``.

Exit codes: 0 success, 1 usage or input error, 2 planning did not reach the goal.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .control_sampling import STRATEGIES
from .errors import LazyMPError
from .planner import PlanStatus
from .scenario import load_scenario

EXIT_OK, EXIT_USAGE, EXIT_PLAN_FAILED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _cmd_plan(args) -> int:
    sc = load_scenario(args.scenario)
    res = bench.run_plan(sc, args.planner, args.out_dir)
    m = res.metrics
    print(
        f"{sc.name} [{args.planner}] {res.status}: cost={res.cost:.6g} edges={len(res.trajectory)} "
        f"T={m.T_ms:.2f}ms N={m.N} D={m.D:.3f}m full={m.full_evals} partial={m.partial_evals} "
        f"config={sc.config_hash()}"
    )
    return EXIT_OK if res.status is PlanStatus.REACHED_GOAL else EXIT_PLAN_FAILED


def _cmd_bench(args) -> int:
    report = bench.run_bench(bench.load_suite(args.suite_dir), args.reps)
    report.write_csv(args.out)
    print(report.format_table())
    return EXIT_OK


def _cmd_sample_eval(args) -> int:
    strategies = [s.strip() for s in args.strategies.split(",") if s.strip()]
    bad = [s for s in strategies if s not in STRATEGIES]
    if bad or not strategies:
        print(f"sample-eval: unknown strategy {bad}; choose from {','.join(STRATEGIES)}", file=sys.stderr)
        return EXIT_USAGE
    rows = bench.run_sample_eval(
        strategies, args.m, range(args.seeds), tau=args.tau, u_max=args.u_max, threshold=args.threshold
    )
    text = bench.sample_eval_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(bench.sample_eval_table(rows), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_OK


def _cmd_esdf(args) -> int:
    sc = load_scenario(args.scenario)
    bench.write_esdf_csv(sc.problem().world, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lazymp", description="Lazy A* over motion primitives")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("plan", help="plan one scenario and dump trajectory/search tree")
    sp.add_argument("scenario")
    sp.add_argument("--planner", choices=bench.PLANNERS, default="lazy")
    sp.add_argument("--out-dir", default=".")
    sp.set_defaults(func=_cmd_plan)

    sp = sub.add_parser("bench", help="compare lazy and eager planners over a suite")
    sp.add_argument("suite_dir")
    sp.add_argument("--reps", type=int, default=3)
    sp.add_argument("--out", default="report.csv")
    sp.set_defaults(func=_cmd_bench)

    sp = sub.add_parser("sample-eval", help="control-sampling quality study")
    sp.add_argument("--strategies", default=",".join(("normal", "uniform", "random")))
    sp.add_argument("--m", type=int, default=125)
    sp.add_argument("--seeds", type=int, default=20)
    sp.add_argument("--tau", type=float, default=1.0)
    sp.add_argument("--u-max", type=float, default=1.0)
    sp.add_argument("--threshold", type=float, default=0.1)
    sp.add_argument("--out", default=None, help="CSV path (default: stdout)")
    sp.set_defaults(func=_cmd_sample_eval)

    sp = sub.add_parser("esdf", help="dump a scenario's distance field as CSV")
    sp.add_argument("scenario")
    sp.add_argument("--out", default="field.csv")
    sp.set_defaults(func=_cmd_esdf)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except LazyMPError as exc:
        print(f"lazymp {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
