"""Experiment harnesses and their file outputs.

* :func:`run_plan`        -- one planner on one scenario; trajectory CSV and search-tree JSONL
* :func:`run_bench`       -- lazy vs eager over a scenario suite (T, N, D table)
* :func:`run_sample_eval` -- useful-sample ratio and endpoint spread per control strategy
* :func:`write_esdf_csv`  -- flat dump of a scenario's distance field
"""

from __future__ import annotations

import csv
import importlib.resources
import io
import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .control_sampling import STRATEGIES, generate_control_set, sampling_metrics
from .dynamics import State
from .errors import InvalidInputError, ScenarioError
from .planner import PlanResult, plan
from .scenario import Scenario, load_scenario
from .world import DistanceField

PLANNERS = ("lazy", "eager")

__all__ = [
    "PLANNERS",
    "run_plan",
    "trajectory_rows",
    "write_trajectory_csv",
    "tree_records",
    "write_tree_jsonl",
    "BenchRow",
    "BenchReport",
    "run_bench",
    "load_suite",
    "SampleRow",
    "run_sample_eval",
    "sample_eval_medians",
    "sample_eval_csv",
    "sample_eval_table",
    "write_esdf_csv",
    "data_path",
]


def data_path(name: str = "") -> Path:
    """Path to a bundled scenario file or directory, e.g. ``data_path("suite")``."""
    return Path(str(importlib.resources.files("lazymp") / "data")) / name


def _fmt(x: float) -> str:
    return repr(float(x))


def trajectory_rows(result: PlanResult) -> list[list[float]]:
    """One row per sample: ``t``, every derivative block, then the control."""
    if not result.trajectory:
        d = result.start.derivs
        return [[0.0, *d.reshape(-1).tolist(), 0.0, 0.0, 0.0]]
    rows = []
    t0 = 0.0
    for i, e in enumerate(result.trajectory):
        u = e.control.tolist()
        # shared boundary sample is emitted once, by the earlier edge
        start = 0 if i == 0 else 1
        for t, s in zip(e.times[start:], e.samples[start:]):
            rows.append([t0 + float(t), *s.reshape(-1).tolist(), *u])
        t0 += e.tau
    return rows


def _trajectory_header(order: int) -> list[str]:
    names = ["", "v", "a", "j", "s"]
    cols = ["t"]
    for k in range(order):
        prefix = names[k] if k < len(names) else f"d{k}"
        cols += [f"{prefix}{ax}" for ax in "xyz"]
    return cols + ["ux", "uy", "uz"]


def write_trajectory_csv(result: PlanResult, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(_trajectory_header(result.start.order))
        for row in trajectory_rows(result):
            w.writerow([_fmt(v) for v in row])


def tree_records(result: PlanResult) -> list[dict]:
    out = []
    for node, edge in result.tree:
        total = None if edge.cost is None or not math.isfinite(edge.cost.total) else edge.cost.total
        out.append(
            {
                "id": node.id,
                "parent": node.parent.id,
                "start": edge.samples[0, 0].tolist(),
                "end": edge.samples[-1, 0].tolist(),
                "control": edge.control.tolist(),
                "eval_status": str(edge.eval_status),
                "cost": total,
            }
        )
    return out


def write_tree_jsonl(result: PlanResult, path):
    with open(path, "w") as fh:
        for rec in tree_records(result):
            fh.write(json.dumps(rec) + "\n")


def run_plan(scenario: Scenario, planner: str = "lazy", out_dir=None) -> PlanResult:
    """Plan on ``scenario``; with ``out_dir`` also write
    ``<name>_<planner>_trajectory.csv``, ``..._tree.jsonl`` and ``..._summary.json``."""
    if planner not in PLANNERS:
        raise InvalidInputError(f"unknown planner {planner!r}; expected one of {PLANNERS}")
    args, kwargs = scenario.problem().planner_args()
    result = plan(*args, lazy=planner == "lazy", **kwargs)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        stem = f"{scenario.name}_{planner}"
        write_trajectory_csv(result, out / f"{stem}_trajectory.csv")
        write_tree_jsonl(result, out / f"{stem}_tree.jsonl")
        summary = {
            "scenario": scenario.name,
            "planner": planner,
            "config_hash": scenario.config_hash(),
            "status": str(result.status),
            "cost": result.cost if math.isfinite(result.cost) else None,
            "edges": len(result.trajectory),
            **asdict(result.metrics),
        }
        (out / f"{stem}_summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    return result


@dataclass
class BenchRow:
    scenario: str
    planner: str
    status: str
    T_ms: float
    N: int
    D: float
    expansions: int
    partial_evals: int
    full_evals: int
    cost: float
    config_hash: str


_AGG_FIELDS = ("T_ms", "N", "D", "expansions", "partial_evals", "full_evals")


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    def for_planner(self, planner: str) -> list[BenchRow]:
        return [r for r in self.rows if r.planner == planner]

    def aggregate(self) -> dict[str, dict[str, float]]:
        """Per-planner means of every metric column, recomputed from rows."""
        agg = {}
        for p in PLANNERS:
            rows = self.for_planner(p)
            if rows:
                agg[p] = {f: statistics.fmean(getattr(r, f) for r in rows) for f in _AGG_FIELDS}
                agg[p]["reached"] = sum(r.status == "reached_goal" for r in rows) / len(rows)
        return agg

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        names = list(BenchRow.__dataclass_fields__)
        w.writerow(names)
        for r in self.rows:
            w.writerow([getattr(r, n) for n in names])
        return buf.getvalue()

    def write_csv(self, path):
        Path(path).write_text(self.to_csv())

    def format_table(self) -> str:
        agg = self.aggregate()
        label = {"lazy": "Lazy", "eager": "MP-A*"}
        lines = [f"{'':8s}{'T':>10s}{'N':>10s}{'D':>8s}{'full':>10s}{'partial':>10s}"]
        for p in ("eager", "lazy"):
            if p in agg:
                a = agg[p]
                lines.append(
                    f"{label[p]:8s}{a['T_ms']:10.2f}{a['N']:10.0f}{a['D']:8.2f}"
                    f"{a['full_evals']:10.0f}{a['partial_evals']:10.0f}"
                )
        return "\n".join(lines)


def load_suite(suite_dir) -> list[Scenario]:
    paths = sorted(Path(suite_dir).glob("*.json"))
    if not paths:
        raise ScenarioError(f"{suite_dir}: no scenario files")
    out = []
    for p in paths:
        try:
            out.append(load_scenario(p))
        except ScenarioError as exc:
            raise ScenarioError(f"suite aborted at {p.name}: {exc}") from exc
    return sorted(out, key=lambda s: s.name)


def run_bench(scenarios, repetitions: int = 1) -> BenchReport:
    """Run both planners ``repetitions`` times per scenario.

    Search outputs are deterministic, so N and D come from the first run and
    only T is averaged.
    """
    if repetitions < 1:
        raise InvalidInputError("repetitions must be >= 1")
    report = BenchReport()
    for sc in sorted(scenarios, key=lambda s: s.name):
        args, kwargs = sc.problem().planner_args()
        h = sc.config_hash()
        for p in PLANNERS:
            times = []
            first = None
            for _ in range(repetitions):
                res = plan(*args, lazy=p == "lazy", record=False, **kwargs)
                times.append(res.metrics.T_ms)
                first = first or res
            m = first.metrics
            report.rows.append(
                BenchRow(
                    scenario=sc.name,
                    planner=p,
                    status=str(first.status),
                    T_ms=statistics.fmean(times),
                    N=m.N,
                    D=m.D,
                    expansions=m.expansions,
                    partial_evals=m.partial_evals,
                    full_evals=m.full_evals,
                    cost=first.cost,
                    config_hash=h,
                )
            )
    return report


@dataclass(frozen=True)
class SampleRow:
    strategy: str
    M: int
    seed: int
    alpha: float
    L_m: float

    @property
    def L_cm(self) -> float:
        return 100.0 * self.L_m


def run_sample_eval(
    strategies=STRATEGIES,
    M: int = 125,
    seeds=range(20),
    *,
    tau: float = 1.0,
    u_max: float = 1.0,
    threshold: float = 0.1,
    start: State | None = None,
) -> list[SampleRow]:
    """Sampling metrics for every (strategy, seed) from a rest start by default."""
    strategies = list(strategies)
    for s in strategies:
        if s not in STRATEGIES:
            raise InvalidInputError(f"unknown strategy {s!r}; expected one of {STRATEGIES}")
    if not strategies:
        raise InvalidInputError("at least one strategy is required")
    start = start or State.at_rest((0.0, 0.0, 0.0))
    rows = []
    for strat in strategies:
        for seed in seeds:
            cs = generate_control_set(strat, M, u_max, seed)
            m = sampling_metrics(start, cs, tau, threshold)
            rows.append(SampleRow(strat, M, int(seed), m.alpha, m.L))
    return rows


def sample_eval_medians(rows: list[SampleRow]) -> dict[str, tuple[float, float]]:
    out = {}
    for strat in dict.fromkeys(r.strategy for r in rows):
        sel = [r for r in rows if r.strategy == strat]
        out[strat] = (statistics.median(r.alpha for r in sel), statistics.median(r.L_m for r in sel))
    return out


def sample_eval_csv(rows: list[SampleRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["strategy", "M", "seed", "alpha", "L_m", "L_cm"])
    for r in rows:
        w.writerow([r.strategy, r.M, r.seed, _fmt(r.alpha), _fmt(r.L_m), _fmt(r.L_cm)])
    return buf.getvalue()


def sample_eval_table(rows: list[SampleRow]) -> str:
    med = sample_eval_medians(rows)
    label = {"random": "Random", "uniform": "Uniform", "normal": "Normal"}
    cols = list(med)
    lines = [f"{'':10s}" + "".join(f"{label.get(c, c):>12s}" for c in cols)]
    lines.append(f"{'alpha':10s}" + "".join(f"{100 * med[c][0]:11.1f}%" for c in cols))
    lines.append(f"{'L [m]':10s}" + "".join(f"{med[c][1]:12.4f}" for c in cols))
    lines.append(f"{'L [cm]':10s}" + "".join(f"{100 * med[c][1]:12.2f}" for c in cols))
    return "\n".join(lines)


def write_esdf_csv(field: DistanceField, path):
    d = field.distance
    idx = np.indices(d.shape).reshape(3, -1).T
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x_index", "y_index", "z_index", "distance_m"])
        for (i, j, k), v in zip(idx.tolist(), d.reshape(-1).tolist()):
            w.writerow([i, j, k, _fmt(v)])
