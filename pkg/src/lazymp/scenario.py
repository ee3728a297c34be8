"""Scenario files: strict JSON schema, loading, saving and a seeded generator."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .control_sampling import STRATEGIES, ControlSet, generate_control_set
from .dynamics import DynamicLimits, State, within_dynamic_limits
from .edge_eval import CostWeights
from .errors import ScenarioError
from .planner import Budget
from .world import Box, DistanceField, ObstacleSet, build_esdf, rasterize

SCHEMA_VERSION = 1

__all__ = [
    "Scenario",
    "Problem",
    "load_scenario",
    "save_scenario",
    "scenario_from_dict",
    "random_scenario",
]

Vec3 = tuple[float, float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class BoxSpec(_Strict):
    min: Vec3
    max: Vec3

    @model_validator(mode="after")
    def _non_degenerate(self):
        if any(not (hi > lo) for lo, hi in zip(self.min, self.max)):
            raise ValueError(f"degenerate box {self.min} -> {self.max}")
        return self

    def to_box(self) -> Box:
        return Box(self.min, self.max)


class StartSpec(_Strict):
    position: Vec3
    velocity: Vec3 = (0.0, 0.0, 0.0)
    # acceleration, jerk, ... for state order > 2
    higher: list[Vec3] = Field(default_factory=list)


class GoalSpec(_Strict):
    center: Vec3
    radius: float = Field(gt=0)


class LimitsSpec(_Strict):
    v_max: float = Field(3.0, gt=0)
    a_max: float = Field(5.0, gt=0)
    u_max: float = Field(1.0, gt=0)
    higher: list[float] = Field(default_factory=list)


class WeightsSpec(_Strict):
    w_dist: float = Field(1.0, ge=0)
    w_ctrl: float = Field(0.1, ge=0)
    w_obs: float = Field(1.0, ge=0)
    d_safe: float = Field(0.5, ge=0)
    heuristic_weight: float = Field(1.0, ge=1)


class SamplerSpec(_Strict):
    strategy: str = "uniform"
    M: int = Field(27, ge=1)
    seed: int = 0
    tau: float = Field(1.0, gt=0)
    delta_check: Optional[float] = Field(None, gt=0)

    @field_validator("strategy")
    @classmethod
    def _known(cls, v):
        if v not in STRATEGIES:
            raise ValueError(f"unknown strategy {v!r}; expected one of {STRATEGIES}")
        return v

    @model_validator(mode="after")
    def _materialize(self):
        if self.delta_check is None:
            object.__setattr__(self, "delta_check", self.tau / 8)
        if self.delta_check > self.tau:
            raise ValueError("delta_check must not exceed tau")
        return self


class BudgetSpec(_Strict):
    max_pops: Optional[int] = Field(200_000, ge=1)
    max_millis: Optional[float] = Field(None, gt=0)


class Scenario(_Strict):
    version: Literal[1] = SCHEMA_VERSION
    name: str
    bounds: BoxSpec
    resolution: float = Field(gt=0)
    obstacles: list[BoxSpec] = Field(default_factory=list)
    start: StartSpec
    goal: GoalSpec
    limits: LimitsSpec = LimitsSpec()
    weights: WeightsSpec = WeightsSpec()
    sampler: SamplerSpec = SamplerSpec()
    budget: BudgetSpec = BudgetSpec()
    velocity_bins: int = Field(10, ge=1)

    @model_validator(mode="after")
    def _geometry(self):
        b = self.bounds
        for i, o in enumerate(self.obstacles):
            if any(lo < blo for lo, blo in zip(o.min, b.min)) or any(hi > bhi for hi, bhi in zip(o.max, b.max)):
                raise ValueError(f"obstacles[{i}] leaves the world bounds")
        if any(not (lo <= c <= hi) for c, lo, hi in zip(self.goal.center, b.min, b.max)):
            raise ValueError("goal.center lies outside the world bounds")
        if len(self.start.higher) + 1 > 1 + len(self.limits.higher) + 1:
            raise ValueError("start.higher needs a cap for every derivative order in limits.higher")
        return self

    def config_hash(self) -> str:
        blob = json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]

    def problem(self) -> "Problem":
        return Problem(self)


@dataclass(frozen=True)
class Problem:
    """Runtime objects materialised from a :class:`Scenario`."""

    scenario: Scenario

    @cached_property
    def world(self) -> DistanceField:
        s = self.scenario
        obs = ObstacleSet(s.bounds.to_box(), tuple(o.to_box() for o in s.obstacles))
        return build_esdf(rasterize(obs, s.resolution))

    @cached_property
    def start(self) -> State:
        st = self.scenario.start
        return State(np.array([st.position, st.velocity, *st.higher], dtype=float))

    @cached_property
    def control_set(self) -> ControlSet:
        sp = self.scenario.sampler
        return generate_control_set(sp.strategy, sp.M, self.scenario.limits.u_max, sp.seed)

    @property
    def limits(self) -> DynamicLimits:
        lim = self.scenario.limits
        return DynamicLimits(lim.v_max, lim.a_max, lim.u_max, tuple(lim.higher))

    @property
    def weights(self) -> CostWeights:
        return CostWeights(**self.scenario.weights.model_dump())

    @property
    def budget(self) -> Budget:
        b = self.scenario.budget
        return Budget(max_pops=b.max_pops, max_millis=b.max_millis)

    def planner_args(self) -> tuple[tuple, dict]:
        s = self.scenario
        args = (self.start, s.goal.center, s.goal.radius, self.world, self.control_set,
                self.weights, self.limits, self.budget)
        kwargs = dict(tau=s.sampler.tau, delta_check=s.sampler.delta_check, velocity_bins=s.velocity_bins)
        return args, kwargs


def _describe(err: ValidationError) -> str:
    parts = []
    for e in err.errors():
        loc = ".".join(str(p) for p in e["loc"]) or "<root>"
        parts.append(f"{loc}: {e['msg']}")
    return "; ".join(parts)


def scenario_from_dict(data: dict, *, check_start: bool = True) -> Scenario:
    try:
        sc = Scenario.model_validate(data)
    except ValidationError as exc:
        raise ScenarioError(f"invalid scenario: {_describe(exc)}") from exc
    if check_start:
        prob = sc.problem()
        if not prob.world.query(prob.start.position.tolist()) > 0:
            raise ScenarioError("start: start in collision")
        if not within_dynamic_limits(prob.start, prob.limits):
            raise ScenarioError("start: start violates dynamic limits")
    return sc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ScenarioError(f"{path}: no such file") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: parse error: {exc}") from exc
    try:
        return scenario_from_dict(data)
    except ScenarioError as exc:
        raise ScenarioError(f"{path}: {exc}") from exc


def save_scenario(sc: Scenario, path):
    Path(path).write_text(json.dumps(sc.model_dump(mode="json"), indent=2) + "\n")


def random_scenario(
    seed: int,
    *,
    size=(12.0, 12.0, 4.0),
    resolution: float = 0.5,
    occupancy: tuple[float, float] = (0.10, 0.30),
    min_goal_distance: float = 6.0,
    name: str | None = None,
    **overrides,
) -> Scenario:
    """Random boxes filling a target fraction of the voxels, plus a free start
    and goal at least ``min_goal_distance`` apart.

    Defaults: double integrator, 27-sample uniform control grid, ``u_max = 2``,
    ``v_max = 2``, 4 velocity bins. ``overrides`` replace top-level fields.
    """
    rng = np.random.default_rng(seed)
    size = np.asarray(size, dtype=float)
    bounds = Box((0.0, 0.0, 0.0), tuple(size))
    target = rng.uniform(*occupancy)
    while True:
        boxes: list[Box] = []
        frac = 0.0
        while frac < target:
            extent = rng.uniform(0.5, 3.0, 3) * np.array([1.0, 1.0, size[2] / 4.0])
            lo = rng.uniform(0.0, size - 0.5)
            hi = np.minimum(lo + extent, size)
            boxes.append(Box(tuple(lo.round(3)), tuple(hi.round(3))))
            grid = rasterize(ObstacleSet(bounds, tuple(boxes)), resolution)
            frac = grid.occupancy.mean()
        if frac <= occupancy[1]:
            break
    field = build_esdf(grid)
    centers = grid.centers()
    free = np.argwhere(field.distance > resolution)
    for _ in range(10_000):
        a = centers[tuple(free[rng.integers(len(free))])]
        b = centers[tuple(free[rng.integers(len(free))])]
        if np.linalg.norm(a - b) >= min_goal_distance:
            break
    else:
        raise ScenarioError(f"seed {seed}: no start/goal pair {min_goal_distance} m apart")
    data = dict(
        version=SCHEMA_VERSION,
        name=name or f"random_{seed:04d}",
        bounds=dict(min=bounds.lo, max=bounds.hi),
        resolution=resolution,
        obstacles=[dict(min=bx.lo, max=bx.hi) for bx in boxes],
        start=dict(position=tuple(a.tolist())),
        goal=dict(center=tuple(b.tolist()), radius=1.0),
        limits=dict(v_max=2.0, a_max=5.0, u_max=2.0),
        sampler=dict(strategy="uniform", M=27, seed=seed, tau=1.0),
        velocity_bins=4,
    )
    data.update(overrides)
    return scenario_from_dict(data)
