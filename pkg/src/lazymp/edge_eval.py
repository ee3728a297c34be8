"""Motion-primitive edges and their cost model.

An edge's cost has three parts: weighted arclength, control effort, and an
obstacle penalty (the heuristic is the fourth part and lives in node
priorities). Two evaluation levels exist:

* partial -- obstacle penalty from the two endpoint samples only
* full    -- obstacle penalty and dynamic limits over every sample

The obstacle penalty is a max over evaluated samples, so a full evaluation
can only raise an edge's total relative to its partial evaluation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .dynamics import DynamicLimits, State, propagate_exact_batch
from .errors import InvalidInputError
from .world import DistanceField

INF = math.inf

__all__ = [
    "EvalStatus",
    "CostWeights",
    "EdgeCost",
    "MotionEdge",
    "chord_lengths",
    "sample_times",
    "discretize_edge",
    "heuristic",
    "control_cost",
    "obstacle_cost_at",
    "partially_evaluate",
    "fully_evaluate",
]


class EvalStatus(IntEnum):
    UNEVALUATED = 0
    PARTIAL = 1
    FULL = 2

    def __str__(self):
        return self.name.lower()


@dataclass(frozen=True)
class CostWeights:
    w_dist: float = 1.0
    w_ctrl: float = 0.1
    w_obs: float = 1.0
    d_safe: float = 0.5
    heuristic_weight: float = 1.0

    def __post_init__(self):
        for name in ("w_dist", "w_ctrl", "w_obs", "d_safe"):
            if not getattr(self, name) >= 0:
                raise InvalidInputError(f"{name} must be >= 0")
        if not self.heuristic_weight >= 1:
            raise InvalidInputError("heuristic_weight must be >= 1")


@dataclass(frozen=True)
class EdgeCost:
    g_inc: float
    ctrl: float
    obs: float
    total: float
    level: EvalStatus

    @property
    def feasible(self) -> bool:
        return self.total < INF


class MotionEdge:
    """One primitive: ``start`` held at ``control`` for ``tau`` seconds.

    ``samples`` has shape ``(K + 1, n, 3)`` and includes both endpoints.
    """

    __slots__ = ("start", "control", "tau", "times", "samples", "eval_status", "cost", "_length")

    def __init__(
        self,
        start: State,
        control,
        tau: float,
        times: np.ndarray,
        samples: np.ndarray,
        length: float | None = None,
    ):
        self.start = start
        self.control = np.asarray(control, dtype=float)
        self.tau = float(tau)
        self.times = times
        self.samples = samples
        self.eval_status = EvalStatus.UNEVALUATED
        self.cost: EdgeCost | None = None
        self._length = length

    @property
    def end(self) -> State:
        return State(self.samples[-1])

    @property
    def positions(self) -> np.ndarray:
        return self.samples[:, 0, :]

    def arclength(self) -> float:
        """Length of the polyline through the position samples."""
        if self._length is None:
            self._length = float(chord_lengths(self.samples[None])[0])
        return self._length

    def _advance(self, status: EvalStatus):
        if status < self.eval_status:
            raise InvalidInputError(
                f"edge already {self.eval_status}; cannot regress to {status}"
            )
        self.eval_status = status

    def __repr__(self):
        return (
            f"MotionEdge(start={self.start.position.tolist()}, u={self.control.tolist()}, "
            f"tau={self.tau}, status={self.eval_status})"
        )


def chord_lengths(samples: np.ndarray) -> np.ndarray:
    """Polyline length per edge for a ``(M, K + 1, n, 3)`` sample batch."""
    p = samples[:, :, 0, :]
    return np.sqrt(np.sum(np.diff(p, axis=1) ** 2, axis=2)).sum(axis=1)


def sample_times(tau: float, delta_check: float) -> np.ndarray:
    """``K + 1`` evenly spaced times on ``[0, tau]`` with ``K = ceil(tau / delta_check)``."""
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")
    if not (0 < delta_check <= tau):
        raise InvalidInputError(f"delta_check must lie in (0, tau], got {delta_check}")
    # 1e-9 absorbs float noise in ratios such as 1 / 0.25
    k = max(1, math.ceil(tau / delta_check - 1e-9))
    t = np.linspace(0.0, tau, k + 1)
    t[-1] = tau
    return t


def discretize_edge(start: State, u, tau: float, delta_check: float | None = None) -> MotionEdge:
    if delta_check is None:
        delta_check = tau / 8
    times = sample_times(tau, delta_check)
    u = np.asarray(u, dtype=float)
    samples = propagate_exact_batch(start.derivs, u[None, :], times)[0]
    return MotionEdge(start, u, tau, times, samples)


def heuristic(position, goal_center, goal_radius: float, w: CostWeights) -> float:
    """Weighted straight-line distance to the goal ball (zero inside it)."""
    if goal_radius < 0:
        raise InvalidInputError("goal_radius must be >= 0")
    p = position.position if isinstance(position, State) else position
    d = math.dist(p, goal_center)
    return w.heuristic_weight * w.w_dist * max(0.0, d - goal_radius)


def control_cost(u, tau: float, w: CostWeights) -> float:
    return w.w_ctrl * (abs(u[0]) + abs(u[1]) + abs(u[2])) * tau


def obstacle_cost_at(f: DistanceField, p, w: CostWeights) -> float:
    """Hinge penalty ``w_obs * max(0, d_safe - d)``; ``inf`` when ``d <= 0``."""
    d = f.query(p)
    if d <= 0:
        return INF
    return w.w_obs * max(0.0, w.d_safe - d)


def _violates_limits(sample, caps) -> bool:
    for k, cap in enumerate(caps, start=1):
        row = sample[k]
        if abs(row[0]) > cap or abs(row[1]) > cap or abs(row[2]) > cap:
            return True
    return False


def _total(g_inc, ctrl, obs):
    if obs == INF:
        return INF
    return g_inc + ctrl + obs


def partially_evaluate(e: MotionEdge, f: DistanceField, w: CostWeights) -> EdgeCost:
    """Cost with the obstacle penalty taken at the start and end samples only."""
    if e.eval_status == EvalStatus.FULL:
        raise InvalidInputError("edge is already fully evaluated")
    g_inc = w.w_dist * e.arclength()
    ctrl = control_cost(e.control, e.tau, w)
    obs = max(
        obstacle_cost_at(f, e.samples[0, 0].tolist(), w),
        obstacle_cost_at(f, e.samples[-1, 0].tolist(), w),
    )
    cost = EdgeCost(g_inc, ctrl, obs, _total(g_inc, ctrl, obs), EvalStatus.PARTIAL)
    e._advance(EvalStatus.PARTIAL)
    e.cost = cost
    return cost


def fully_evaluate(
    e: MotionEdge,
    f: DistanceField,
    w: CostWeights,
    limits: DynamicLimits | None = None,
) -> EdgeCost:
    """Cost with the obstacle penalty over every sample.

    Any sample in collision, outside the map, or (when ``limits`` is given)
    beyond a dynamic cap makes the total ``inf``.
    """
    g_inc = w.w_dist * e.arclength()
    ctrl = control_cost(e.control, e.tau, w)
    obs = 0.0
    within_limits = True
    caps = None if limits is None else limits.caps(e.samples.shape[1]).tolist()
    for sample in e.samples.tolist():
        c = obstacle_cost_at(f, sample[0], w)
        if c > obs:
            obs = c
            if c == INF:
                break
        if within_limits and caps is not None and _violates_limits(sample, caps):
            within_limits = False
    total = _total(g_inc, ctrl, obs) if within_limits else INF
    cost = EdgeCost(g_inc, ctrl, obs, total, EvalStatus.FULL)
    e._advance(EvalStatus.FULL)
    e.cost = cost
    return cost
