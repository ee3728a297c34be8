"""Lazy A* over motion primitives, and the eager motion-primitive A* baseline.

Both planners share the neighbour generator, the visited-bin policy, the
tie-breaking order and the cost model; they differ only in *when* an edge is
fully evaluated:

* eager: every generated edge is fully evaluated before it is queued;
* lazy: generated edges are queued with their partial (endpoint-only) cost,
  and an edge is fully evaluated only when its child node reaches the top of
  the open list. The node is then re-queued at its true cost, or dropped if
  the edge turned out infeasible. Only nodes whose incoming edge is fully
  evaluated are goal-tested or expanded.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .control_sampling import ControlSet
from .dynamics import DynamicLimits, State, flow, transition_coefficients, within_dynamic_limits
from .edge_eval import (
    INF,
    CostWeights,
    EvalStatus,
    MotionEdge,
    chord_lengths,
    fully_evaluate,
    heuristic,
    partially_evaluate,
    sample_times,
)
from .errors import ConsistencyError, InvalidInputError, PreconditionError
from .world import DistanceField

__all__ = [
    "PlanStatus",
    "Budget",
    "SearchNode",
    "OpenList",
    "PlanMetrics",
    "PlanResult",
    "state_key",
    "find_neighbors",
    "reconstruct_trajectory",
    "plan",
    "plan_lazy",
    "plan_eager",
]


class PlanStatus(str, Enum):
    REACHED_GOAL = "reached_goal"
    BEST_EFFORT = "best_effort"
    FAILURE = "failure"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Budget:
    max_pops: int | None = 200_000
    max_millis: float | None = None
    # caps primitives per trajectory; used for exhaustive-search comparisons
    max_depth: int | None = None


class SearchNode:
    __slots__ = ("id", "state", "g", "h", "parent", "edge", "depth", "key")

    def __init__(self, id, state, g, h, parent=None, edge=None, depth=0, key=None):
        self.id = id
        self.state = state
        self.g = g
        self.h = h
        self.parent = self if parent is None else parent
        self.edge = edge
        self.depth = depth
        self.key = key

    @property
    def f(self) -> float:
        return self.g + self.h

    @property
    def is_root(self) -> bool:
        return self.parent is self

    def edge_status(self) -> EvalStatus:
        # the root's virtual incoming edge counts as fully evaluated
        return EvalStatus.FULL if self.edge is None else self.edge.eval_status

    def __repr__(self):
        return f"SearchNode(id={self.id}, g={self.g:.6g}, h={self.h:.6g}, pos={self.state.position.tolist()})"


class OpenList:
    """Min-priority queue on ``(f, h, node id)``.

    Node ids are handed out in generation order, so the id term is the FIFO
    tie-break. Entries whose recorded ``g`` no longer matches the node are
    stale and skipped.
    """

    def __init__(self):
        self._heap: list = []

    def __len__(self):
        return len(self._heap)

    def push(self, node: SearchNode):
        heapq.heappush(self._heap, (node.g + node.h, node.h, node.id, node.g, node))

    def pop(self) -> SearchNode | None:
        while self._heap:
            _, _, _, g, node = heapq.heappop(self._heap)
            if g == node.g:
                return node
        return None


@dataclass
class PlanMetrics:
    T_ms: float = 0.0
    N: int = 0  # open-list pops, including lazy re-pops
    D: float = math.inf
    expansions: int = 0
    partial_evals: int = 0
    full_evals: int = 0
    generated: int = 0


@dataclass
class PlanResult:
    trajectory: list[MotionEdge]
    status: PlanStatus
    metrics: PlanMetrics
    cost: float
    final_node: SearchNode
    start: State
    # every generated (node, edge) pair in generation order, for tree dumps
    tree: list[tuple[SearchNode, MotionEdge]] = field(default_factory=list)
    # (node id, incoming-edge status) at the moment of each goal test/expansion
    expansion_log: list[tuple[int, EvalStatus]] = field(default_factory=list)

    @property
    def reached_goal(self) -> bool:
        return self.status is PlanStatus.REACHED_GOAL


def _bin_widths(order: int, world: DistanceField, limits: DynamicLimits, velocity_bins: int) -> np.ndarray:
    caps = limits.caps(order)
    widths = np.empty((order, 3))
    widths[0] = world.resolution
    widths[1:] = (caps / velocity_bins)[:, None]
    return widths


def state_key(s: State, world: DistanceField, limits: DynamicLimits, velocity_bins: int) -> tuple:
    """Discrete visited-set key: position binned at map resolution, each
    higher derivative binned at ``cap / velocity_bins``."""
    if velocity_bins < 1:
        raise InvalidInputError(f"velocity_bins must be >= 1, got {velocity_bins}")
    d = s.derivs.copy()
    d[0] -= world.origin
    widths = _bin_widths(s.order, world, limits, velocity_bins)
    return tuple(np.floor(d / widths).astype(np.int64).reshape(-1).tolist())


class _Generator:
    """Shared neighbour generator; one per planning call."""

    def __init__(self, cs, tau, delta_check, limits, world, velocity_bins, order, goal_center, goal_radius, w):
        self.controls = cs.samples
        self.tau = tau
        self.times = sample_times(tau, delta_check)
        self.phi, self.gamma = transition_coefficients(order, self.times)
        self.limits = limits
        self.caps = limits.caps(order)
        self.world = world
        self.widths = _bin_widths(order, world, limits, velocity_bins)
        self.goal_center = goal_center
        self.goal_radius = goal_radius
        self.w = w
        self.next_id = 1

    def neighbors(self, node: SearchNode, visited: set | None = None) -> tuple[int, list]:
        """Return ``(n_candidates, [(child, edge), ...])``.

        ``n_candidates`` counts endpoints that passed the bounds, collision and
        limit filters. With ``visited`` given, candidates whose key is already
        present are skipped and surviving keys are inserted, in sample order.
        """
        batch = flow(node.state.derivs, self.controls, self.phi, self.gamma)
        ends = batch[:, -1]
        free = self.world.query_many(ends[:, 0, :]) > 0.0
        ok = free & np.all(np.abs(ends[:, 1:, :]) <= self.caps[:, None], axis=(1, 2))
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return 0, []
        rel = ends[idx].copy()
        rel[:, 0, :] -= self.world.origin
        keys = list(map(tuple, np.floor(rel / self.widths).astype(np.int64).reshape(idx.size, -1).tolist()))
        if visited is not None:
            keep = []
            for j, key in enumerate(keys):
                if key not in visited:
                    visited.add(key)
                    keep.append(j)
        else:
            keep = range(idx.size)
        if not keep:
            return idx.size, []
        sel = idx[list(keep)]
        lengths = chord_lengths(batch[sel]).tolist()
        out = []
        depth = node.depth + 1
        for j, i, length in zip(keep, sel.tolist(), lengths):
            samples = batch[i]
            end = State._trusted(samples[-1])
            edge = MotionEdge(node.state, self.controls[i], self.tau, self.times, samples, length)
            h = heuristic(samples[-1, 0].tolist(), self.goal_center, self.goal_radius, self.w)
            child = SearchNode(self.next_id, end, INF, h, node, edge, depth, keys[j])
            self.next_id += 1
            out.append((child, edge))
        return idx.size, out


def find_neighbors(
    s: SearchNode,
    cs: ControlSet,
    tau: float,
    limits: DynamicLimits,
    world: DistanceField,
    delta_check: float | None = None,
    velocity_bins: int = 10,
) -> list[tuple[SearchNode, MotionEdge]]:
    """One candidate per control sample, minus those whose endpoint is out of
    bounds, in collision, or beyond the dynamic limits.

    Returned nodes carry ``g = inf`` and ``h = 0``; the planner fills costs in.
    """
    gen = _Generator(
        cs, tau, tau / 8 if delta_check is None else delta_check, limits, world,
        velocity_bins, s.state.order, s.state.position.tolist(), 0.0, CostWeights(),
    )
    _, out = gen.neighbors(s)
    for child, _ in out:
        child.h = 0.0
    return out


def reconstruct_trajectory(s: SearchNode) -> list[MotionEdge]:
    """Edges from the root to ``s`` in root-first order."""
    edges = []
    seen = set()
    while not s.is_root:
        if id(s) in seen:
            raise ConsistencyError("parent chain contains a cycle")
        seen.add(id(s))
        edges.append(s.edge)
        s = s.parent
    edges.reverse()
    return edges


def _in_goal(node: SearchNode, goal_center, goal_radius) -> bool:
    return math.dist(node.state.derivs[0].tolist(), goal_center) <= goal_radius


def plan(
    start: State,
    goal_center,
    goal_radius: float,
    world: DistanceField,
    cs: ControlSet,
    w: CostWeights,
    limits: DynamicLimits,
    budget: Budget = Budget(),
    *,
    lazy: bool = True,
    tau: float = 1.0,
    delta_check: float | None = None,
    velocity_bins: int = 10,
    dedup: bool = True,
    record: bool = True,
) -> PlanResult:
    """Search from ``start`` to the goal ball; see module docstring."""
    goal_center = [float(v) for v in goal_center]
    if not goal_radius > 0:
        raise InvalidInputError(f"goal_radius must be > 0, got {goal_radius}")
    if velocity_bins < 1:
        raise InvalidInputError(f"velocity_bins must be >= 1, got {velocity_bins}")
    if not world.query(start.position.tolist()) > 0:
        raise PreconditionError("start in collision")
    if not within_dynamic_limits(start, limits):
        raise PreconditionError("start violates dynamic limits")
    if np.any(np.abs(cs.samples) > limits.u_max):
        raise PreconditionError("control set exceeds u_max")
    if delta_check is None:
        delta_check = tau / 8

    gen = _Generator(
        cs, tau, delta_check, limits, world, velocity_bins, start.order,
        goal_center, goal_radius, w,
    )
    m = PlanMetrics()
    tree: list[tuple[SearchNode, MotionEdge]] = []
    log: list[tuple[int, EvalStatus]] = []
    root = SearchNode(0, start, 0.0, heuristic(start.position.tolist(), goal_center, goal_radius, w))
    open_list = OpenList()
    open_list.push(root)
    visited: set = set()
    best = root
    goal = None
    max_pops = budget.max_pops
    deadline = None if budget.max_millis is None else budget.max_millis / 1000.0

    t0 = time.perf_counter()
    while True:
        if max_pops is not None and m.N >= max_pops:
            break
        if deadline is not None and time.perf_counter() - t0 > deadline:
            break
        s = open_list.pop()
        if s is None:
            break
        m.N += 1
        if s.edge is None or s.edge.eval_status is EvalStatus.FULL:
            if record:
                log.append((s.id, s.edge_status()))
            if s.h < best.h:
                best = s
            if _in_goal(s, goal_center, goal_radius):
                goal = s
                break
            if budget.max_depth is not None and s.depth >= budget.max_depth:
                continue
            m.expansions += 1
            n_candidates, children = gen.neighbors(s, visited if dedup else None)
            m.generated += n_candidates
            for child, edge in children:
                if lazy:
                    c = partially_evaluate(edge, world, w)
                    m.partial_evals += 1
                else:
                    c = fully_evaluate(edge, world, w, limits)
                    m.full_evals += 1
                if record:
                    tree.append((child, edge))
                if c.total == INF:
                    continue
                child.g = s.g + c.total
                open_list.push(child)
        else:
            c = fully_evaluate(s.edge, world, w, limits)
            m.full_evals += 1
            s.g = s.parent.g + c.total
            if c.total < INF:
                open_list.push(s)
    m.T_ms = (time.perf_counter() - t0) * 1000.0

    final = goal if goal is not None else best
    if goal is not None:
        status = PlanStatus.REACHED_GOAL
    elif best.is_root:
        status = PlanStatus.FAILURE
    else:
        status = PlanStatus.BEST_EFFORT
    m.D = math.dist(final.state.position.tolist(), goal_center)
    return PlanResult(
        trajectory=reconstruct_trajectory(final),
        status=status,
        metrics=m,
        cost=final.g,
        final_node=final,
        start=start,
        tree=tree,
        expansion_log=log,
    )


def plan_lazy(start, goal_center, goal_radius, world, cs, w, limits, budget=Budget(), **kw) -> PlanResult:
    return plan(start, goal_center, goal_radius, world, cs, w, limits, budget, lazy=True, **kw)


def plan_eager(start, goal_center, goal_radius, world, cs, w, limits, budget=Budget(), **kw) -> PlanResult:
    return plan(start, goal_center, goal_radius, world, cs, w, limits, budget, lazy=False, **kw)
