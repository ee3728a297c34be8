"""Lazy A* search over motion primitives for chain-of-integrators vehicles."""

from .control_sampling import ControlSet, generate_control_set, sampling_metrics
from .dynamics import DynamicLimits, State, propagate_euler, propagate_exact, system_matrices
from .edge_eval import CostWeights, EvalStatus, MotionEdge, fully_evaluate, partially_evaluate
from .errors import (
    ConsistencyError,
    InvalidInputError,
    LazyMPError,
    NumericError,
    PreconditionError,
    ResourceLimitError,
    ScenarioError,
)
from .planner import Budget, PlanResult, PlanStatus, plan, plan_eager, plan_lazy
from .scenario import Scenario, load_scenario, random_scenario, save_scenario
from .world import Box, DistanceField, ObstacleSet, build_esdf, rasterize

__version__ = "0.1.0"
