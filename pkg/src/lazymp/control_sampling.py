"""Discretised control sets and their sampling-quality metrics.

Three strategies build the control set ``U_M``:

* ``random``  -- i.i.d. uniform on the control cube
* ``uniform`` -- a Cartesian grid with ``M ** (1/3)`` values per axis
* ``normal``  -- per-axis ``N(0, 1)`` truncated at +-3 and scaled by ``u_max / 3``

The two metrics are the useful-sample ratio (greedy deduplication of
primitive endpoints at a distance threshold) and the mean nearest-neighbour
distance between endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .dynamics import State, propagate_exact_batch
from .errors import InvalidInputError

STRATEGIES = ("random", "uniform", "normal")
TRUNCATION = 3.0

__all__ = [
    "STRATEGIES",
    "ControlSet",
    "SamplingMetrics",
    "generate_control_set",
    "primitive_endpoints",
    "useful_sample_ratio",
    "nearest_neighbor_spread",
    "sampling_metrics",
]


@dataclass(frozen=True, eq=False)
class ControlSet:
    samples: np.ndarray  # (M, 3)
    strategy: str
    u_max: float
    seed: int

    def __len__(self):
        return self.samples.shape[0]

    def __eq__(self, other):
        if not isinstance(other, ControlSet):
            return NotImplemented
        return (
            self.strategy == other.strategy
            and self.u_max == other.u_max
            and self.seed == other.seed
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True)
class SamplingMetrics:
    alpha: float
    L: float  # metres

    @property
    def L_cm(self) -> float:
        return 100.0 * self.L


def _integer_cube_root(m: int) -> int | None:
    r = int(round(m ** (1.0 / 3.0)))
    for c in (r - 1, r, r + 1):
        if c >= 1 and c**3 == m:
            return c
    return None


def _truncated_normal(rng: np.random.Generator, shape) -> np.ndarray:
    z = rng.standard_normal(shape)
    # rejection keeps the exact truncated law; each pass redraws ~0.27% of entries
    bad = np.abs(z) > TRUNCATION
    while bad.any():
        z[bad] = rng.standard_normal(int(bad.sum()))
        bad = np.abs(z) > TRUNCATION
    return z


def generate_control_set(strategy: str, M: int, u_max: float, seed: int = 0) -> ControlSet:
    """Build ``M`` constant control samples inside ``[-u_max, u_max]^3``."""
    if strategy not in STRATEGIES:
        raise InvalidInputError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if int(M) != M or M < 1:
        raise InvalidInputError(f"M must be a positive integer, got {M}")
    if not u_max > 0:
        raise InvalidInputError(f"u_max must be > 0, got {u_max}")
    M = int(M)
    rng = np.random.default_rng(seed)
    if strategy == "random":
        samples = rng.uniform(-u_max, u_max, size=(M, 3))
    elif strategy == "uniform":
        k = _integer_cube_root(M)
        if k is None:
            raise InvalidInputError(f"uniform grid needs a perfect-cube M, got {M}")
        axis = np.linspace(-u_max, u_max, k) if k > 1 else np.zeros(1)
        grid = np.meshgrid(axis, axis, axis, indexing="ij")
        samples = np.stack([g.reshape(-1) for g in grid], axis=1)
    else:
        samples = _truncated_normal(rng, (M, 3)) * (u_max / TRUNCATION)
    np.clip(samples, -u_max, u_max, out=samples)
    samples.setflags(write=False)
    return ControlSet(samples=samples, strategy=strategy, u_max=float(u_max), seed=int(seed))


def primitive_endpoints(s: State, cs: ControlSet, tau: float) -> np.ndarray:
    """Positions reached by holding each control sample for ``tau``; ``(M, 3)``."""
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")
    return propagate_exact_batch(s.derivs, cs.samples, [tau])[:, 0, 0, :]


def useful_sample_ratio(endpoints, threshold: float = 0.1) -> float:
    """Fraction of endpoints kept by greedy first-come deduplication.

    An endpoint is kept iff it lies farther than ``threshold`` from every
    endpoint kept before it.
    """
    pts = np.asarray(endpoints, dtype=float).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise InvalidInputError("useful_sample_ratio needs at least one endpoint")
    if not threshold > 0:
        raise InvalidInputError(f"threshold must be > 0, got {threshold}")
    kept = np.empty_like(pts)
    n_kept = 0
    for p in pts:
        if n_kept == 0 or np.min(np.linalg.norm(kept[:n_kept] - p, axis=1)) > threshold:
            kept[n_kept] = p
            n_kept += 1
    return n_kept / pts.shape[0]


def nearest_neighbor_spread(endpoints) -> float:
    """Mean distance from each endpoint to its nearest other endpoint, metres."""
    pts = np.asarray(endpoints, dtype=float).reshape(-1, 3)
    if pts.shape[0] < 2:
        raise InvalidInputError("nearest_neighbor_spread needs at least two endpoints")
    dist, _ = cKDTree(pts).query(pts, k=2)
    return float(dist[:, 1].mean())


def sampling_metrics(s: State, cs: ControlSet, tau: float, threshold: float = 0.1) -> SamplingMetrics:
    pts = primitive_endpoints(s, cs, tau)
    return SamplingMetrics(alpha=useful_sample_ratio(pts, threshold), L=nearest_neighbor_spread(pts))
