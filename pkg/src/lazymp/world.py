"""Box obstacles, voxel occupancy and the Euclidean signed distance field.

The distance field is exact between voxel centres. It is built with the
separable lower-envelope transform: a 1D squared-distance transform along
x, then y, then z, each linear in the line length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import InvalidInputError, ResourceLimitError

DEFAULT_VOXEL_BUDGET = 8_000_000

__all__ = [
    "Box",
    "ObstacleSet",
    "VoxelGrid",
    "DistanceField",
    "rasterize",
    "build_esdf",
    "squared_edt",
    "query_distance",
    "is_position_free",
]


@dataclass(frozen=True)
class Box:
    lo: tuple[float, float, float]
    hi: tuple[float, float, float]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lo)
        hi = tuple(float(v) for v in self.hi)
        if len(lo) != 3 or len(hi) != 3:
            raise InvalidInputError("box corners must be 3-vectors")
        if any(not (h > l) for l, h in zip(lo, hi)):
            raise InvalidInputError(f"degenerate box {lo} -> {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Closed-box membership for an ``(..., 3)`` array."""
        return np.all((points >= self.lo) & (points <= self.hi), axis=-1)

    def inside(self, other: "Box") -> bool:
        return all(a >= b for a, b in zip(self.lo, other.lo)) and all(
            a <= b for a, b in zip(self.hi, other.hi)
        )


@dataclass(frozen=True)
class ObstacleSet:
    bounds: Box
    boxes: tuple[Box, ...] = field(default_factory=tuple)

    def __post_init__(self):
        boxes = tuple(self.boxes)
        for b in boxes:
            if not b.inside(self.bounds):
                raise InvalidInputError(f"obstacle {b} leaves world bounds {self.bounds}")
        object.__setattr__(self, "boxes", boxes)


@dataclass(frozen=True, eq=False)
class VoxelGrid:
    origin: np.ndarray
    resolution: float
    occupancy: np.ndarray  # bool, shape dims, indexed [ix, iy, iz]

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.occupancy.shape

    def centers(self) -> np.ndarray:
        """Voxel centres, shape ``dims + (3,)``."""
        axes = [self.origin[a] + (np.arange(self.dims[a]) + 0.5) * self.resolution for a in range(3)]
        return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Signed distance per voxel: positive in free space, negative inside
    obstacles, ``+inf`` everywhere when there are no obstacles."""

    origin: np.ndarray
    resolution: float
    distance: np.ndarray  # float, shape dims

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.distance.shape

    @property
    def upper(self) -> np.ndarray:
        return self.origin + np.array(self.dims) * self.resolution

    def __post_init__(self):
        # flat copies speed up the scalar lookup path used by edge evaluation
        object.__setattr__(self, "_flat", self.distance.ravel().tolist())
        object.__setattr__(self, "_o", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "_dims", tuple(int(v) for v in self.dims))

    def index_of(self, p) -> tuple[int, int, int] | None:
        ox, oy, oz = self._o
        r = self.resolution
        nx, ny, nz = self._dims
        i = math.floor((p[0] - ox) / r)
        j = math.floor((p[1] - oy) / r)
        k = math.floor((p[2] - oz) / r)
        if 0 <= i < nx and 0 <= j < ny and 0 <= k < nz:
            return i, j, k
        return None

    def query(self, p) -> float:
        """Nearest-voxel distance lookup; ``-inf`` outside the map."""
        ox, oy, oz = self._o
        r = self.resolution
        nx, ny, nz = self._dims
        x = (p[0] - ox) / r
        y = (p[1] - oy) / r
        z = (p[2] - oz) / r
        # NaN fails every comparison below and lands on -inf
        if not (0.0 <= x < nx and 0.0 <= y < ny and 0.0 <= z < nz):
            return -math.inf
        return self._flat[(int(x) * ny + int(y)) * nz + int(z)]

    def query_many(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        idx = np.floor((pts - self.origin) / self.resolution)
        ok = np.all((idx >= 0) & (idx < np.array(self.dims)), axis=1)
        out = np.full(pts.shape[0], -np.inf)
        ii = idx[ok].astype(np.intp)
        out[ok] = self.distance[ii[:, 0], ii[:, 1], ii[:, 2]]
        return out


def rasterize(obs: ObstacleSet, resolution: float, voxel_budget: int = DEFAULT_VOXEL_BUDGET) -> VoxelGrid:
    """Voxelise ``obs``: a voxel is occupied iff its centre lies in some box."""
    if not resolution > 0:
        raise InvalidInputError(f"resolution must be > 0, got {resolution}")
    lo = np.array(obs.bounds.lo)
    extent = np.array(obs.bounds.hi) - lo
    # tolerate float noise when the extent is an exact multiple of resolution
    dims = tuple(max(1, int(math.ceil(e / resolution - 1e-9))) for e in extent)
    if math.prod(dims) > voxel_budget:
        raise ResourceLimitError(f"grid {dims} exceeds voxel budget {voxel_budget}")
    occ = np.zeros(dims, dtype=bool)
    axes = [lo[a] + (np.arange(dims[a]) + 0.5) * resolution for a in range(3)]
    for b in obs.boxes:
        sel = []
        for a in range(3):
            c = axes[a]
            sel.append((c >= b.lo[a]) & (c <= b.hi[a]))
        occ |= sel[0][:, None, None] & sel[1][None, :, None] & sel[2][None, None, :]
    return VoxelGrid(origin=lo, resolution=float(resolution), occupancy=occ)


@numba.njit(cache=True)
def _edt_1d(f, out, v, z):
    """Lower envelope of parabolas rooted at ``(q, f[q])``; writes ``out``.

    ``f`` may contain ``inf`` for cells that are not sites.
    """
    n = f.shape[0]
    k = -1
    for q in range(n):
        if f[q] == np.inf:
            continue
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -np.inf
            z[1] = np.inf
            continue
        while True:
            p = v[k]
            s = ((f[q] + q * q) - (f[p] + p * p)) / (2.0 * (q - p))
            if s <= z[k]:
                k -= 1
                if k < 0:
                    break
            else:
                break
        if k < 0:
            k = 0
            v[0] = q
            z[0] = -np.inf
            z[1] = np.inf
        else:
            k += 1
            v[k] = q
            z[k] = s
            z[k + 1] = np.inf
    if k < 0:
        for q in range(n):
            out[q] = np.inf
        return
    k = 0
    for q in range(n):
        while z[k + 1] < q:
            k += 1
        d = q - v[k]
        out[q] = d * d + f[v[k]]


@numba.njit(cache=True)
def _edt_axis0(grid):
    nx, ny, nz = grid.shape
    res = np.empty_like(grid)
    f = np.empty(nx)
    out = np.empty(nx)
    v = np.empty(nx, dtype=np.int64)
    z = np.empty(nx + 1)
    for j in range(ny):
        for k in range(nz):
            for i in range(nx):
                f[i] = grid[i, j, k]
            _edt_1d(f, out, v, z)
            for i in range(nx):
                res[i, j, k] = out[i]
    return res


def squared_edt(sites: np.ndarray) -> np.ndarray:
    """Squared Euclidean distance (in voxels) from every cell to the nearest
    ``True`` cell of ``sites``; ``inf`` if there are none."""
    f = np.where(sites, 0.0, np.inf)
    for axis in range(3):
        f = np.moveaxis(_edt_axis0(np.ascontiguousarray(np.moveaxis(f, axis, 0))), 0, axis)
    return f


def build_esdf(g: VoxelGrid) -> DistanceField:
    occ = g.occupancy
    if occ.size == 0:
        raise InvalidInputError("grid must contain at least one voxel")
    to_occupied = np.sqrt(squared_edt(occ)) * g.resolution
    to_free = np.sqrt(squared_edt(~occ)) * g.resolution
    dist = np.where(occ, -to_free, to_occupied)
    dist.setflags(write=False)
    return DistanceField(origin=np.array(g.origin, dtype=float), resolution=g.resolution, distance=dist)


def query_distance(f: DistanceField, p) -> float:
    return f.query(p)


def is_position_free(f: DistanceField, p, clearance: float = 0.0) -> bool:
    if clearance < 0:
        raise InvalidInputError(f"clearance must be >= 0, got {clearance}")
    return f.query(p) > clearance
