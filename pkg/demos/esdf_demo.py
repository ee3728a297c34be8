"""Signed distance field of a small room, printed as a height slice."""

import numpy as np

from lazymp import Box, ObstacleSet, build_esdf, rasterize

room = ObstacleSet(
    Box((0, 0, 0), (6, 4, 2)),
    (Box((2.0, 0.0, 0.0), (2.5, 2.5, 2.0)), Box((4.0, 1.5, 0.0), (4.5, 4.0, 2.0))),
)
grid = rasterize(room, 0.25)
field = build_esdf(grid)

print(f"grid {grid.dims}, {grid.occupancy.sum()} occupied voxels")
k = grid.dims[2] // 2
print(f"signed distance at z index {k} (m, rows are y, top row is max y):")
with np.printoptions(precision=2, suppress=True, linewidth=200):
    print(np.flipud(field.distance[:, :, k].T))

for p in [(1.0, 1.0, 1.0), (2.25, 1.0, 1.0), (3.2, 3.5, 1.0)]:
    print(f"d{p} = {field.query(p):+.3f} m")
