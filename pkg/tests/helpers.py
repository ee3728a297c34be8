from lazymp import Box, ObstacleSet, build_esdf, rasterize


def make_world(size=(10.0, 10.0, 4.0), boxes=(), resolution=0.5):
    obs = ObstacleSet(Box((0.0, 0.0, 0.0), tuple(size)), tuple(Box(lo, hi) for lo, hi in boxes))
    return build_esdf(rasterize(obs, resolution))
