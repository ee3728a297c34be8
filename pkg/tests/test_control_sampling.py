import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from lazymp.control_sampling import (
    generate_control_set,
    nearest_neighbor_spread,
    primitive_endpoints,
    sampling_metrics,
    useful_sample_ratio,
)
from lazymp.dynamics import State
from lazymp.errors import InvalidInputError

REST = State.at_rest((0.0, 0.0, 0.0))

point_clouds = st.integers(0, 2**32 - 1).map(
    lambda seed: np.random.default_rng(seed).uniform(-0.5, 0.5, (40, 3))
)


class TestGenerate:
    def test_uniform_grid_values(self):
        cs = generate_control_set("uniform", 27, 1.0)
        assert len(cs) == 27
        for axis in range(3):
            assert sorted(set(cs.samples[:, axis].tolist())) == [-1.0, 0.0, 1.0]
        assert len({tuple(r) for r in cs.samples.tolist()}) == 27

    @pytest.mark.parametrize("m", [2, 26, 100])
    def test_uniform_needs_cube(self, m):
        with pytest.raises(InvalidInputError):
            generate_control_set("uniform", m, 1.0)

    def test_uniform_single_sample_is_zero(self):
        assert generate_control_set("uniform", 1, 2.0).samples.tolist() == [[0.0, 0.0, 0.0]]

    def test_normal_deterministic(self):
        a = generate_control_set("normal", 100, 1.0, seed=3)
        b = generate_control_set("normal", 100, 1.0, seed=3)
        assert a == b
        assert a.samples.tobytes() == b.samples.tobytes()
        assert a != generate_control_set("normal", 100, 1.0, seed=4)

    def test_normal_truncated_and_scaled(self):
        cs = generate_control_set("normal", 20000, 2.0, seed=0)
        assert np.all(np.abs(cs.samples) <= 2.0)
        # truncation at 3 sigma barely changes the unit variance (0.9866)
        assert np.std(cs.samples) == pytest.approx(2.0 / 3.0 * np.sqrt(0.9866), rel=0.03)

    def test_random_bounds_and_mean(self):
        cs = generate_control_set("random", 1000, 2.0, seed=11)
        assert np.all(np.abs(cs.samples) <= 2.0)
        assert np.all(np.abs(cs.samples.mean(axis=0)) <= 0.15)

    @pytest.mark.parametrize("args", [("bogus", 8, 1.0), ("random", 0, 1.0), ("random", 8, 0.0)])
    def test_invalid(self, args):
        with pytest.raises(InvalidInputError):
            generate_control_set(*args)


class TestEndpoints:
    def test_half_u_tau_squared(self):
        cs = generate_control_set("uniform", 27, 1.0)
        pts = primitive_endpoints(REST, cs, 1.0)
        i = cs.samples.tolist().index([1.0, 0.0, 0.0])
        assert pts[i].tolist() == [0.5, 0.0, 0.0]
        j = cs.samples.tolist().index([0.0, 0.0, 0.0])
        assert pts[j].tolist() == [0.0, 0.0, 0.0]

    def test_grid_maps_to_scaled_grid(self):
        cs = generate_control_set("uniform", 27, 1.0)
        pts = primitive_endpoints(REST, cs, 1.0)
        # grid step 1, so endpoints are spaced 0.5 * 1 * 1^2
        assert np.array_equal(pts, 0.5 * cs.samples)

    def test_order_follows_samples(self):
        cs = generate_control_set("random", 10, 1.0, seed=1)
        s = State.from_pv((1, 2, 3), (0.1, 0.0, -0.2))
        pts = primitive_endpoints(s, cs, 0.5)
        for u, p in zip(cs.samples, pts):
            assert np.allclose(p, s.position + s.velocity * 0.5 + 0.125 * u)


class TestUsefulRatio:
    def test_identical_points(self):
        assert useful_sample_ratio(np.zeros((8, 3))) == 1 / 8

    def test_well_separated(self):
        pts = np.arange(10)[:, None] * np.array([[0.11, 0, 0]])
        assert useful_sample_ratio(pts) == 1.0

    def test_greedy_order(self):
        # the middle point is within 0.1 of both ends; ends are 0.16 apart
        pts = [[0, 0, 0], [0.08, 0, 0], [0.16, 0, 0]]
        assert useful_sample_ratio(pts) == 2 / 3
        assert useful_sample_ratio([pts[1], pts[0], pts[2]]) == 1 / 3

    def test_empty(self):
        with pytest.raises(InvalidInputError):
            useful_sample_ratio(np.zeros((0, 3)))

    @settings(max_examples=30, deadline=None)
    @given(point_clouds, st.floats(0.01, 0.3), st.floats(0.01, 0.3))
    def test_monotone_in_threshold(self, pts, t1, t2):
        lo, hi = sorted((t1, t2))
        assert useful_sample_ratio(pts, hi) <= useful_sample_ratio(pts, lo)

    @settings(max_examples=30, deadline=None)
    @given(point_clouds, st.integers(0, 2**32 - 1))
    def test_rigid_motion_invariance(self, pts, seed):
        rng = np.random.default_rng(seed)
        # keep pair distances away from the 0.1 boundary so rounding cannot flip a decision
        pts = np.round(pts * 20) / 20 + 0.01 * np.arange(len(pts))[:, None] * np.array([1.0, 0.37, 0.11])
        moved = Rotation.random(random_state=seed).apply(pts) + rng.uniform(-5, 5, 3)
        assert useful_sample_ratio(moved, 0.1001) == useful_sample_ratio(pts, 0.1001)


class TestSpread:
    def test_pair(self):
        assert nearest_neighbor_spread([[0, 0, 0], [0.05, 0, 0]]) == pytest.approx(0.05)

    def test_collinear(self):
        assert nearest_neighbor_spread([[0, 0, 0], [1, 0, 0], [3, 0, 0]]) == pytest.approx(4 / 3)

    def test_too_few(self):
        with pytest.raises(InvalidInputError):
            nearest_neighbor_spread([[0, 0, 0]])

    @settings(max_examples=30, deadline=None)
    @given(point_clouds, st.integers(0, 2**32 - 1), st.floats(0.1, 10))
    def test_rigid_and_scale(self, pts, seed, scale):
        moved = Rotation.random(random_state=seed).apply(pts) + 3.0
        base = nearest_neighbor_spread(pts)
        assert nearest_neighbor_spread(moved) == pytest.approx(base, rel=1e-9)
        assert nearest_neighbor_spread(scale * pts) == pytest.approx(scale * base, rel=1e-9)


def test_metrics_deterministic():
    a = sampling_metrics(REST, generate_control_set("normal", 125, 1.0, 5), 1.0)
    b = sampling_metrics(REST, generate_control_set("normal", 125, 1.0, 5), 1.0)
    assert a == b
    assert 0 < a.alpha <= 1 and a.L >= 0
    assert a.L_cm == pytest.approx(100 * a.L)


def test_uniform_metrics_seed_independent():
    a = sampling_metrics(REST, generate_control_set("uniform", 125, 1.0, 0), 1.0)
    b = sampling_metrics(REST, generate_control_set("uniform", 125, 1.0, 99), 1.0)
    assert a == b
    # 5-point grid on [-1, 1] -> endpoints 0.25 m apart, all useful
    assert a.alpha == 1.0 and a.L == pytest.approx(0.25)
