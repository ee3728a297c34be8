import json

import pytest

from lazymp.bench import data_path
from lazymp.errors import ScenarioError
from lazymp.scenario import load_scenario, random_scenario, save_scenario, scenario_from_dict

MINIMAL = {
    "name": "minimal",
    "bounds": {"min": [0, 0, 0], "max": [10, 10, 4]},
    "resolution": 0.5,
    "start": {"position": [1, 1, 1]},
    "goal": {"center": [8, 8, 2], "radius": 1.0},
}


def with_(**changes):
    d = json.loads(json.dumps(MINIMAL))
    d.update(changes)
    return d


class TestLoad:
    def test_defaults_materialised(self):
        sc = scenario_from_dict(MINIMAL)
        assert sc.version == 1
        assert sc.weights.w_dist == 1.0 and sc.weights.w_ctrl == 0.1
        assert sc.weights.w_obs == 1.0 and sc.weights.d_safe == 0.5
        assert sc.sampler.strategy == "uniform" and sc.sampler.M == 27
        assert sc.sampler.tau == 1.0 and sc.sampler.delta_check == 0.125
        assert sc.velocity_bins == 10
        assert sc.budget.max_pops == 200_000
        dumped = sc.model_dump()
        assert dumped["sampler"]["delta_check"] == 0.125

    def test_start_in_collision(self):
        d = with_(obstacles=[{"min": [0, 0, 0], "max": [2, 2, 2]}])
        with pytest.raises(ScenarioError, match="start in collision"):
            scenario_from_dict(d)

    def test_start_beyond_limits(self):
        d = with_(start={"position": [1, 1, 1], "velocity": [9, 0, 0]})
        with pytest.raises(ScenarioError, match="start"):
            scenario_from_dict(d)

    @pytest.mark.parametrize(
        "changes, field",
        [
            ({"colour": "red"}, "colour"),
            ({"sampler": {"strategy": "sobol"}}, "sampler.strategy"),
            ({"goal": {"center": [8, 8, 2], "radius": 0}}, "goal.radius"),
            ({"goal": {"center": [80, 8, 2], "radius": 1}}, "goal.center"),
            ({"resolution": -1}, "resolution"),
            ({"version": 2}, "version"),
            ({"obstacles": [{"min": [1, 1, 1], "max": [1, 2, 2]}]}, "obstacles.0"),
            ({"obstacles": [{"min": [8, 8, 3], "max": [12, 9, 4]}]}, "obstacles[0]"),
            ({"sampler": {"tau": 1.0, "delta_check": 2.0}}, "delta_check"),
        ],
    )
    def test_schema_errors_name_the_field(self, changes, field):
        with pytest.raises(ScenarioError, match=field.replace("[", r"\[").replace("]", r"\]")):
            scenario_from_dict(with_(**changes))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioError, match="no such file"):
            load_scenario(tmp_path / "nope.json")

    def test_parse_error(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{ not json")
        with pytest.raises(ScenarioError, match="parse error"):
            load_scenario(p)


class TestRoundTrip:
    def test_save_load(self, tmp_path):
        sc = scenario_from_dict(with_(obstacles=[{"min": [4, 4, 0], "max": [5, 6, 4]}]))
        save_scenario(sc, tmp_path / "a.json")
        again = load_scenario(tmp_path / "a.json")
        assert again == sc
        assert again.config_hash() == sc.config_hash()

    def test_bundled_files_round_trip(self, tmp_path):
        for p in [data_path("clutter.json"), *sorted(data_path("suite").glob("*.json"))]:
            sc = load_scenario(p)
            save_scenario(sc, tmp_path / p.name)
            assert load_scenario(tmp_path / p.name) == sc

    def test_hash_sensitive_to_content(self):
        a = scenario_from_dict(MINIMAL)
        b = scenario_from_dict(with_(velocity_bins=4))
        assert a.config_hash() != b.config_hash()
        assert len(a.config_hash()) == 16


class TestRandomScenario:
    def test_deterministic(self):
        assert random_scenario(7) == random_scenario(7)
        assert random_scenario(7) != random_scenario(8)

    @pytest.mark.parametrize("seed", range(5))
    def test_occupancy_and_separation(self, seed):
        sc = random_scenario(seed)
        prob = sc.problem()
        world = prob.world
        occ = (world.distance < 0).mean()
        assert 0.10 <= occ <= 0.30
        assert world.query(sc.goal.center) > 0 and world.query(sc.start.position) > 0
        d = sum((a - b) ** 2 for a, b in zip(sc.start.position, sc.goal.center)) ** 0.5
        assert d >= 6.0

    def test_overrides(self):
        sc = random_scenario(3, velocity_bins=2, name="x")
        assert sc.velocity_bins == 2 and sc.name == "x"
