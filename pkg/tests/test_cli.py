import json

import pytest

from lazymp.bench import data_path
from lazymp.cli import main


@pytest.fixture
def scenario_file(tmp_path):
    sc = json.loads(data_path("clutter.json").read_text())
    p = tmp_path / "clutter.json"
    p.write_text(json.dumps(sc))
    return p


def test_plan_success(scenario_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["plan", str(scenario_file), "--planner", "eager", "--out-dir", str(out)]) == 0
    assert (out / "clutter_eager_trajectory.csv").exists()
    assert "reached_goal" in capsys.readouterr().out


def test_plan_not_reached_exits_2(scenario_file, tmp_path):
    sc = json.loads(scenario_file.read_text())
    sc["budget"] = {"max_pops": 3}
    scenario_file.write_text(json.dumps(sc))
    assert main(["plan", str(scenario_file), "--out-dir", str(tmp_path)]) == 2


def test_plan_bad_scenario_exits_1(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text('{"name": "x"}')
    assert main(["plan", str(p)]) == 1
    assert "bounds" in capsys.readouterr().err


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["plan", "a.json", "--planner", "greedy"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1


def test_sample_eval(tmp_path, capsys):
    out = tmp_path / "s.csv"
    assert main(["sample-eval", "--strategies", "uniform,normal", "--m", "27", "--seeds", "2", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 5
    assert main(["sample-eval", "--strategies", "sobol"]) == 1


def test_esdf(scenario_file, tmp_path):
    out = tmp_path / "f.csv"
    assert main(["esdf", str(scenario_file), "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 40 * 40 * 12 + 1


def test_bench(tmp_path, scenario_file, capsys):
    suite = scenario_file.parent
    out = tmp_path / "report.csv"
    assert main(["bench", str(suite), "--reps", "1", "--out", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 3
    assert "MP-A*" in capsys.readouterr().out
