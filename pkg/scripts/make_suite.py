"""Regenerate the bundled scenario files under src/lazymp/data/.

    python scripts/make_suite.py
"""

from pathlib import Path

from lazymp.scenario import random_scenario, save_scenario, scenario_from_dict

DATA = Path(__file__).resolve().parents[1] / "src" / "lazymp" / "data"

SUITE_SEEDS = range(1000, 1010)


def clutter() -> dict:
    """A 10 x 10 x 3 m room: a wall with two gaps, and pillars either side."""
    boxes = [
        {"min": [4.5, 0.0, 0.0], "max": [5.5, 3.0, 3.0]},
        {"min": [4.5, 4.0, 0.0], "max": [5.5, 6.5, 3.0]},
        {"min": [4.5, 7.5, 0.0], "max": [5.5, 10.0, 3.0]},
        {"min": [2.0, 2.0, 0.0], "max": [3.0, 3.0, 3.0]},
        {"min": [2.0, 6.5, 0.0], "max": [3.0, 7.5, 3.0]},
        {"min": [7.0, 1.5, 0.0], "max": [8.0, 2.5, 3.0]},
        {"min": [7.0, 5.0, 0.0], "max": [8.0, 6.0, 3.0]},
        {"min": [0.0, 0.0, 2.5], "max": [10.0, 10.0, 3.0]},
    ]
    return {
        "version": 1,
        "name": "clutter",
        "bounds": {"min": [0.0, 0.0, 0.0], "max": [10.0, 10.0, 3.0]},
        "resolution": 0.25,
        "obstacles": boxes,
        "start": {"position": [1.0, 5.0, 1.25]},
        "goal": {"center": [9.0, 8.5, 1.25], "radius": 0.75},
        "limits": {"v_max": 2.0, "a_max": 5.0, "u_max": 2.0},
        "sampler": {"strategy": "uniform", "M": 27, "seed": 0, "tau": 1.0},
        "velocity_bins": 4,
    }


def main():
    suite = DATA / "suite"
    suite.mkdir(parents=True, exist_ok=True)
    for old in suite.glob("*.json"):
        old.unlink()
    for i, seed in enumerate(SUITE_SEEDS):
        sc = random_scenario(
            seed,
            size=(14.0, 14.0, 4.0),
            min_goal_distance=8.4,
            name=f"suite_{i:02d}",
            sampler=dict(strategy="uniform", M=125, seed=seed, tau=1.0),
            velocity_bins=4,
        )
        save_scenario(sc, suite / f"{sc.name}.json")
    save_scenario(scenario_from_dict(clutter()), DATA / "clutter.json")


if __name__ == "__main__":
    main()
