"""Lazy vs eager over the bundled ten-scenario suite (T in ms, N pops, D in m)."""

from lazymp.bench import data_path, load_suite, run_bench

report = run_bench(load_suite(data_path("suite")), repetitions=1)
print(report.format_table())

print("\nper scenario full evaluations (eager -> lazy):")
for e, l in zip(report.for_planner("eager"), report.for_planner("lazy")):
    print(f"  {e.scenario}: {e.full_evals:6d} -> {l.full_evals:5d}   D {e.D:.2f} / {l.D:.2f}")
