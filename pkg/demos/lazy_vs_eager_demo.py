"""Same cluttered room, both planners.

Both return the same trajectory, but the lazy planner only fully checks
edges that reach the top of the open list.
"""

import json
import math
from collections import Counter

from lazymp.bench import data_path, run_plan, tree_records
from lazymp.scenario import load_scenario

sc = load_scenario(data_path("clutter.json"))
results = {p: run_plan(sc, p) for p in ("eager", "lazy")}

for name, r in results.items():
    m = r.metrics
    print(
        f"{name:6s} {r.status}  cost={r.cost:.4f}  edges={len(r.trajectory)}  "
        f"N={m.N}  full={m.full_evals}  partial={m.partial_evals}  T={m.T_ms:.1f} ms"
    )

lazy, eager = results["lazy"], results["eager"]
print("\nsame cost:", math.isclose(lazy.cost, eager.cost, rel_tol=0, abs_tol=1e-9))
print("tree edge status (lazy):", dict(Counter(r["eval_status"] for r in tree_records(lazy))))
print("tree edge status (eager):", dict(Counter(r["eval_status"] for r in tree_records(eager))))

print("\nwaypoints:")
for e in lazy.trajectory:
    print("  ", json.dumps([round(v, 3) for v in e.samples[-1, 0].tolist()]))
