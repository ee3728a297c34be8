"""Control-set quality: how many distinct endpoints each strategy reaches.

alpha is the fraction of samples whose one-second endpoint is more than
10 cm from every earlier kept endpoint; L is the mean nearest-neighbour
spacing of all endpoints.
"""

from lazymp.bench import run_sample_eval, sample_eval_table

rows = run_sample_eval(("normal", "uniform", "random"), M=125, seeds=range(20), tau=1.0, u_max=1.0)
print(sample_eval_table(rows))

# a uniform grid from rest lands on a regular lattice, so every sample counts
print("\nuniform alpha per seed:", sorted({r.alpha for r in rows if r.strategy == "uniform"}))
