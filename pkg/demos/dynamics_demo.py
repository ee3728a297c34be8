"""Exact primitive propagation against forward Euler.

Holds a constant jerk on a triple integrator and shows how the Euler error
shrinks as the step count doubles.
"""

import numpy as np

from lazymp import State, propagate_euler, propagate_exact

s = State(np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 0.5, 0.0]]))
u = np.array([0.2, -0.4, 0.1])
tau = 1.5

exact = propagate_exact(s, u, tau)
print("exact end state (position, velocity, acceleration):")
print(exact.derivs)

print("\nsubsteps   Euler error   ratio")
prev = None
for k in range(9):
    n = 2**k
    err = np.linalg.norm(propagate_euler(s, u, tau, n).derivs - exact.derivs)
    ratio = "" if prev is None else f"{err / prev:.3f}"
    print(f"{n:8d}   {err:.3e}   {ratio}")
    prev = err
