"""Chain-of-integrators vehicle model.

The state stacks position and its first ``n - 1`` time derivatives for each
of the three axes; the control drives the ``n``-th derivative directly::

    x' = A x + B u

``A`` is nilpotent, so constant-control propagation has an exact polynomial
closed form (:func:`propagate_exact`). :func:`propagate_euler` is the plain
forward-Euler integrator, kept as the reference discretisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import InvalidInputError, NumericError

__all__ = [
    "State",
    "DynamicLimits",
    "system_matrices",
    "propagate_euler",
    "propagate_exact",
    "propagate_exact_batch",
    "flow",
    "transition_coefficients",
    "within_dynamic_limits",
]


@dataclass(frozen=True, eq=False)
class State:
    """Position plus derivatives up to order ``n - 1``, shape ``(n, 3)``."""

    derivs: np.ndarray

    def __post_init__(self):
        d = np.array(self.derivs, dtype=float)
        if d.ndim != 2 or d.shape[1] != 3:
            raise InvalidInputError(f"derivs must have shape (n, 3), got {d.shape}")
        if d.shape[0] < 2:
            raise InvalidInputError(f"state order must be >= 2, got {d.shape[0]}")
        if not np.all(np.isfinite(d)):
            raise NumericError("state contains non-finite values")
        d.setflags(write=False)
        object.__setattr__(self, "derivs", d)

    @classmethod
    def _trusted(cls, derivs: np.ndarray) -> "State":
        # skips validation for arrays produced by the propagation routines
        obj = object.__new__(cls)
        object.__setattr__(obj, "derivs", derivs)
        return obj

    @classmethod
    def at_rest(cls, position, order: int = 2) -> "State":
        d = np.zeros((order, 3))
        d[0] = position
        return cls(d)

    @classmethod
    def from_pv(cls, position, velocity) -> "State":
        return cls(np.array([position, velocity], dtype=float))

    @property
    def order(self) -> int:
        return self.derivs.shape[0]

    @property
    def position(self) -> np.ndarray:
        return self.derivs[0]

    @property
    def velocity(self) -> np.ndarray:
        return self.derivs[1]

    def translated(self, offset) -> "State":
        d = self.derivs.copy()
        d[0] += np.asarray(offset, dtype=float)
        return State(d)

    def __eq__(self, other):
        if not isinstance(other, State):
            return NotImplemented
        return np.array_equal(self.derivs, other.derivs)

    def __hash__(self):
        return hash(self.derivs.tobytes())

    def __repr__(self):
        return f"State({self.derivs.tolist()!r})"


@dataclass(frozen=True)
class DynamicLimits:
    """Per-axis symmetric caps on the state derivatives and the control.

    ``higher`` holds caps for derivative orders 3, 4, ... and is only
    consulted when the state order exceeds 3.
    """

    v_max: float = 3.0
    a_max: float = 5.0
    u_max: float = 1.0
    higher: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        caps = (self.v_max, self.a_max, self.u_max, *self.higher)
        if any(not (c > 0) for c in caps):
            raise InvalidInputError(f"all dynamic limits must be > 0, got {caps}")
        object.__setattr__(self, "higher", tuple(float(c) for c in self.higher))

    def caps(self, order: int) -> np.ndarray:
        """Caps for derivative orders ``1 .. order - 1`` (position excluded)."""
        all_caps = (self.v_max, self.a_max, *self.higher)
        if order - 1 > len(all_caps):
            raise InvalidInputError(
                f"no cap configured for derivative order {len(all_caps) + 1}"
            )
        return np.array(all_caps[: order - 1], dtype=float)


def system_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A, B)`` for the ``n``-th order chain of integrators in 3D."""
    if int(n) != n or n < 2:
        raise InvalidInputError(f"system order must be an integer >= 2, got {n}")
    n = int(n)
    A = np.zeros((3 * n, 3 * n))
    for k in range(n - 1):
        A[3 * k : 3 * k + 3, 3 * (k + 1) : 3 * (k + 2)] = np.eye(3)
    B = np.zeros((3 * n, 3))
    B[3 * (n - 1) :, :] = np.eye(3)
    return A, B


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NumericError("non-finite input to propagation")


def propagate_euler(s: State, u, tau: float, substeps: int = 1) -> State:
    """Forward-Euler integration with ``substeps`` equal steps over ``tau``."""
    u = np.asarray(u, dtype=float)
    _check_finite(u, np.asarray(tau, dtype=float))
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")
    if substeps < 1:
        raise InvalidInputError(f"substeps must be >= 1, got {substeps}")
    n = s.order
    A, B = system_matrices(n)
    x = s.derivs.reshape(-1).copy()
    bu = B @ u
    dt = tau / substeps
    for _ in range(substeps):
        x += (A @ x + bu) * dt
    return State(x.reshape(n, 3))


def transition_coefficients(n: int, times) -> tuple[np.ndarray, np.ndarray]:
    """Polynomial coefficients of the exact flow at each time.

    Returns ``(phi, gamma)`` with ``phi[t, k, j] = t**(j-k) / (j-k)!`` for
    ``j >= k`` and ``gamma[t, k] = t**(n-k) / (n-k)!`` so that the state at
    time ``t`` is ``phi[t] @ derivs + gamma[t][:, None] * u``.
    """
    t = np.atleast_1d(np.asarray(times, dtype=float))
    phi = np.zeros((t.size, n, n))
    for k in range(n):
        for j in range(k, n):
            phi[:, k, j] = t ** (j - k) / factorial(j - k)
    gamma = np.stack([t ** (n - k) / factorial(n - k) for k in range(n)], axis=1)
    return phi, gamma


def propagate_exact(s: State, u, tau: float) -> State:
    """Closed-form state after holding control ``u`` for ``tau`` seconds."""
    if not tau > 0:
        raise InvalidInputError(f"tau must be > 0, got {tau}")
    u = np.asarray(u, dtype=float)
    _check_finite(u, np.asarray(tau, dtype=float))
    out = propagate_exact_batch(s.derivs, u[None, :], [tau])
    return State(out[0, 0])


def propagate_exact_batch(derivs: np.ndarray, controls: np.ndarray, times) -> np.ndarray:
    """Vectorised exact flow.

    ``derivs`` is ``(n, 3)``, ``controls`` is ``(M, 3)``; the result has shape
    ``(M, T, n, 3)`` for ``T`` query times.
    """
    derivs = np.asarray(derivs, dtype=float)
    controls = np.asarray(controls, dtype=float)
    phi, gamma = transition_coefficients(derivs.shape[0], times)
    return flow(derivs, controls, phi, gamma)


def flow(derivs: np.ndarray, controls: np.ndarray, phi: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """:func:`propagate_exact_batch` with precomputed coefficients."""
    drift = phi @ derivs
    return drift[None, :, :, :] + gamma[None, :, :, None] * controls[:, None, None, :]


def within_dynamic_limits(s: State, lim: DynamicLimits) -> bool:
    """True iff every derivative of order 1..n-1 lies in its closed cap box."""
    caps = lim.caps(s.order)
    return bool(np.all(np.abs(s.derivs[1:]) <= caps[:, None]))
