"""Relative-equilibrium check: spin a central configuration and integrate it.

A planar central configuration with multiplier lambda rotates rigidly at
angular rate omega = sqrt(lambda) about its center of mass.  Integrating the
full Newtonian equations from that launch should keep every mutual distance
fixed; any drift measures either integration error or a configuration that
is not central after all.

The integrator is the classical fixed-step fourth-order Runge-Kutta method.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .core import MassSolution, ShapeParams, SpecialCaseSolution, solve_masses
from .errors import CollisionDetected, InfeasibleShape, InvalidInput

__all__ = [
    "COLLISION_DISTANCE",
    "STEPS_PER_PERIOD",
    "SimState",
    "ConservationMonitor",
    "DriftReport",
    "accelerations",
    "monitor",
    "rigid_rotation",
    "launch_relative_equilibrium",
    "rotation_period",
    "trajectory",
    "integrate",
]

COLLISION_DISTANCE = 1e-6
STEPS_PER_PERIOD = 20000


@dataclass(frozen=True)
class SimState:
    time: float
    positions: np.ndarray
    velocities: np.ndarray
    masses: np.ndarray

    @property
    def momentum(self) -> np.ndarray:
        return self.masses @ self.velocities

    @property
    def center_of_mass(self) -> np.ndarray:
        return self.masses @ self.positions / self.masses.sum()


@dataclass(frozen=True)
class ConservationMonitor:
    energy: float
    angular_momentum: float
    mutual_distances: np.ndarray


@dataclass(frozen=True)
class DriftReport:
    """Largest relative departures from the initial monitor over a run."""

    energy_drift: float
    angular_momentum_drift: float
    distance_drift: float
    n_steps: int
    dt: float

    def as_dict(self) -> dict:
        return {
            "energy_drift": self.energy_drift,
            "angular_momentum_drift": self.angular_momentum_drift,
            "distance_drift": self.distance_drift,
            "n_steps": self.n_steps,
            "dt": self.dt,
        }


def _pairs(n):
    return np.triu_indices(n, 1)


def accelerations(q: np.ndarray, m: np.ndarray) -> np.ndarray:
    diff = q[None, :, :] - q[:, None, :]  # diff[i, j] = q_j - q_i
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r2, np.inf)
    w = m[None, :] * r2**-1.5
    return np.einsum("ij,ijk->ik", w, diff)


def _distances(q: np.ndarray) -> np.ndarray:
    i, j = _pairs(len(q))
    return np.hypot(*(q[i] - q[j]).T)


def monitor(state: SimState) -> ConservationMonitor:
    q, v, m = state.positions, state.velocities, state.masses
    i, j = _pairs(len(m))
    dist = _distances(q)
    kinetic = 0.5 * float(m @ np.einsum("ij,ij->i", v, v))
    potential = float(np.sum(m[i] * m[j] / dist))
    ang = float(m @ (q[:, 0] * v[:, 1] - q[:, 1] * v[:, 0]))
    return ConservationMonitor(kinetic - potential, ang, dist)


def rigid_rotation(positions, masses, omega: float) -> SimState:
    """State rotating rigidly at rate ``omega`` about the center of mass."""
    q = np.array(positions, dtype=float)
    m = np.array(masses, dtype=float)
    if np.any(m <= 0):
        raise InvalidInput(f"masses must be positive, got {m.tolist()}")
    r = q - m @ q / m.sum()
    v = omega * np.column_stack([-r[:, 1], r[:, 0]])
    state = SimState(0.0, q, v, m)
    p = state.momentum
    if np.max(np.abs(p)) > 1e-12 * max(1.0, float(m.sum() * np.max(np.abs(v)))):
        raise ArithmeticError(f"launch momentum {p} is not zero")
    return state


def launch_relative_equilibrium(source: ShapeParams | MassSolution | SpecialCaseSolution, lam: float = 1.0) -> SimState:
    """Launch the central configuration at ``source`` as a rigid rotation with omega = sqrt(lambda).

    ``source`` may be a shape (masses from :func:`cc4.core.solve_masses` at
    ``lam``) or an already solved configuration, whose own lambda is used.
    """
    if isinstance(source, ShapeParams):
        source = solve_masses(source, lam)
    if isinstance(source, MassSolution) and not source.feasible:
        raise InfeasibleShape(
            f"masses {source.masses} at (s, t) = ({source.params.s}, {source.params.t}) are not all positive"
        )
    return rigid_rotation(source.params.positions(), source.masses, math.sqrt(source.lam))


def rotation_period(lam: float) -> float:
    return 2.0 * math.pi / math.sqrt(lam)


def _rk4_step(q, v, m, dt):
    a1 = accelerations(q, m)
    q2 = q + 0.5 * dt * v
    v2 = v + 0.5 * dt * a1
    a2 = accelerations(q2, m)
    q3 = q + 0.5 * dt * v2
    v3 = v + 0.5 * dt * a2
    a3 = accelerations(q3, m)
    q4 = q + dt * v3
    v4 = v + dt * a3
    a4 = accelerations(q4, m)
    q_new = q + dt / 6.0 * (v + 2.0 * v2 + 2.0 * v3 + v4)
    v_new = v + dt / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
    return q_new, v_new


def _relative(value, ref):
    return abs(value - ref) / abs(ref) if ref != 0 else abs(value)


def trajectory(state: SimState, dt: float, n_steps: int) -> Iterator[tuple[int, SimState, DriftReport]]:
    """Yield (step, state, running drift report) after each of ``n_steps`` steps.

    Step 0 (the initial state) is not yielded.  The report holds the maximum
    drift seen so far.
    """
    if not (math.isfinite(dt) and dt > 0):
        raise InvalidInput(f"dt must be positive, got {dt!r}")
    if int(n_steps) != n_steps or n_steps < 0:
        raise InvalidInput(f"n_steps must be a non-negative integer, got {n_steps!r}")
    ref = monitor(state)
    q, v, m = state.positions.copy(), state.velocities.copy(), state.masses
    e_max = l_max = d_max = 0.0
    for k in range(1, int(n_steps) + 1):
        q, v = _rk4_step(q, v, m, dt)
        now = SimState(state.time + k * dt, q, v, m)
        mon = monitor(now)
        if np.min(mon.mutual_distances) < COLLISION_DISTANCE:
            raise CollisionDetected(f"pair distance {np.min(mon.mutual_distances):.3g} at step {k}")
        e_max = max(e_max, _relative(mon.energy, ref.energy))
        l_max = max(l_max, _relative(mon.angular_momentum, ref.angular_momentum))
        d_max = max(d_max, float(np.max(np.abs(mon.mutual_distances - ref.mutual_distances) / ref.mutual_distances)))
        yield k, now, DriftReport(e_max, l_max, d_max, k, dt)


def integrate(state: SimState, dt: float, n_steps: int) -> tuple[SimState, DriftReport]:
    """Advance ``n_steps`` RK4 steps; return the final state and the worst drifts of the run."""
    final, report = state, DriftReport(0.0, 0.0, 0.0, 0, dt)
    for _, final, report in trajectory(state, dt, n_steps):
        pass
    return final, report
