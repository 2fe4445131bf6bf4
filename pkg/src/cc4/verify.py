"""Independent checks built straight from the Newtonian equations.

Nothing here uses the closed-form masses.  :func:`cc_residual` evaluates
the central-configuration equations for any planar configuration, and
:func:`solve_reduced_system` recovers the masses by a linear solve of the
reduced symmetric system.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg

from .core import ShapeParams, center_ordinate
from .errors import CollisionDetected, InvalidInput, SingularSystem

__all__ = [
    "COLLISION_DISTANCE",
    "PlanarConfig",
    "ResidualReport",
    "ReducedSolution",
    "symmetric_config",
    "pair_forces",
    "potential",
    "cc_residual",
    "reduced_system",
    "solve_reduced_system",
    "check_reduction",
]

COLLISION_DISTANCE = 1e-12
PIVOT_FLOOR = 1e-13


@dataclass(frozen=True)
class PlanarConfig:
    """Point masses in the plane; at least three bodies."""

    positions: np.ndarray
    masses: np.ndarray

    def __post_init__(self):
        q = np.array(self.positions, dtype=float)
        m = np.array(self.masses, dtype=float)
        if q.ndim != 2 or q.shape[1] != 2 or q.shape[0] < 3:
            raise InvalidInput(f"positions must have shape (n, 2) with n >= 3, got {q.shape}")
        if m.shape != (q.shape[0],):
            raise InvalidInput(f"need one mass per body, got {m.shape} for {q.shape[0]} bodies")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(m))):
            raise InvalidInput("positions and masses must be finite")
        if np.any(m <= 0):
            raise InvalidInput(f"masses must be strictly positive, got {m.tolist()}")
        dist = _distances(q)
        i, j = np.triu_indices(len(m), 1)
        if np.any(dist[i, j] < COLLISION_DISTANCE):
            k = int(np.argmin(dist[i, j]))
            raise CollisionDetected(f"bodies {i[k] + 1} and {j[k] + 1} are {dist[i[k], j[k]]:.3g} apart")
        q.setflags(write=False)
        m.setflags(write=False)
        object.__setattr__(self, "positions", q)
        object.__setattr__(self, "masses", m)

    @property
    def center_of_mass(self) -> np.ndarray:
        return self.masses @ self.positions / self.masses.sum()


def symmetric_config(params: ShapeParams, masses) -> PlanarConfig:
    """Bodies at (-1,0), (1,0), (0,t), (0,s) carrying ``masses``."""
    return PlanarConfig(params.positions(), np.asarray(masses, dtype=float))


def _distances(q: np.ndarray) -> np.ndarray:
    diff = q[None, :, :] - q[:, None, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def pair_forces(config: PlanarConfig) -> np.ndarray:
    """F_i = sum_{j != i} m_j (q_j - q_i) / |q_j - q_i|^3 for each body, shape (n, 2)."""
    q, m = config.positions, config.masses
    diff = q[None, :, :] - q[:, None, :]  # diff[i, j] = q_j - q_i
    r = _distances(q)
    np.fill_diagonal(r, np.inf)
    return np.einsum("ij,ijk->ik", m[None, :] / r**3, diff)


def potential(config: PlanarConfig) -> float:
    """U = sum_{k<j} m_k m_j / |q_k - q_j|."""
    m = config.masses
    i, j = np.triu_indices(len(m), 1)
    r = _distances(config.positions)[i, j]
    return float(np.sum(m[i] * m[j] / r))


@dataclass(frozen=True)
class ResidualReport:
    lambda_est: float
    max_residual: float
    per_body_residual: tuple[float, ...]
    lambda_ui: float
    is_central: bool

    def as_dict(self) -> dict:
        return {
            "lambda_est": self.lambda_est,
            "max_residual": self.max_residual,
            "per_body_residual": list(self.per_body_residual),
            "lambda_ui": self.lambda_ui,
            "is_central": self.is_central,
        }


def residual_vectors(config: PlanarConfig, lam: float) -> np.ndarray:
    """F_i + lam (q_i - c) for every body; zero for a central configuration."""
    r = config.positions - config.center_of_mass
    return pair_forces(config) + lam * r


def cc_residual(config: PlanarConfig, tol: float = 1e-9) -> ResidualReport:
    """Fit the multiplier by least squares and report how far the configuration is from central.

    lambda_est minimizes sum_i |F_i + lambda (q_i - c)|^2.  lambda_ui is
    U / I with I the moment of inertia about the center of mass.
    """
    if not tol > 0:
        raise InvalidInput(f"tol must be positive, got {tol!r}")
    r = config.positions - config.center_of_mass
    forces = pair_forces(config)
    inertia_geom = float(np.sum(r * r))
    lam = -float(np.sum(forces * r)) / inertia_geom
    res = forces + lam * r
    max_res = float(np.max(np.abs(res)))
    per_body = tuple(float(v) for v in np.max(np.abs(res), axis=1))
    inertia = float(config.masses @ np.sum(r * r, axis=1))
    lam_ui = potential(config) / inertia
    return ResidualReport(lam, max_res, per_body, lam_ui, bool(max_res < tol and lam > 0))


class ReducedSolution(NamedTuple):
    m2: float
    m3: float
    m4: float
    consistency_residual: float


def reduced_system(params: ShapeParams, lam: float, c_y: float):
    """The four symmetric equations as (A, b) with unknowns (m2, m3, m4).

    Rows: x-equation of body 1, y-equation of body 1, y-equation of
    body 3, y-equation of body 4.  m1 = m2 and c_x = 0 are already used.
    """
    s, t = params.s, params.t
    s3 = (1.0 + s * s) ** 1.5
    t3 = (1.0 + t * t) ** 1.5
    d = t - s
    d3 = d**3
    A = np.array(
        [
            [2.0 / 8.0, 1.0 / t3, 1.0 / s3],
            [0.0, t / t3, s / s3],
            [-2.0 * t / t3, 0.0, (s - t) / d3],
            [-2.0 * s / s3, (t - s) / d3, 0.0],
        ]
    )
    b = lam * np.array([1.0, c_y, -(t - c_y), -(s - c_y)])
    return A, b


def solve_reduced_system(params: ShapeParams, lam: float = 1.0, c_y: float | None = None) -> ReducedSolution:
    """Solve rows {1, 3, 4} of the reduced system and check row 2.

    ``c_y`` defaults to the value from :func:`cc4.core.center_ordinate`;
    pass another value to see the consistency residual blow up.
    """
    if not lam > 0:
        raise InvalidInput(f"lambda must be positive, got {lam!r}")
    if c_y is None:
        c_y = center_ordinate(params)
    A, b = reduced_system(params, lam, c_y)
    square = A[[0, 2, 3]]
    rhs = b[[0, 2, 3]]
    # row equilibration so the pivot test is scale free
    scale = np.max(np.abs(square), axis=1)
    square = square / scale[:, None]
    rhs = rhs / scale
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(square)
    pivot = float(np.min(np.abs(np.diag(lu))))
    if pivot < PIVOT_FLOOR:
        raise SingularSystem(f"smallest scaled pivot {pivot:.3g} at (s, t) = ({params.s}, {params.t})")
    m2, m3, m4 = scipy.linalg.lu_solve((lu, piv), rhs)
    consistency = abs(float(A[1] @ np.array([m2, m3, m4]) - b[1]))
    return ReducedSolution(float(m2), float(m3), float(m4), consistency)


def check_reduction(params: ShapeParams, masses, lam: float = 1.0, tol: float = 1e-12) -> bool:
    """Whether ``masses`` satisfy the two symmetry consequences m1 = m2 and c_x = 0.

    Uses the x-equations of all four bodies.  Passing says nothing about
    centrality.
    """
    m1, m2, m3, m4 = (float(m) for m in masses)
    s3 = (1.0 + params.s**2) ** 1.5
    t3 = (1.0 + params.t**2) ** 1.5
    c_x = (m2 - m1) / (m1 + m2 + m3 + m4)
    # x-equations of bodies 3 and 4 read (m2 - m1)/r^3 = lam c_x with r^3 = t3 and s3;
    # t3 != s3, so both hold only with m1 = m2
    forced_equal = abs(m1 - m2) <= tol * max(1.0, abs(m1), abs(m2))
    # x-equations of bodies 1 and 2 add up to (m2 - m1)/4 - 2 lam c_x = 0
    body1 = 2.0 / 8.0 * m2 + m3 / t3 + m4 / s3 - lam * (1.0 + c_x)
    body2 = -(2.0 / 8.0 * m1 + m3 / t3 + m4 / s3) + lam * (1.0 - c_x)
    centered = abs(c_x) <= tol and abs(body1 + body2) <= tol * max(1.0, lam)
    return bool(forced_equal and centered)
