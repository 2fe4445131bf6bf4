"""Closed-form masses for the symmetric concave four-body configuration.

Bodies sit at q1 = (-1, 0), q2 = (1, 0), q3 = (0, t), q4 = (0, s) with
t > s > 0.  The configuration is central for the masses returned by
:func:`solve_masses` (when they are all positive).  Symmetry forces
m1 = m2 and a center of mass on the axis, c = (0, c_y).

Everything here is dimensionless with the gravitational constant set to 1.
The array helpers :func:`discriminants`, :func:`center_ordinate_array` and
:func:`closed_form_masses` accept numpy arrays and are shared with the
raster scan in :mod:`cc4.regions`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateDenominator, InfeasibleMass, InvalidInput

__all__ = [
    "EPS_SIGN",
    "SQRT3",
    "Sign",
    "ShapeParams",
    "SignProfile",
    "MassSolution",
    "SpecialCaseSolution",
    "discriminants",
    "discriminant_scales",
    "classify_sign",
    "sign_profile",
    "center_ordinate",
    "center_ordinate_array",
    "closed_form_masses",
    "solve_masses",
    "solve_q4_centered",
    "lambda_for_target_m4",
]

EPS_SIGN = 1e-9
SQRT3 = math.sqrt(3.0)


class Sign(enum.IntEnum):
    NEGATIVE = -1
    BOUNDARY = 0
    POSITIVE = 1


@dataclass(frozen=True)
class ShapeParams:
    """Shape of the configuration: q4 = (0, s) inside, q3 = (0, t) at the apex."""

    s: float
    t: float

    def __post_init__(self):
        s, t = float(self.s), float(self.t)
        if not (math.isfinite(s) and math.isfinite(t)):
            raise InvalidInput(f"s and t must be finite, got s={s!r}, t={t!r}")
        if not t > s > 0.0:
            raise InvalidInput(f"need t > s > 0, got s={s!r}, t={t!r}")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "t", t)

    def positions(self) -> np.ndarray:
        """Positions q1..q4 as a (4, 2) array."""
        return np.array([[-1.0, 0.0], [1.0, 0.0], [0.0, self.t], [0.0, self.s]])


def discriminants(s, t):
    """Return (p1, p2, p3, p4, p5) evaluated at (s, t); works on arrays.

    p1 = 8 - (1+t^2)^(3/2)
    p2 = (2/sqrt(1+s^2))^3 - (sqrt(1+t^2)/(t-s))^3
    p3 = (1+s^2)^(3/2) - 8
    p4 = (1+s^2)^(3/2) - (t-s)^3
    p5 = (t-s)/(t-s)^3 + s/(1+s^2)^(3/2) - t/(1+t^2)^(3/2)
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    rs = np.sqrt(1.0 + s * s)
    rt = np.sqrt(1.0 + t * t)
    s3 = rs**3
    t3 = rt**3
    d = t - s
    d3 = d**3
    p1 = 8.0 - t3
    p2 = (2.0 / rs) ** 3 - (rt / d) ** 3
    p3 = s3 - 8.0
    p4 = s3 - d3
    p5 = d / d3 + s / s3 - t / t3
    return p1, p2, p3, p4, p5


def discriminant_scales(s, t):
    """Magnitude of the largest term in each discriminant, floored at 1."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    rs = np.sqrt(1.0 + s * s)
    rt = np.sqrt(1.0 + t * t)
    s3 = rs**3
    t3 = rt**3
    d = t - s
    one = np.ones_like(s + t)
    return (
        np.maximum(one, np.maximum(8.0, t3)),
        np.maximum(one, np.maximum((2.0 / rs) ** 3, np.abs(rt / d) ** 3)),
        np.maximum(one, np.maximum(8.0, s3)),
        np.maximum(one, np.maximum(s3, np.abs(d) ** 3)),
        np.maximum(one, np.maximum(np.abs(1.0 / (d * d)), np.maximum(s / s3, t / t3))),
    )


def classify_sign(value, scale, eps_sign=EPS_SIGN):
    """Ternary sign: 0 when |value| <= eps_sign * max(1, scale)."""
    value = np.asarray(value, dtype=float)
    tol = eps_sign * np.maximum(1.0, scale)
    return np.where(np.abs(value) <= tol, 0, np.sign(value)).astype(int)


@dataclass(frozen=True)
class SignProfile:
    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    sign1: Sign
    sign2: Sign
    sign3: Sign
    sign4: Sign
    sign5: Sign

    @property
    def values(self) -> tuple[float, float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4, self.p5)

    @property
    def signs(self) -> tuple[Sign, Sign, Sign, Sign, Sign]:
        return (self.sign1, self.sign2, self.sign3, self.sign4, self.sign5)

    def as_dict(self) -> dict:
        out = {f"p{i}": v for i, v in enumerate(self.values, 1)}
        out.update({f"sign{i}": int(g) for i, g in enumerate(self.signs, 1)})
        return out


def sign_profile(params: ShapeParams, eps_sign: float = EPS_SIGN) -> SignProfile:
    if not eps_sign >= 0:
        raise InvalidInput(f"eps_sign must be >= 0, got {eps_sign!r}")
    values = [float(v) for v in discriminants(params.s, params.t)]
    scales = discriminant_scales(params.s, params.t)
    signs = [Sign(int(classify_sign(v, sc, eps_sign))) for v, sc in zip(values, scales)]
    return SignProfile(*values, *signs)


def center_ordinate_array(s, t):
    """c_y = ts (1/(1+s^2)^(3/2) - 1/(1+t^2)^(3/2)) / p5, elementwise."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    s3 = (1.0 + s * s) ** 1.5
    t3 = (1.0 + t * t) ** 1.5
    d = t - s
    p5 = d / d**3 + s / s3 - t / t3
    return (t * s / s3 - t * s / t3) / p5


def center_ordinate(params: ShapeParams) -> float:
    """Ordinate of the center of mass forced by the central-configuration equations."""
    p5 = discriminants(params.s, params.t)[4]
    if not p5 > 0:
        # p5 > 0 holds on the whole domain; reaching this means a bug upstream
        raise ArithmeticError(f"p5 = {float(p5)!r} <= 0 at {params}")
    return float(center_ordinate_array(params.s, params.t))


def closed_form_masses(s, t, lam=1.0):
    """Return (m2, m3, m4, c_y) from the closed forms; works on arrays.

    m1 equals m2.  No guard against p2 = 0: callers decide how to treat
    the degenerate curve.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    s3 = (1.0 + s * s) ** 1.5
    t3 = (1.0 + t * t) ** 1.5
    d = t - s
    d3 = d**3
    p1, p2, p3, p4, p5 = discriminants(s, t)
    c_y = center_ordinate_array(s, t)
    # unit-lambda values first so that every mass is exactly lam * (unit mass)
    m4 = (t - c_y) / d * p1 / p2
    m3 = s * t3 / (s3 * s3 * d3) * (p3 * p4) / (p5 * p2)
    m2 = 8.0 * t3 * (t - c_y) / (2.0 * t * s3 * d3) * (d3 - s3) / p2
    return lam * m2, lam * m3, lam * m4, c_y


@dataclass(frozen=True)
class MassSolution:
    params: ShapeParams
    m1: float
    m2: float
    m3: float
    m4: float
    lam: float
    c_y: float
    profile: SignProfile
    feasible: bool

    @property
    def masses(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)

    @property
    def total_mass(self) -> float:
        return self.m1 + self.m2 + self.m3 + self.m4

    @property
    def ratios(self) -> tuple[float, float, float, float]:
        """Masses divided by m1; independent of lambda."""
        return tuple(m / self.m1 for m in self.masses)

    def as_dict(self) -> dict:
        return {
            "s": self.params.s,
            "t": self.params.t,
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "m4": self.m4,
            "lambda": self.lam,
            "c_y": self.c_y,
            "feasible": self.feasible,
        }


def solve_masses(params: ShapeParams, lam: float = 1.0, eps_sign: float = EPS_SIGN) -> MassSolution:
    """Masses that make the shape central with multiplier ``lam``.

    The result comes back even when some mass is non-positive; check
    ``feasible``.  Raises DegenerateDenominator on the p2 = 0 curve.
    """
    if not (math.isfinite(lam) and lam > 0):
        raise InvalidInput(f"lambda must be positive and finite, got {lam!r}")
    profile = sign_profile(params, eps_sign)
    if profile.sign2 == Sign.BOUNDARY:
        raise DegenerateDenominator(
            f"p2 = {profile.p2!r} is within eps_sign of zero at (s, t) = ({params.s}, {params.t})"
        )
    m2, m3, m4, c_y = (float(v) for v in closed_form_masses(params.s, params.t, lam))
    feasible = m2 > 0 and m3 > 0 and m4 > 0
    return MassSolution(params, m2, m2, m3, m4, float(lam), c_y, profile, feasible)


@dataclass(frozen=True)
class SpecialCaseSolution:
    """The configuration whose center of mass coincides with q4.

    Only the equilateral triangle with q4 at its center qualifies:
    t = sqrt(3), s = sqrt(3)/3, m1 = m2 = m3.
    """

    m1: float
    m2: float
    m3: float
    m4: float
    lam: float
    t: float = SQRT3
    s: float = SQRT3 / 3.0

    @property
    def params(self) -> ShapeParams:
        return ShapeParams(self.s, self.t)

    @property
    def masses(self) -> tuple[float, float, float, float]:
        return (self.m1, self.m2, self.m3, self.m4)

    def as_dict(self) -> dict:
        return {
            "s": self.s,
            "t": self.t,
            "m1": self.m1,
            "m2": self.m2,
            "m3": self.m3,
            "m4": self.m4,
            "lambda": self.lam,
        }


def _special_m4(lam: float, m2: float) -> float:
    return (8.0 / 9.0) * SQRT3 * lam - (SQRT3 / 3.0) * m2


def solve_q4_centered(lam: float, m2: float) -> SpecialCaseSolution:
    """Masses for the q4-centered configuration, given lambda and the common mass m2."""
    if not (math.isfinite(lam) and lam > 0 and math.isfinite(m2) and m2 > 0):
        raise InvalidInput(f"lambda and m2 must be positive, got lambda={lam!r}, m2={m2!r}")
    m4 = _special_m4(lam, m2)
    if not m4 > 0:
        raise InfeasibleMass(f"m4 = {m4!r} <= 0 for lambda={lam!r}, m2={m2!r}")
    return SpecialCaseSolution(m2, m2, m2, m4, float(lam))


def lambda_for_target_m4(m2: float, m4_target: float) -> float:
    """Multiplier for which :func:`solve_q4_centered` returns ``m4_target``."""
    if not (math.isfinite(m2) and m2 > 0 and math.isfinite(m4_target) and m4_target > 0):
        raise InvalidInput(f"m2 and m4_target must be positive, got m2={m2!r}, m4_target={m4_target!r}")
    return 9.0 / (8.0 * SQRT3) * (m4_target + (SQRT3 / 3.0) * m2)
