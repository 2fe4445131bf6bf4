"""Where in the (s, t) plane all four masses are positive.

The mass signs follow from the discriminants alone (p5 > 0 and t > c_y on
the whole domain):

    sign(m4) = sign(p1 p2)
    sign(m3) = sign(p3 p4 p2)
    sign(m1) = sign(-p4 p2)

Regions are named without reference to any picture:

    A   m4 > 0 (but not every mass), t < sqrt(3)
    B   m4 > 0 (but not every mass), t > sqrt(3)
    C   all masses positive, t < sqrt(3)
    D   all masses positive, t > sqrt(3)

The curves p1 = 0 (t = sqrt(3)), p2 = 0 and p4 = 0 (t = s + sqrt(1+s^2))
meet at a single point, (sqrt(3)/3, sqrt(3)).  Note that (sqrt(3)/3, 3) is
*not* that point: |p1| there is about 23.6.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import ndimage

from .core import (
    EPS_SIGN,
    SQRT3,
    center_ordinate_array,
    classify_sign,
    closed_form_masses,
    discriminant_scales,
    discriminants,
)
from .errors import InvalidInput, LabelAbsent, RootNotBracketed

__all__ = [
    "RegionLabel",
    "BoundaryPolyline",
    "RegionRaster",
    "Extent",
    "label_codes",
    "classify",
    "p2_curve_t",
    "trace_p1",
    "trace_p2",
    "trace_p4",
    "newton2d",
    "triple_intersection",
    "scan",
    "all_positive_components",
    "component_extents",
    "locate_q4_centered_point",
]

BRACKET_LIMIT = 1e6
BISECT_WIDTH = 1e-12


class RegionLabel(str, enum.Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    BOUNDARY = "Boundary"
    INFEASIBLE = "Infeasible"
    INVALID = "Invalid"

    @property
    def code(self) -> int:
        return _CODES[self]

    @classmethod
    def from_code(cls, code: int) -> "RegionLabel":
        return _LABELS[int(code)]


_LABELS = list(RegionLabel)
_CODES = {label: i for i, label in enumerate(_LABELS)}


def label_codes(s, t, eps_sign: float = EPS_SIGN) -> np.ndarray:
    """Integer region codes (see :meth:`RegionLabel.from_code`) for arrays of s and t."""
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    valid = np.isfinite(s) & np.isfinite(t) & (s > 0) & (t > s)
    codes = np.full(s.shape, RegionLabel.INVALID.code, dtype=np.int8)
    if not valid.any():
        return codes
    sv, tv = s[valid], t[valid]
    with np.errstate(all="ignore"):
        p = discriminants(sv, tv)
        scales = discriminant_scales(sv, tv)
    g1, g2, g3, g4, _ = (classify_sign(v, sc, eps_sign) for v, sc in zip(p, scales))

    m4_pos = g1 * g2 > 0
    m3_pos = g3 * g4 * g2 > 0
    m1_pos = -g4 * g2 > 0
    below = tv < SQRT3

    out = np.full(sv.shape, RegionLabel.INFEASIBLE.code, dtype=np.int8)
    out[m4_pos & below] = RegionLabel.A.code
    out[m4_pos & ~below] = RegionLabel.B.code
    every = m4_pos & m3_pos & m1_pos
    out[every & below] = RegionLabel.C.code
    out[every & ~below] = RegionLabel.D.code
    out[(g1 == 0) | (g2 == 0) | (g4 == 0)] = RegionLabel.BOUNDARY.code
    codes[valid] = out
    return codes


def classify(s: float, t: float, eps_sign: float = EPS_SIGN) -> RegionLabel:
    """Region of a single point; invalid geometry gives ``RegionLabel.INVALID``."""
    return RegionLabel.from_code(label_codes(s, t, eps_sign)[()])


# -- boundary curves ---------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPolyline:
    curve_id: str
    samples: np.ndarray  # (n, 2) rows of (s, t)
    max_defect: float
    in_domain: np.ndarray = field(default=None)

    @property
    def s(self) -> np.ndarray:
        return self.samples[:, 0]

    @property
    def t(self) -> np.ndarray:
        return self.samples[:, 1]

    @property
    def defects(self) -> np.ndarray:
        return np.abs(_CURVE_FUNCS[self.curve_id](self.s, self.t))


def _p1(s, t):
    return discriminants(s, t)[0]


def _p2(s, t):
    return discriminants(s, t)[1]


def _p4(s, t):
    return discriminants(s, t)[3]


_CURVE_FUNCS = {"P1": _p1, "P2": _p2, "P4": _p4}


def _polyline(curve_id, s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    with np.errstate(all="ignore"):
        defects = np.abs(_CURVE_FUNCS[curve_id](s, t))
    in_domain = (s > 0) & (t > s)
    return BoundaryPolyline(curve_id, np.column_stack([s, t]), float(np.max(defects)), in_domain)


def _check_range(s_lo, s_hi, n):
    if not (math.isfinite(s_lo) and math.isfinite(s_hi) and s_lo < s_hi):
        raise InvalidInput(f"need s_lo < s_hi, got {s_lo!r}, {s_hi!r}")
    if int(n) != n or n < 2:
        raise InvalidInput(f"need at least 2 samples, got {n!r}")


def trace_p1(s_lo: float, s_hi: float, n: int) -> BoundaryPolyline:
    """The horizontal line t = sqrt(3), for 0 <= s_lo < s_hi < sqrt(3)."""
    _check_range(s_lo, s_hi, n)
    if s_lo < 0 or s_hi >= SQRT3:
        raise InvalidInput(f"need 0 <= s_lo < s_hi < sqrt(3), got {s_lo!r}, {s_hi!r}")
    s = np.linspace(s_lo, s_hi, int(n))
    return _polyline("P1", s, np.full_like(s, SQRT3))


def _p2_gap(s: float, t: float) -> float:
    # 2(t - s) - sqrt(1+s^2) sqrt(1+t^2); zero exactly where p2 is
    return 2.0 * (t - s) - math.sqrt(1.0 + s * s) * math.sqrt(1.0 + t * t)


def p2_curve_t(s: float) -> float:
    """The unique t > s on the curve p2 = 0, for 0 <= s < sqrt(3).

    The gap 2(t-s) - sqrt(1+s^2) sqrt(1+t^2) is negative at t = s and
    increasing in t, so one bracket-and-bisect pass followed by a short
    Newton polish finds it.
    """
    if not (0.0 <= s < SQRT3):
        raise InvalidInput(f"p2 = 0 has a root only for 0 <= s < sqrt(3), got s={s!r}")
    rs = math.sqrt(1.0 + s * s)
    lo, hi = s, s + 1.0
    while _p2_gap(s, hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > BRACKET_LIMIT:
            raise RootNotBracketed(f"no sign change below t = {BRACKET_LIMIT:g} for s = {s!r}")
    while hi - lo > BISECT_WIDTH:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _p2_gap(s, mid) > 0.0:
            hi = mid
        else:
            lo = mid
    t = 0.5 * (lo + hi)
    for _ in range(3):
        rt = math.sqrt(1.0 + t * t)
        slope = 2.0 - rs * t / rt
        step = _p2_gap(s, t) / slope
        if not math.isfinite(step) or step == 0.0:
            break
        t -= step
    return t


def trace_p2(s_lo: float, s_hi: float, n: int) -> BoundaryPolyline:
    """Sample the curve p2 = 0 at n evenly spaced s in [s_lo, s_hi]."""
    _check_range(s_lo, s_hi, n)
    if s_lo < 0 or s_hi >= SQRT3:
        raise InvalidInput(f"need 0 <= s_lo < s_hi < sqrt(3), got {s_lo!r}, {s_hi!r}")
    s = np.linspace(s_lo, s_hi, int(n))
    t = np.array([p2_curve_t(float(v)) for v in s])
    if np.any(np.diff(t) <= 0):
        k = int(np.argmin(np.diff(t)))
        raise ArithmeticError(f"p2 curve not increasing between s={s[k]!r} and s={s[k + 1]!r}")
    return _polyline("P2", s, t)


def trace_p4(s_lo: float, s_hi: float, n: int) -> BoundaryPolyline:
    """t = s + sqrt(1 + s^2).  s_lo = 0 is accepted; that sample is flagged out of domain."""
    _check_range(s_lo, s_hi, n)
    if s_lo < 0:
        raise InvalidInput(f"need s_lo >= 0, got {s_lo!r}")
    s = np.linspace(s_lo, s_hi, int(n))
    return _polyline("P4", s, s + np.sqrt(1.0 + s * s))


# -- intersection points -----------------------------------------------------


def _jac_p1(s, t):
    return (0.0, -3.0 * t * math.sqrt(1.0 + t * t))


def _jac_p2(s, t):
    rt3 = (1.0 + t * t) ** 1.5
    d = t - s
    ds = -24.0 * s * (1.0 + s * s) ** -2.5 - 3.0 * rt3 / d**4
    dt = -3.0 * t * math.sqrt(1.0 + t * t) / d**3 + 3.0 * rt3 / d**4
    return (ds, dt)


def _jac_p4(s, t):
    d = t - s
    return (3.0 * s * math.sqrt(1.0 + s * s) + 3.0 * d * d, -3.0 * d * d)


def newton2d(
    funcs: tuple[Callable, Callable],
    jacs: tuple[Callable, Callable],
    start: tuple[float, float],
    tol: float = 1e-15,
    max_iter: int = 50,
) -> tuple[float, float]:
    """Newton's method for two scalar equations in (s, t)."""
    s, t = map(float, start)
    for _ in range(max_iter):
        f = np.array([float(g(s, t)) for g in funcs])
        J = np.array([jac(s, t) for jac in jacs], dtype=float)
        step = np.linalg.solve(J, f)
        s, t = s - float(step[0]), t - float(step[1])
        if np.max(np.abs(step)) <= tol * max(1.0, abs(s), abs(t)):
            break
    else:
        raise ArithmeticError(f"Newton did not converge from {start!r}")
    return s, t


def triple_intersection(start: tuple[float, float] = (0.5, 1.8)) -> tuple[float, float]:
    """The common point of p1 = 0, p2 = 0 and p4 = 0.

    Solved on p1 = p4 = 0 by Newton, then checked against p2.
    """
    s, t = newton2d((_p1, _p4), (_jac_p1, _jac_p4), start)
    p2 = float(_p2(s, t))
    if abs(p2) > 1e-10:
        raise ArithmeticError(f"p2 = {p2!r} at the p1/p4 intersection ({s!r}, {t!r})")
    return s, t


# -- rasters -----------------------------------------------------------------


@dataclass(frozen=True)
class RegionRaster:
    """Cell-centered classification of a rectangular (s, t) window.

    Arrays are indexed [row, col] = [t index, s index].  Mass and p-value
    arrays hold NaN where undefined (Invalid cells; masses also on
    Boundary cells).
    """

    s_range: tuple[float, float]
    t_range: tuple[float, float]
    resolution: tuple[int, int]  # (n_s, n_t)
    lam: float
    eps_sign: float
    s: np.ndarray
    t: np.ndarray
    codes: np.ndarray
    p: np.ndarray  # (5, n_t, n_s)
    m1: np.ndarray
    m3: np.ndarray
    m4: np.ndarray
    c_y: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.codes.shape

    @property
    def cell_area(self) -> float:
        (s0, s1), (t0, t1) = self.s_range, self.t_range
        return (s1 - s0) / self.resolution[0] * (t1 - t0) / self.resolution[1]

    def label_at(self, row: int, col: int) -> RegionLabel:
        return RegionLabel.from_code(self.codes[row, col])

    def mask(self, *labels: RegionLabel) -> np.ndarray:
        return np.isin(self.codes, [RegionLabel(lab).code for lab in labels])

    def counts(self) -> dict[str, int]:
        return {lab.value: int(np.count_nonzero(self.codes == lab.code)) for lab in RegionLabel}


def _cell_centers(lo, hi, n):
    return lo + (np.arange(n) + 0.5) * (hi - lo) / n


def scan(
    s_range: tuple[float, float] = (0.01, 2.5),
    t_range: tuple[float, float] = (0.02, 4.5),
    resolution: tuple[int, int] | int = (512, 512),
    lam: float = 1.0,
    eps_sign: float = EPS_SIGN,
) -> RegionRaster:
    """Classify every cell center of the window and attach the closed-form masses."""
    if isinstance(resolution, int):
        resolution = (resolution, resolution)
    n_s, n_t = (int(r) for r in resolution)
    (s0, s1), (t0, t1) = (tuple(map(float, s_range)), tuple(map(float, t_range)))
    if n_s < 1 or n_t < 1:
        raise InvalidInput(f"resolution must be positive, got {resolution!r}")
    if not (s0 < s1 and t0 < t1) or not all(map(math.isfinite, (s0, s1, t0, t1))):
        raise InvalidInput(f"empty or non-finite window s={s_range!r}, t={t_range!r}")
    if not lam > 0:
        raise InvalidInput(f"lambda must be positive, got {lam!r}")

    s = _cell_centers(s0, s1, n_s)
    t = _cell_centers(t0, t1, n_t)
    S, T = np.meshgrid(s, t)  # row-major: rows follow t
    codes = label_codes(S, T, eps_sign)

    invalid = codes == RegionLabel.INVALID.code
    undefined = invalid | (codes == RegionLabel.BOUNDARY.code)
    with np.errstate(all="ignore"):
        p = np.array(discriminants(S, T))
        m2, m3, m4, _ = closed_form_masses(S, T, lam)
        c_y = center_ordinate_array(S, T)
    p[:, invalid] = np.nan
    c_y[invalid] = np.nan
    for arr in (m2, m3, m4):
        arr[undefined] = np.nan
    return RegionRaster(
        (s0, s1), (t0, t1), (n_s, n_t), float(lam), float(eps_sign), s, t, codes, p, m2, m3, m4, c_y
    )


@dataclass(frozen=True)
class Extent:
    """Bounding box (over cell centers) and area of the cells carrying one label."""

    label: RegionLabel
    s_min: float
    s_max: float
    t_min: float
    t_max: float
    n_cells: int
    area: float
    n_components: int
    rows: tuple[int, int]
    cols: tuple[int, int]

    def margin_cells(self, shape: tuple[int, int]) -> int:
        """Fewest cells between the labeled set and any window edge."""
        n_rows, n_cols = shape
        return min(self.rows[0], n_rows - 1 - self.rows[1], self.cols[0], n_cols - 1 - self.cols[1])

    def as_dict(self) -> dict:
        return {
            "label": self.label.value,
            "s_min": self.s_min,
            "s_max": self.s_max,
            "t_min": self.t_min,
            "t_max": self.t_max,
            "n_cells": self.n_cells,
            "area": self.area,
            "n_components": self.n_components,
        }


_FOUR_CONNECTED = ndimage.generate_binary_structure(2, 1)


def all_positive_components(raster: RegionRaster) -> tuple[np.ndarray, int]:
    """4-connected components of the cells where every mass is positive."""
    labels, n = ndimage.label(raster.mask(RegionLabel.C, RegionLabel.D), structure=_FOUR_CONNECTED)
    return labels, int(n)


def component_extents(raster: RegionRaster, label: RegionLabel) -> Extent:
    label = RegionLabel(label)
    mask = raster.mask(label)
    if not mask.any():
        raise LabelAbsent(f"no cell labeled {label.value}")
    rows, cols = np.nonzero(mask)
    _, n_comp = ndimage.label(mask, structure=_FOUR_CONNECTED)
    return Extent(
        label,
        float(raster.s[cols.min()]),
        float(raster.s[cols.max()]),
        float(raster.t[rows.min()]),
        float(raster.t[rows.max()]),
        int(mask.sum()),
        float(mask.sum()) * raster.cell_area,
        int(n_comp),
        (int(rows.min()), int(rows.max())),
        (int(cols.min()), int(cols.max())),
    )


# -- the q4-centered point ---------------------------------------------------


@dataclass(frozen=True)
class CenteredSearch:
    n_candidates: int
    n_clusters: int
    seeds: tuple[tuple[float, float], ...]
    points: tuple[tuple[float, float], ...]
    c_y_gap: tuple[float, ...]


def locate_q4_centered_point(
    n: int = 2000, s_range: tuple[float, float] = (0.0, 3.0), t_range: tuple[float, float] = (0.0, 3.0)
) -> CenteredSearch:
    """Grid search for shapes with c_y = s lying on p2 = 0.

    A grid cell is a candidate when both c_y - s and p2 change sign across
    its four corners.  Candidate cells are clustered (8-connectivity) and
    each cluster centroid seeds Newton on p2 = p1 = 0.  ``c_y_gap`` holds
    |c_y - s| at each converged point.
    """
    s = np.linspace(*s_range, n + 1)[1:]
    t = np.linspace(*t_range, n + 1)[1:]
    S, T = np.meshgrid(s, t)
    with np.errstate(all="ignore"):
        gap = np.where(T > S, center_ordinate_array(S, T) - S, np.nan)
        p2 = np.where(T > S, discriminants(S, T)[1], np.nan)

    def crosses(f):
        corners = np.stack([f[:-1, :-1], f[1:, :-1], f[:-1, 1:], f[1:, 1:]])
        ok = np.all(np.isfinite(corners), axis=0)
        return ok & (corners.min(axis=0) <= 0) & (corners.max(axis=0) >= 0)

    cand = crosses(gap) & crosses(p2)
    labels, n_clusters = ndimage.label(cand, structure=np.ones((3, 3), dtype=bool))
    seeds, points, gaps = [], [], []
    for k in range(1, n_clusters + 1):
        rows, cols = np.nonzero(labels == k)
        seed = (float(s[cols].mean() + 0.5 * (s[1] - s[0])), float(t[rows].mean() + 0.5 * (t[1] - t[0])))
        point = newton2d((_p2, _p1), (_jac_p2, _jac_p1), seed)
        seeds.append(seed)
        points.append(point)
        gaps.append(abs(float(center_ordinate_array(*point)) - point[0]))
    return CenteredSearch(int(cand.sum()), int(n_clusters), tuple(seeds), tuple(points), tuple(gaps))
