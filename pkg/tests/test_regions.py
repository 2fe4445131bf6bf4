import math

import numpy as np
import pytest

from cc4.core import SQRT3, ShapeParams, discriminants, solve_masses
from cc4.errors import InvalidInput, LabelAbsent, RootNotBracketed
from cc4.regions import (
    RegionLabel,
    all_positive_components,
    classify,
    component_extents,
    label_codes,
    locate_q4_centered_point,
    p2_curve_t,
    scan,
    trace_p1,
    trace_p2,
    trace_p4,
    triple_intersection,
)


@pytest.mark.parametrize(
    "s, t, label",
    [
        (0.1, 1.5, RegionLabel.C),
        (1.0, 2.0, RegionLabel.D),
        (2.0, 1.0, RegionLabel.INVALID),
        (0.0, 1.0, RegionLabel.INVALID),
        (math.nan, 1.0, RegionLabel.INVALID),
        (0.5, SQRT3, RegionLabel.BOUNDARY),
        (0.5, 2.0, RegionLabel.INFEASIBLE),
    ],
)
def test_classify_examples(s, t, label):
    assert classify(s, t) == label


def test_classify_c_point_signs():
    p1, p2, p3, p4, _ = discriminants(0.1, 1.5)
    assert p1 > 0 and p2 > 0 and p3 < 0 and p4 < 0


def test_region_a_and_b_have_only_m4_positive():
    rng = np.random.default_rng(2)
    s = rng.uniform(0.01, 2.5, 5000)
    t = rng.uniform(0.02, 4.5, 5000)
    codes = label_codes(s, t)
    for lab in (RegionLabel.A, RegionLabel.B):
        pick = codes == lab.code
        assert pick.any()
        sol = [solve_masses(ShapeParams(a, b)) for a, b in zip(s[pick], t[pick])]
        assert all(x.m4 > 0 and not x.feasible for x in sol)
        assert np.all((t[pick] < SQRT3) == (lab is RegionLabel.A))


def test_sign_law_matches_solver_on_raster():
    raster = scan((0.01, 2.5), (0.02, 4.5), (96, 96))
    for i, t in enumerate(raster.t):
        for j, s in enumerate(raster.s):
            label = raster.label_at(i, j)
            if label in (RegionLabel.BOUNDARY, RegionLabel.INVALID):
                continue
            sol = solve_masses(ShapeParams(s, t))
            assert (label in (RegionLabel.C, RegionLabel.D)) == sol.feasible
            assert (label in (RegionLabel.A, RegionLabel.B, RegionLabel.C, RegionLabel.D)) == (sol.m4 > 0)


def test_p2_curve_known_points():
    assert p2_curve_t(0.0) == pytest.approx(1 / math.sqrt(3), rel=1e-14)
    assert p2_curve_t(SQRT3 / 3) == pytest.approx(SQRT3, rel=1e-14)
    t = p2_curve_t(1.7)
    assert 20 < t < math.inf


def test_p2_curve_defect_small():
    line = trace_p2(0.0, 1.72, 300)
    assert line.max_defect < 1e-11
    assert np.all(line.s < SQRT3)


def test_p2_curve_monotone_with_positive_difference_quotient():
    h = 1e-4
    for s in np.linspace(0.0, 1.7, 60):
        assert (p2_curve_t(s + h) - p2_curve_t(s)) / h > 0
    assert np.all(np.diff(trace_p2(0.0, 1.7, 500).t) > 0)


def test_p2_curve_tends_to_infinity_near_sqrt3():
    assert p2_curve_t(1.72) > 10
    assert p2_curve_t(1.7320) > p2_curve_t(1.73) > p2_curve_t(1.72)


def test_p2_curve_unbracketed_close_to_sqrt3():
    with pytest.raises(RootNotBracketed):
        p2_curve_t(math.nextafter(SQRT3, 0.0))


@pytest.mark.parametrize("args", [(0.0, 2.0, 10), (-0.1, 1.0, 10), (1.0, 0.5, 10), (0.0, 1.0, 1)])
def test_trace_p2_rejects_bad_range(args):
    with pytest.raises(InvalidInput):
        trace_p2(*args)


def test_trace_p4_points():
    line = trace_p4(0.0, 2.0, 7)
    assert line.samples[0].tolist() == [0.0, 1.0]
    assert not line.in_domain[0] and line.in_domain[1:].all()
    assert p4_t(SQRT3 / 3) == pytest.approx(SQRT3, rel=1e-15)
    assert p4_t(1.0) == pytest.approx(1 + math.sqrt(2), rel=1e-15)
    assert abs(discriminants(1.0, p4_t(1.0))[3]) < 1e-14
    gaps = line.t - line.s - np.sqrt(1 + line.s**2)
    assert np.max(np.abs(gaps)) < 1e-14


def p4_t(s):
    return trace_p4(s, s + 1.0, 2).t[0]


def test_trace_p1_is_horizontal():
    line = trace_p1(0.01, 1.7, 5)
    assert np.all(line.t == SQRT3)
    assert line.max_defect < 1e-14


def test_triple_intersection():
    s, t = triple_intersection()
    assert s == pytest.approx(0.5773502691896258, abs=1e-12)
    assert t == pytest.approx(1.7320508075688772, abs=1e-12)
    p1, p2, _, p4, _ = discriminants(s, t)
    assert max(abs(p1), abs(p2), abs(p4)) < 1e-10
    assert classify(s, t) == RegionLabel.BOUNDARY


def test_triple_intersection_from_other_seeds():
    for seed in [(0.5, 1.8), (0.7, 1.6), (0.3, 2.0)]:
        s, t = triple_intersection(seed)
        assert (s, t) == pytest.approx((SQRT3 / 3, SQRT3), abs=1e-12)


def test_printed_point_is_off_the_p1_curve():
    p1 = discriminants(SQRT3 / 3, 3.0)[0]
    assert abs(p1) > 23


@pytest.fixture(scope="module")
def default_raster():
    return scan()


def test_default_raster_has_two_all_positive_components(default_raster):
    _, n = all_positive_components(default_raster)
    assert n == 2
    assert component_extents(default_raster, RegionLabel.C).n_components == 1
    assert component_extents(default_raster, RegionLabel.D).n_components == 1


def test_component_boxes(default_raster):
    c = component_extents(default_raster, RegionLabel.C)
    assert 0 < c.s_min and c.s_max < SQRT3
    assert SQRT3 / 3 < c.t_min and c.t_max < SQRT3
    d = component_extents(default_raster, RegionLabel.D)
    assert 0 < d.s_min and d.s_max < SQRT3
    assert SQRT3 < d.t_min and d.t_max < SQRT3 + 2
    assert d.margin_cells(default_raster.shape) >= 2
    assert c.area > 0 and d.area > c.area


def test_no_all_positive_cell_hugs_the_diagonal(default_raster):
    S, T = np.meshgrid(default_raster.s, default_raster.t)
    cd = default_raster.mask(RegionLabel.C, RegionLabel.D)
    assert np.all(T[cd] - S[cd] > 1e-9)
    # D pinches toward the corner (sqrt3, sqrt3) where p1 = p3 = 0 meets t = s
    assert np.min(T[cd] - S[cd]) < 0.05


def test_no_boundary_from_p5_alone(default_raster):
    boundary = default_raster.mask(RegionLabel.BOUNDARY)
    p = default_raster.p
    assert np.all(p[4][np.isfinite(p[4])] > 0)
    with np.errstate(invalid="ignore"):
        others = (np.abs(p[0]) < 1e-6) | (np.abs(p[1]) < 1e-6) | (np.abs(p[3]) < 1e-6)
    assert np.all(others[boundary])


def test_raster_invalid_only_off_domain(default_raster):
    S, T = np.meshgrid(default_raster.s, default_raster.t)
    invalid = default_raster.mask(RegionLabel.INVALID)
    assert np.array_equal(invalid, (T <= S) | (S <= 0))
    assert np.all(np.isnan(default_raster.m1[invalid]))


def test_raster_above_d_has_no_positive_cells():
    raster = scan((0.01, 2.5), (SQRT3 + 2.2, 6.0), (64, 64))
    assert not raster.mask(RegionLabel.C, RegionLabel.D).any()


def test_label_absent():
    raster = scan((0.01, 2.5), (SQRT3 + 0.01, 4.5), (64, 64))
    with pytest.raises(LabelAbsent):
        component_extents(raster, RegionLabel.A)


def test_scan_is_deterministic():
    a = scan((0.01, 2.5), (0.02, 4.5), (50, 70))
    b = scan((0.01, 2.5), (0.02, 4.5), (50, 70))
    assert np.array_equal(a.codes, b.codes)
    assert np.array_equal(a.p, b.p, equal_nan=True)
    assert a.shape == (70, 50)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(s_range=(1.0, 1.0)),
        dict(t_range=(2.0, 1.0)),
        dict(resolution=(0, 10)),
        dict(lam=0.0),
    ],
)
def test_scan_rejects_bad_input(kwargs):
    with pytest.raises(InvalidInput):
        scan(**kwargs)


def test_single_cell_scan():
    raster = scan((0.01, 2.5), (0.02, 4.5), (1, 1))
    assert raster.shape == (1, 1)
    assert raster.label_at(0, 0) == RegionLabel.D


def test_locate_q4_centered_point_small_grid():
    found = locate_q4_centered_point(n=400)
    assert found.n_clusters == 1
    assert found.points[0] == pytest.approx((SQRT3 / 3, SQRT3), abs=1e-9)
    assert found.c_y_gap[0] < 1e-6


@pytest.mark.parametrize("t", [1.05, 1.3, 1.7])
def test_region_c_reaches_the_axis(t):
    for s in (1e-2, 1e-5, 1e-9):
        assert classify(s, t) == RegionLabel.C
