import math

import numpy as np
import pytest

from cc4.core import SQRT3, ShapeParams, closed_form_masses, discriminants, solve_masses, solve_q4_centered
from cc4.errors import CollisionDetected, InvalidInput, SingularSystem
from cc4.verify import (
    PlanarConfig,
    cc_residual,
    check_reduction,
    potential,
    residual_vectors,
    solve_reduced_system,
    symmetric_config,
)

from oracles import masses_mp

M_AT_1_2 = (2.6832050421824638, 1.3469896357132398, 0.59035022542548788)


def test_equilateral_three_body_is_central():
    q = [[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]]
    rep = cc_residual(PlanarConfig(q, [1.0, 1.0, 1.0]))
    assert rep.is_central
    # three unit masses at unit side: acceleration sqrt3 toward a centroid 1/sqrt3 away
    assert rep.lambda_est == pytest.approx(3.0, rel=1e-14)
    assert rep.lambda_ui == pytest.approx(3.0, rel=1e-14)


def test_q4_centered_solution_is_central():
    sol = solve_q4_centered(1.0, 1.0)
    q = [[-1, 0], [1, 0], [0, SQRT3], [0, SQRT3 / 3]]
    rep = cc_residual(PlanarConfig(q, [1, 1, 1, 5 * SQRT3 / 9]))
    assert rep.is_central
    assert rep.lambda_est == pytest.approx(1.0, abs=1e-12)
    rep2 = cc_residual(symmetric_config(sol.params, sol.masses))
    assert rep2.max_residual < 1e-12


def test_q4_centered_lambda_two_is_central():
    sol = solve_q4_centered(2.0, 1.0)
    rep = cc_residual(symmetric_config(sol.params, sol.masses))
    assert rep.is_central and rep.lambda_est == pytest.approx(2.0, rel=1e-12)


def test_generic_shape_with_unit_masses_is_not_central():
    rep = cc_residual(symmetric_config(ShapeParams(0.3, 0.9), [1, 1, 1, 1]), tol=1e-9)
    assert not rep.is_central
    assert rep.max_residual > 1e-2


def test_residual_report_shape():
    rep = cc_residual(symmetric_config(ShapeParams(1, 2), [1, 2, 3, 4]))
    assert len(rep.per_body_residual) == 4
    assert rep.max_residual == max(rep.per_body_residual) >= 0


def test_lambda_estimate_minimizes_squared_residual():
    config = symmetric_config(ShapeParams(0.3, 0.9), [1, 1, 1, 1])
    lam = cc_residual(config).lambda_est

    def objective(x):
        return float(np.sum(residual_vectors(config, x) ** 2))

    base = objective(lam)
    assert objective(lam + 1e-6) > base
    assert objective(lam - 1e-6) > base


def test_potential_pairwise_sum():
    config = PlanarConfig([[0, 0], [3, 4], [0, 4]], [1, 2, 3])
    assert potential(config) == pytest.approx(1 * 2 / 5 + 1 * 3 / 4 + 2 * 3 / 3)


def test_collision_rejected():
    with pytest.raises(CollisionDetected):
        PlanarConfig([[0, 0], [0, 0], [1, 0], [0, 1]], [1, 1, 1, 1])


@pytest.mark.parametrize(
    "q, m",
    [
        ([[0, 0], [1, 0]], [1, 1]),
        ([[0, 0], [1, 0], [0, 1]], [1, 1]),
        ([[0, 0], [1, 0], [0, 1]], [1, 1, 0]),
        ([[0, 0], [1, 0], [0, 1]], [1, 1, -1]),
    ],
)
def test_planar_config_validation(q, m):
    with pytest.raises(InvalidInput):
        PlanarConfig(q, m)


def test_reduced_system_reference_point():
    red = solve_reduced_system(ShapeParams(1.0, 2.0), 1.0)
    np.testing.assert_allclose(red[:3], M_AT_1_2, rtol=1e-13)
    assert red.consistency_residual < 1e-12


def test_reduced_system_detects_wrong_center():
    p = ShapeParams(1.0, 2.0)
    c_y = solve_masses(p).c_y
    assert solve_reduced_system(p, 1.0, c_y=c_y + 0.1).consistency_residual > 1e-3


def test_reduced_system_singular_at_triple_point():
    with pytest.raises(SingularSystem):
        solve_reduced_system(ShapeParams(SQRT3 / 3, SQRT3), 1.0)


def test_reduced_system_agrees_with_mpmath_and_closed_forms():
    rng = np.random.default_rng(3)
    checked = 0
    while checked < 50:
        s, t = sorted(rng.uniform(0.01, 3.0, 2))
        p = ShapeParams(s, t)
        closed = closed_form_masses(s, t)
        if abs(discriminants(s, t)[1]) < 1e-3:
            continue
        red = solve_reduced_system(p)
        ref = masses_mp(s, t)
        scale = max(abs(v) for v in ref[:3])
        assert max(abs(a - b) for a, b in zip(red[:3], ref[:3])) <= 1e-10 * scale
        assert max(abs(a - b) for a, b in zip(red[:3], closed[:3])) <= 1e-10 * scale
        checked += 1


def test_check_reduction_examples():
    p = ShapeParams(1.0, 2.0)
    assert check_reduction(p, (2.68318, 2.68318, 1.34700, 0.59041), 1.0)
    assert not check_reduction(p, (1, 2, 1, 1), 1.0)
    assert not check_reduction(ShapeParams(0.2, 0.7), (1, 2, 1, 1), 1.0)
    assert check_reduction(p, (1, 1, 1, 1), 1.0)


def test_newtonian_closure_on_feasible_points():
    rng = np.random.default_rng(5)
    done = 0
    while done < 100:
        s, t = rng.uniform(0.01, 1.75), rng.uniform(1.0, 3.8)
        if not t > s:
            continue
        p = ShapeParams(s, t)
        try:
            sol = solve_masses(p, 1.7)
        except ArithmeticError:
            continue
        if not sol.feasible:
            continue
        rep = cc_residual(symmetric_config(p, sol.masses), tol=1e-9)
        assert rep.is_central
        assert abs(rep.lambda_est - 1.7) < 1e-9
        assert abs(rep.lambda_ui - rep.lambda_est) < 1e-9 * rep.lambda_est
        assert check_reduction(p, sol.masses, 1.7)
        done += 1
