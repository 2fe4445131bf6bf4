"""
Rigid rotation of a central configuration
=========================================

Every planar central configuration rotates rigidly with angular rate
sqrt(lambda).  Integrate one period and watch the mutual distances.
"""

import math

from cc4 import ShapeParams, cc_residual, integrate, launch_relative_equilibrium, symmetric_config
from cc4.dynamics import rigid_rotation, rotation_period

shape = ShapeParams(1.0, 2.0)
state = launch_relative_equilibrium(shape, lam=1.0)
period = rotation_period(1.0)

final, report = integrate(state, period / 20_000, 20_000)
print("energy drift          ", report.energy_drift)
print("angular momentum drift", report.angular_momentum_drift)
print("distance drift        ", report.distance_drift)

###############################################################################
# Halving the step should cut the error by about 2**4.

drifts = [integrate(state, period / n, n)[1].distance_drift for n in (200, 400, 800)]
print("drifts", drifts, "ratios", drifts[0] / drifts[1], drifts[1] / drifts[2])

###############################################################################
# With equal masses the same shape is not central, so spinning it at the
# best-fit rate does not keep it rigid.

config = symmetric_config(shape, [1.0, 1.0, 1.0, 1.0])
lam = cc_residual(config).lambda_est
wrong = rigid_rotation(config.positions, config.masses, math.sqrt(lam))
_, bad = integrate(wrong, rotation_period(lam) / 20_000, 20_000)
print("equal masses, distance drift:", bad.distance_drift)
