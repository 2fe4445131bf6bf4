"""
The configuration centred on the inner body
===========================================

When the inner body coincides with the center of mass the shape is forced
to s = sqrt(3)/3, t = sqrt(3), the three outer masses are equal and the
inner mass is a free positive parameter.
"""

import math

from cc4 import cc_residual, lambda_for_target_m4, solve_q4_centered, symmetric_config

sol = solve_q4_centered(lam=1.0, m2=1.0)
print("shape  ", (sol.s, sol.t))
print("masses ", sol.masses)
print("m4 vs 5*sqrt(3)/9:", sol.m4, 5 * math.sqrt(3) / 9)

rep = cc_residual(symmetric_config(sol.params, sol.masses))
print("central:", rep.is_central, "residual:", rep.max_residual)

###############################################################################
# Any positive inner mass is reachable.  Fix the outer masses and ask for
# the multiplier that produces a given m4.

for target in (0.1, 1.0, 10.0):
    lam = lambda_for_target_m4(1.0, target)
    got = solve_q4_centered(lam, 1.0).m4
    print(f"m4 target {target:5.1f} -> lambda {lam:.6f} -> m4 {got:.12f}")
