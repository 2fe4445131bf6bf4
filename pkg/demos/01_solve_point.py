"""
Masses for one shape
====================

Pick a shape (s, t), solve for the masses that make it central, and check
the answer by evaluating the gravitational forces directly.
"""

from cc4 import ShapeParams, cc_residual, solve_masses, symmetric_config

# The base bodies sit at (-1, 0) and (1, 0); the apex is (0, t) and the
# inner body is (0, s).
shape = ShapeParams(s=1.0, t=2.0)
sol = solve_masses(shape, lam=1.0)

print("masses      ", [round(m, 6) for m in sol.masses])
print("feasible    ", sol.feasible)
print("center y    ", sol.c_y)
print("signs       ", [int(x) for x in sol.profile.signs])

###############################################################################
# The residual check knows nothing about the closed forms.  It sums forces,
# fits the common multiplier by least squares and reports what is left over.

report = cc_residual(symmetric_config(shape, sol.masses))
print("lambda fit  ", report.lambda_est)
print("lambda U/I  ", report.lambda_ui)
print("max residual", report.max_residual)

###############################################################################
# Moving the inner body lower gives a shape where the formula returns a
# negative inner mass.  The result is still returned, flagged as infeasible.

bad = solve_masses(ShapeParams(0.5, 2.0))
print("m4 at (0.5, 2):", bad.m4, "feasible:", bad.feasible)
