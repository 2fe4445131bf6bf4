"""Positive masses for the symmetric concave four-body central configuration."""
from .core import (
    EPS_SIGN,
    MassSolution,
    ShapeParams,
    Sign,
    SignProfile,
    SpecialCaseSolution,
    center_ordinate,
    lambda_for_target_m4,
    sign_profile,
    solve_masses,
    solve_q4_centered,
)
from .dynamics import DriftReport, SimState, integrate, launch_relative_equilibrium, trajectory
from .errors import (
    CCError,
    CollisionDetected,
    DegenerateDenominator,
    InfeasibleMass,
    InfeasibleShape,
    InvalidInput,
    LabelAbsent,
    RootNotBracketed,
    SingularSystem,
)
from .regions import (
    RegionLabel,
    all_positive_components,
    classify,
    component_extents,
    locate_q4_centered_point,
    scan,
    trace_p1,
    trace_p2,
    trace_p4,
    triple_intersection,
)
from .verify import PlanarConfig, cc_residual, check_reduction, solve_reduced_system, symmetric_config

__version__ = "0.1.0"
