"""Numerical checks of the inequalities and the minimizer search."""
from .checks import (
    SolverOptions,
    check_symmetrization,
    check_thm3_ordering,
    check_thm4,
    check_thm5,
    check_thm6,
    check_thm8,
    check_thm9,
    explore_open_problem2,
    right_triangle_with_angle,
    thm8_bound,
)
from .families import (
    FAMILIES,
    ShapeFamily,
    right_trapezoids,
    right_triangles,
    trapezoids,
    triangles_fixed_area,
)
from .minimize import MinimizerReport, minimize_functional, parse_functional
from .report import HOLDS, VIOLATED, WITHIN, Instance, VerificationReport

__all__ = [
    "FAMILIES", "HOLDS", "Instance", "MinimizerReport", "ShapeFamily", "SolverOptions", "VIOLATED",
    "VerificationReport", "WITHIN", "check_symmetrization", "check_thm3_ordering", "check_thm4", "check_thm5",
    "check_thm6", "check_thm8", "check_thm9", "explore_open_problem2", "minimize_functional", "parse_functional",
    "right_trapezoids", "right_triangle_with_angle", "right_triangles", "thm8_bound", "trapezoids",
    "triangles_fixed_area",
]
