"""Covering-radius bounds for spherical designs."""
from .adjacent import ValidityError, adjacent_system, quadrature_rule, recurrence_check
from .lowerbound import DesignSpec, InvalidSpec, combined_lower_bound, dgs_bound, fl_bound
from .orthopoly import GegenbauerBasis
from .upperbound import lp_upper_bound, optimal_upper_4design

__version__ = "0.1.0"

__all__ = [
    "GegenbauerBasis",
    "ValidityError",
    "adjacent_system",
    "quadrature_rule",
    "recurrence_check",
    "DesignSpec",
    "InvalidSpec",
    "combined_lower_bound",
    "dgs_bound",
    "fl_bound",
    "lp_upper_bound",
    "optimal_upper_4design",
]
