"""Exact b-discrepancies, singularity classes and b-terminalizations of toric b-log pairs."""

from .bdivisor import (ZERO, BrauerRule, CoefficientRule, FiniteSupportRule, RayDatum,
                       ZeroRule, coefficient, ramification_index, trace)
from .brauer import (Affine3Class, BrauerClass, CTriple, c_invariant, classify_affine3,
                     full_rank_shortcut, matrix_from_c, order_of_image, rp)
from .discrepancy import (Classification, DiscrepancyRecord, GreaterThan, Level,
                          MinimalDiscrepancy, SupportFunctionData, boundary_support_function,
                          classify, discrepancy_at, enumerate_at_most, min_discrepancy_below)
from .fan import (Cone, Fan, ValidationReport, blowup_stratum, find_containing_cone, resolve,
                  star_subdivide, triangulate, validate)
from .lattice import (Rational, cone_multiplicity, enumerate_integer_points, make_primitive,
                      solve_in_generators)
from .terminalize import TerminalizationReport, b_terminalize, extract_divisors

__all__ = [
    "ZERO", "BrauerRule", "CoefficientRule", "FiniteSupportRule", "RayDatum", "ZeroRule",
    "coefficient", "ramification_index", "trace",
    "Affine3Class", "BrauerClass", "CTriple", "c_invariant", "classify_affine3",
    "full_rank_shortcut", "matrix_from_c", "order_of_image", "rp",
    "Classification", "DiscrepancyRecord", "GreaterThan", "Level", "MinimalDiscrepancy",
    "SupportFunctionData", "boundary_support_function", "classify", "discrepancy_at",
    "enumerate_at_most", "min_discrepancy_below",
    "Cone", "Fan", "ValidationReport", "blowup_stratum", "find_containing_cone", "resolve",
    "star_subdivide", "triangulate", "validate",
    "Rational", "cone_multiplicity", "enumerate_integer_points", "make_primitive",
    "solve_in_generators",
    "TerminalizationReport", "b_terminalize", "extract_divisors",
]

__version__ = "0.1.0"
