"""Parametric Lamb constants and numerical checks of Hardy-type inequalities
with remainder, in one dimension and on convex domains."""

from .bessel import bessel_j, bessel_j_prime, first_zero, first_zero_of_derivative
from .checks import compare_with_classical, profile_log_slope, verify_identity
from .errors import (
    AccuracyFailure,
    ContinuationFailure,
    HardyLambError,
    InvalidInput,
    InvalidParams,
    NumericalFailure,
)
from .lamb import LambParams, LambRoot, classical_lamb, closed_form_lamb, lamb_constant, solve_lamb, solve_lamb_ode
from .quadrature import integrate_segment, layer_cake_integral, monte_carlo_integral
from .statements import InequalityReport, admissible, evaluate_statement, get_statement, statement_constants
from .subjects import (
    Ball,
    BesselProfile,
    Box,
    OneSidedSubject,
    PowerBump,
    RadialSubject,
    SegmentSubject,
    SinePower,
    SmoothTent,
    Zero,
    make_test_function,
    parse_domain,
)
from .sweep import expand_grid, parameter_sweep

__version__ = "0.1.0"
