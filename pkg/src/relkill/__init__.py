"""Exact computation of Killing tensors, relative Killing tensors and
rational first integrals of geodesic flows."""

from .poly import Poly, poly_divexact, poly_gcd
from .ratfn import RatFn
from .parser import ParseError, format_ratfn, parse_poly, parse_ratfn
from .phasefn import PhaseFn, PhaseSpace
from .geometry import (
    Metric,
    SingularMetricError,
    SymTensorField,
    killing_residual,
    prolongation_identity_d1_residual,
)
from .phase import (
    MalformedCofactorError,
    NotRelativeKillingError,
    RationalIntegral,
    cofactor_curl,
    cofactor_extract,
    cohomologous_check,
    is_first_integral,
    poisson_bracket,
    rational_integral_check,
    reduce_rational_integral,
)
from .solver import Ansatz, Basis, frlin_from_basis, lambda_dim, param_count_n, solve_space
from .surface import (
    ConformalSurface,
    CofactorProfile,
    Dichotomy,
    classify_dichotomy,
    gap_expression,
    gaussian_curvature,
    ppp_rhs,
    qqq_residual,
)
from .numeric import NumericHamiltonian, conservation_report, integrate
from .spec_io import SpecError, load_metric_spec
from .suites import run_example_suite

__version__ = "1.0.0"

__all__ = [
    "Poly",
    "poly_divexact",
    "poly_gcd",
    "RatFn",
    "ParseError",
    "format_ratfn",
    "parse_poly",
    "parse_ratfn",
    "PhaseFn",
    "PhaseSpace",
    "Metric",
    "SingularMetricError",
    "SymTensorField",
    "killing_residual",
    "prolongation_identity_d1_residual",
    "MalformedCofactorError",
    "NotRelativeKillingError",
    "RationalIntegral",
    "cofactor_curl",
    "cofactor_extract",
    "cohomologous_check",
    "is_first_integral",
    "poisson_bracket",
    "rational_integral_check",
    "reduce_rational_integral",
    "Ansatz",
    "Basis",
    "frlin_from_basis",
    "lambda_dim",
    "param_count_n",
    "solve_space",
    "ConformalSurface",
    "CofactorProfile",
    "Dichotomy",
    "classify_dichotomy",
    "gap_expression",
    "gaussian_curvature",
    "ppp_rhs",
    "qqq_residual",
    "NumericHamiltonian",
    "conservation_report",
    "integrate",
    "SpecError",
    "load_metric_spec",
    "run_example_suite",
]
