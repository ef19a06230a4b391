"""Generalized Hubbell rectangular-source integral.

The integral ``H[a, b, p, lam; alpha, beta, gamma]`` is evaluated through a
positive single sum of Gauss hypergeometric functions, with an adaptive
Gauss-Kronrod quadrature and the Appell F2 double series as independent
checks.
"""

from .appell import (
    F2Args,
    f2_double_series,
    f2_finite_sum,
    f2_recurrence_step,
    f2_reduce_to_2f1,
    finite_sum_remainder,
    finite_sum_terms,
)
from .exceptions import (
    DomainError,
    HubbellError,
    InvalidParams,
    NotConvergedWarning,
    UnsupportedFormat,
)
from .integrals import (
    CLASSICAL,
    HALF_CASE,
    HubbellParams,
    eval_detector_response,
    eval_h_closed_half,
    eval_h_general,
    eval_h_lambda0,
    eval_I,
)
from .oracle import QuadratureControl, adaptive_gk15, quad_h2d, quad_h_general, quad_I
from .special import (
    DEFAULT_CONTROL,
    EvalResult,
    Method,
    SeriesControl,
    hyp2f1,
    hyp2f1m1,
    pochhammer,
)
from .tables import TableRow, emit_report, load_published, run_table

__version__ = "0.1.0"

__all__ = [
    "CLASSICAL",
    "DEFAULT_CONTROL",
    "HALF_CASE",
    "DomainError",
    "EvalResult",
    "F2Args",
    "HubbellError",
    "HubbellParams",
    "InvalidParams",
    "Method",
    "NotConvergedWarning",
    "QuadratureControl",
    "SeriesControl",
    "TableRow",
    "UnsupportedFormat",
    "adaptive_gk15",
    "emit_report",
    "eval_I",
    "eval_detector_response",
    "eval_h_closed_half",
    "eval_h_general",
    "eval_h_lambda0",
    "f2_double_series",
    "f2_finite_sum",
    "f2_recurrence_step",
    "f2_reduce_to_2f1",
    "finite_sum_remainder",
    "finite_sum_terms",
    "hyp2f1",
    "hyp2f1m1",
    "load_published",
    "pochhammer",
    "quad_I",
    "quad_h2d",
    "quad_h_general",
    "run_table",
]
