"""Exact cyclotomic arithmetic, certified balls, and number-theoretic bounds."""

from __future__ import annotations

from .bounds import (
    BoundResult,
    common_root_exponents,
    minimal_polynomial,
    partition_lower_bound,
    poly_eval_lower_bound,
    root_order,
)
from .cyclotomic import Cyclo, cyclotomic_poly, lcm
from .polys import IntPoly, height, mahler_measure, resultant, sylvester_matrix
from .precision import working_precision
from .values import (
    DEFAULT_PRECISION,
    Approx,
    ComplexValue,
    as_value,
    enclose,
    is_zero_exact,
    to_approx,
    ziv_distance,
    ziv_error_to_bounds,
)
from .weights import (
    ROU,
    PolarPi,
    Real,
    Rect,
    WeightSpec,
    WeightSpecError,
    format_weight,
    parse_weight,
    parse_weight_spec,
    polar_form,
)

__all__ = [
    "Approx",
    "BoundResult",
    "ComplexValue",
    "Cyclo",
    "DEFAULT_PRECISION",
    "IntPoly",
    "PolarPi",
    "ROU",
    "Real",
    "Rect",
    "WeightSpec",
    "WeightSpecError",
    "as_value",
    "common_root_exponents",
    "cyclotomic_poly",
    "enclose",
    "format_weight",
    "height",
    "is_zero_exact",
    "lcm",
    "mahler_measure",
    "minimal_polynomial",
    "parse_weight",
    "parse_weight_spec",
    "partition_lower_bound",
    "poly_eval_lower_bound",
    "polar_form",
    "resultant",
    "root_order",
    "sylvester_matrix",
    "to_approx",
    "working_precision",
    "ziv_distance",
    "ziv_error_to_bounds",
]
