"""Invariant metrics, Bergman kernels and curvature on Cartan-Hartogs domains."""

from .curvature import (BoundsReport, hsc_at, hsc_origin, hsc_scan, ricci_along, ricci_bounds,
                        ricci_hessian, ricci_scan, trace_inequality_check)
from .domains import (CartanBase, CartanHartogsDomain, Point, ScalarXY, contains, generic_det,
                      sample_interior, type_i, xy_of)
from .equivalence import RatioSample, equivalence_scan, hermitian_sandwich, metric_ratio
from .errors import (CartanHartogsError, DomainError, ParameterError, PreconditionError, RangeError,
                     StructureError)
from .metrics import MetricTensor, automorphism_at, jacobian_at, pullback_metric, t_bergman, t_lambda
from .numerics import dot_times, hermitian_sqrt_inverse, sample_unit_contraction, wirtinger_hessian
from .potentials import bergman_coefficients, bergman_log_kernel, hua_polynomial, log_g_lambda

__all__ = [
    "BoundsReport", "CartanBase", "CartanHartogsDomain", "CartanHartogsError", "DomainError",
    "MetricTensor", "ParameterError", "Point", "PreconditionError", "RangeError", "RatioSample",
    "ScalarXY", "StructureError", "automorphism_at", "bergman_coefficients", "bergman_log_kernel",
    "contains", "dot_times", "equivalence_scan", "generic_det", "hermitian_sandwich",
    "hermitian_sqrt_inverse", "hsc_at", "hsc_origin", "hsc_scan", "hua_polynomial", "jacobian_at",
    "log_g_lambda", "metric_ratio", "pullback_metric", "ricci_along", "ricci_bounds", "ricci_hessian",
    "ricci_scan", "sample_interior", "sample_unit_contraction", "t_bergman", "t_lambda",
    "trace_inequality_check", "type_i", "wirtinger_hessian", "xy_of",
]
