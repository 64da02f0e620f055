"""Sum-of-exponentials approximations of the Gaussian kernel and a fast
one-dimensional Gauss transform built on them."""
from .cf import RationalApprox, cf_approx, cf_soe, soe_from_rational
from .contour import ContourKind, ContourSpec, contour_point, soe_from_contour
from .estimator import FastGaussTransform
from .exceptions import DomainError, NumericalFailure, StructuralError
from .fgt import (TransformPlan, TransformRequest, TransformResult, apply, apply_general,
                  apply_same, direct, gauss_transform, mode_sums, plan, soe_for_modes)
from .reduction import ReductionReport, hankel_singular_values, reduce
from .soe import (ErrorReport, Form, SOEApprox, evaluate, fold, max_error, read_table,
                  unfold, write_table)

__version__ = "0.1.0"
