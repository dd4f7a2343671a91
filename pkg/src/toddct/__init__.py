"""Truncated power-series arithmetic over prime fields, generalized Todd
sequences, constant-term extraction, Ehrhart series from short rational
sums, and knapsack optimization by binary search on prefix counts.
"""

from .errors import (ToddCTError, ValidationError, MathDomainError,
                     ResourceError, ReconstructionFailed)
from .modfield import (FieldCtx, make_field, crt_reconstruct, crt_rational,
                       rational_reconstruct, PRIMES)
from .series import (TruncSeries, MAX_SERIES_LEN, add, sub, negate, scale,
                     deriv, integrate, mul, inv, div, log, exp,
                     mul_schoolbook, inv_schoolbook, div_schoolbook,
                     log_schoolbook, exp_schoolbook, coeff_reciprocal_prefix)
from .regseries import RegularSeries, reg_mul, reg_exp, reg_log
from .toddgen import (MultiSetZ, TDescriptor, GToddSpec, power_sums, build_h,
                      build_hy, sum_similar, gtodd, todd_r0, todd_r0_shift)
from .ctgtodd import (SimpleRationalTerm, CTResult, GToddConstantTermProblem,
                      orders, ct_gtodd)
from .mpa import (ShortSum, ShortSumTerm, GammaVector, RationalFunctionT,
                  parse_shortsum, shortsum_to_json, pick_gamma, solve_basic,
                  combine_rational, ehrhart_series)
from .bsct import (CostSpecializedSum, ILPInstance, specialize_cost,
                   min_order, series_probe, prefix_count, bsct_solve,
                   enumerate_feasible, points_to_shortsum, brute_knapsack)

__version__ = "0.1.0"

__all__ = [
    "ToddCTError", "ValidationError", "MathDomainError", "ResourceError",
    "ReconstructionFailed",
    "FieldCtx", "make_field", "crt_reconstruct", "crt_rational",
    "rational_reconstruct", "PRIMES",
    "TruncSeries", "MAX_SERIES_LEN", "add", "sub", "negate", "scale",
    "deriv", "integrate", "mul", "inv", "div", "log", "exp",
    "mul_schoolbook", "inv_schoolbook", "div_schoolbook", "log_schoolbook",
    "exp_schoolbook", "coeff_reciprocal_prefix",
    "RegularSeries", "reg_mul", "reg_exp", "reg_log",
    "MultiSetZ", "TDescriptor", "GToddSpec", "power_sums", "build_h",
    "build_hy", "sum_similar", "gtodd", "todd_r0", "todd_r0_shift",
    "SimpleRationalTerm", "CTResult", "GToddConstantTermProblem", "orders",
    "ct_gtodd",
    "ShortSum", "ShortSumTerm", "GammaVector", "RationalFunctionT",
    "parse_shortsum", "shortsum_to_json", "pick_gamma", "solve_basic",
    "combine_rational", "ehrhart_series",
    "CostSpecializedSum", "ILPInstance", "specialize_cost", "min_order",
    "series_probe", "prefix_count", "bsct_solve", "enumerate_feasible",
    "points_to_shortsum", "brute_knapsack",
    "__version__",
]
