"""Weighted translation semigroups on L2(R+), at desk scale.

S_t translates by t and multiplies by the weight sqrt(phi(x)/phi(x-t))
derived from a positive continuous symbol phi. The toolkit realizes the
semigroup on exact step-function data, builds the analytic model in which
every left invertible S_t is multiplication by z on a space with a diagonal
reproducing kernel, estimates the spectral picture, and classifies the
semigroup from the signs of its alternating brackets.
"""

from .classify import (
    ClassificationReport,
    bracket,
    bracket_integral,
    bracket_quadratic_form,
    classify,
)
from .config import DEFAULT_TOLERANCES, RunConfig
from .errors import (
    NoClosedFormError,
    NonPositiveSymbolError,
    NotLeftInvertibleError,
    OutsideConvergenceDomainError,
    SymbolSyntaxError,
    TailBoundNotAchievedError,
    TruncationWarning,
)
from .model import (
    DiagonalKernel,
    EValuedPolynomial,
    block_decompose,
    gram_matrix,
    h_inner,
    h_norm_sq,
    haar_degree_bound,
    haar_polynomial_basis,
    kernel_closed_form,
    kernel_eval,
    kernel_preimage,
    kernel_series,
    make_kernel,
    model_inverse,
    model_map,
    parseval_defect,
    reproducing_check,
)
from .operators import (
    KINDS,
    OperatorHandle,
    apply,
    apply_power,
    estimate_lower_bound,
    estimate_norm,
    lower_bound_m,
    make_operator,
    operator_norm,
)
from .spectral import (
    SpectralSummary,
    annulus,
    lower_spectral_bound,
    nonsurjectivity_residual,
    point_spectrum_floor,
    spectral_radius,
    spectral_summary,
    verify_adjoint_eigenvector,
    verify_circular_symmetry,
)
from .stepfun import (
    StepFunction,
    distance,
    haar,
    indicator,
    inner,
    norm,
    norm_sq,
    random_step,
    restrict_to_E,
    zero,
)
from .symbols import (
    Symbol,
    WeightFunction,
    affine,
    check_left_invertible,
    constant,
    eval_phi,
    eval_weight,
    exponential,
    expression_to_string,
    parse_phi_spec,
    parse_symbol,
    piecewise_cap,
    reciprocal,
    validate_positivity,
)
from .verify import CheckResult, all_passed, run_verify

__version__ = "0.1.0"
