"""rootseries: root approximation by series reversion of the inverse function.

Given an equation Z(z) = 0 and a trial value v, the package expands the
inverse of Z about V = Z(v) and assembles the alternating series

    root = v - d1*V + d2*V^2/2! - d3*V^3/3! - ...

in exact rational or arbitrary-precision float arithmetic, along with
series for arbitrary powers of the root and for its natural logarithm.
"""

from .errors import (
    DerivativeVanishedError,
    DivisionByZeroLeadingCoefficient,
    DomainError,
    ExactModeError,
    ExpressionSyntaxError,
    LogNonPositiveLeadingCoefficient,
    NoConvergenceError,
    NoSignChangeError,
    NotReversibleError,
    RootSeriesError,
    UnknownSymbolError,
)
from .scalars import (
    DEFAULT_PRECISION,
    MIN_PRECISION,
    BigFloat,
    Scalar,
    format_scalar,
    parse_number,
    to_bigfloat,
)
from .expressions import (
    Expression,
    differentiate,
    evaluate,
    parse_expression,
    requires_float,
    to_string,
)
from .jets import Jet, compose, jet_exp, jet_ln, jet_pow, revert, taylor_expand
from .inverse_series import (
    Anchor,
    CoefficientSequence,
    ConvergenceReport,
    DEFAULT_ORDER,
    SeriesApproximation,
    Verdict,
    anchor_at,
    assemble_root_series,
    coefficient_sequence_reversion,
    coefficient_sequence_symbolic,
    convergence_diagnostic,
    evaluate_truncated,
    refine_anchor,
    refinement_trajectory,
)
from .power_series import (
    OmegaSeries,
    PowerCoefficientSequence,
    assemble_power_series,
    exp_identity_residual,
    log_series,
    omega_series,
    power_coefficient_sequence,
    power_coefficient_sequence_reversion,
)
from .closed_forms import (
    ClosedFormFamily,
    CubicExample,
    GeneralPower,
    NthRootShift,
    SqrtShift,
    closed_form_coefficients,
    family_series_value,
)
from .oracles import (
    RootResult,
    binomial_series_coefficients,
    bisection_root,
    newton_iterates,
    newton_root,
)

__version__ = "0.1.0"
