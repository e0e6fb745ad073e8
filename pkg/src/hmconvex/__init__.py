"""Numerical verification of Hermite-Hadamard and Fejer type inequalities for
generalized (h-m)-convex functions on the fractal set R^alpha."""
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DomainError,
    HMConvexError,
    MixedAlphaError,
    PreconditionError,
    UnsupportedRepresentationError,
)
from .fractal_algebra import Alpha, FractalArray, FractalNumber, beta_alpha, gamma, gamma_ratio, lift, project, real_power
from .functions import (
    BaseMapped,
    CheckResult,
    CheckVerdict,
    ConvexityParams,
    HFunction,
    MonomialSeries,
    SamplerConfig,
    Tabulated,
    WeightFunction,
    check_symmetry,
    is_hm_convex,
    lf_derivative,
    sup_norm,
)
from .lfi import IntegralResult, IntegralScheme, SchemeKind, convention_gap, gauss_jacobi_rule, holder_bound, lfi
from .inequalities import (
    InequalityCase,
    InequalityReport,
    Verdict,
    run_reduction_matrix,
    verify_fejer_deriv,
    verify_fejer_hm,
    verify_hh_hm,
    verify_hh_pair,
    verify_jensen,
    verify_lemma_identity,
)
from .applications import (
    Partition,
    ProbabilityDensity,
    QuadratureResult,
    adaptive_quadrature,
    expectation_alpha,
    r_moment,
    verify_moment_bound,
    weighted_trapezoid,
)
