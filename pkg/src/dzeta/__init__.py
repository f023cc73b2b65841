"""High-precision evaluation of the double zeta function at large negative
arguments: ground-truth oracles (direct, Euler-Maclaurin, exact six-term
functional-equation assembly), the truncated asymptotic main-term series with
its Gamma correction, and decay-rate measurement tooling."""

from .asymptotic import (
    AsymptoticResult,
    RegionParams,
    RegionVerdict,
    approx_ratio,
    approx_zeta_half,
    gamma_correction_term,
    main_term_series,
    region_check,
)
from .coefficients import (
    CoeffTable,
    ExpansionPoint,
    a_coeff,
    a_coeff_series,
    c_coeff_partition,
    c_coeff_taylor,
    cot_derivative,
    pochhammer,
    ratios,
)
from .errors import (
    DomainError,
    DZetaError,
    InsufficientData,
    PoleError,
    PrecisionError,
    QuadratureError,
    SingularityError,
    SweepAborted,
)
from .kernel import (
    PrecisionContext,
    bernoulli,
    f_factor,
    gamma,
    hurwitz_zeta,
    ipow,
    loggamma,
    riemann_zeta,
)
from .oracle import (
    BetaContourResult,
    Eq2Breakdown,
    FPlusValue,
    beta_contour,
    double_zeta_direct,
    double_zeta_em,
    double_zeta_fe,
    e1_residual,
    fplus_contour,
    fplus_series,
    sigma_power,
)
from .quadrature import ContourSpec, vertical_line_integral
from .sweep import (
    SlopeFit,
    SweepConfig,
    SweepRecord,
    fit_slope,
    sweep_error_decay,
    verify_suite,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticResult",
    "BetaContourResult",
    "CoeffTable",
    "ContourSpec",
    "DZetaError",
    "DomainError",
    "Eq2Breakdown",
    "ExpansionPoint",
    "FPlusValue",
    "InsufficientData",
    "PoleError",
    "PrecisionContext",
    "PrecisionError",
    "QuadratureError",
    "RegionParams",
    "RegionVerdict",
    "SingularityError",
    "SlopeFit",
    "SweepAborted",
    "SweepConfig",
    "SweepRecord",
    "a_coeff",
    "a_coeff_series",
    "approx_ratio",
    "approx_zeta_half",
    "bernoulli",
    "beta_contour",
    "c_coeff_partition",
    "c_coeff_taylor",
    "cot_derivative",
    "double_zeta_direct",
    "double_zeta_em",
    "double_zeta_fe",
    "e1_residual",
    "f_factor",
    "fit_slope",
    "fplus_contour",
    "fplus_series",
    "gamma",
    "gamma_correction_term",
    "hurwitz_zeta",
    "ipow",
    "loggamma",
    "main_term_series",
    "pochhammer",
    "ratios",
    "region_check",
    "riemann_zeta",
    "sigma_power",
    "sweep_error_decay",
    "verify_suite",
    "vertical_line_integral",
]
