"""momlab: moments of moments of characteristic polynomials over the compact
orthogonal and symplectic groups.

Three mutually checking routes to the same quantities: exact finite-size
Toeplitz+Hankel determinants, Monte Carlo over Haar samples, and closed-form
asymptotic predictions with their phase-transition structure.
"""

__version__ = "0.1.0"

from .asymptotics import (
    Phase,
    PhaseReport,
    c_constant,
    classify_phase,
    envelope_uniform,
    fit_scaling_exponent,
    i_hn_numeric,
    i_infinity,
    predict_joint_moment_separated,
    selberg,
    subcritical_threshold,
)
from .determinant import (
    GroupFamily,
    GroupLabel,
    THKind,
    build_th_matrix,
    joint_moment_exact,
    log_det,
)
from .logvalue import LogValue
from .mom import MCEstimate, MoMParams, inner_integral, mom_exact, mom_mc
from .quadrature import AccuracyError, QuadSpec
from .sampling import EigenAngles, Seed, eigenangles, sample_orthogonal, sample_symplectic
from .specfun import gamma, log_barnes_g, log_beta, log_gamma
from .symbol import (
    FourierSeries,
    SingularitySet,
    fourier_coeffs_convolution,
    fourier_coeffs_quadrature,
    fourier_coeffs_recurrence,
    symbol_eval,
)

__all__ = [
    "__version__",
    "AccuracyError", "EigenAngles", "FourierSeries", "GroupFamily", "GroupLabel",
    "LogValue", "MCEstimate", "MoMParams", "Phase", "PhaseReport", "QuadSpec",
    "Seed", "SingularitySet", "THKind",
    "build_th_matrix", "c_constant", "classify_phase", "eigenangles",
    "envelope_uniform", "fit_scaling_exponent", "fourier_coeffs_convolution",
    "fourier_coeffs_quadrature", "fourier_coeffs_recurrence", "gamma",
    "i_hn_numeric", "i_infinity", "inner_integral", "joint_moment_exact",
    "log_barnes_g", "log_beta", "log_det", "log_gamma", "mom_exact", "mom_mc",
    "predict_joint_moment_separated", "sample_orthogonal", "sample_symplectic",
    "selberg", "subcritical_threshold", "symbol_eval",
]
