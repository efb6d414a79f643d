"""Closed-form predictions: leading constants, Selberg's integral, the phase
diagram, pointwise and uniform determinant asymptotics, and the regularized
singular integrals whose growth drives the phase transitions.

Notation used throughout: a = alpha, s = +-1 with s = -1 for the symplectic
family and s = +1 for every orthogonal family.  The subcritical thresholds are

    a* = min{ 1/sqrt(m), (sqrt(8m-3) + s) / (4m-2) },

which reduces to 1/sqrt(m) exactly when (m, s) = (2, +1).  Growth exponents:
below a* the moments grow like n^{m a^2} times an explicit constant; above it
like n^{2 (m a)^2 - s m a - m}; at a* an extra log n appears.  The orthogonal
m = 2 case passes through two transitions (1/sqrt(2) and (sqrt(5)+1)/4) with
an intermediate n^{4 a^2 - 1} window.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .determinant import GroupFamily, GroupLabel, THKind
from .logvalue import LogValue
from .quadrature import QuadSpec, auto_depth, integrate_simplex
from .specfun import DomainError, log_barnes_g, log_gamma

__all__ = [
    "Phase",
    "PhaseReport",
    "subcritical_threshold",
    "c_constant",
    "selberg",
    "i_infinity",
    "classify_phase",
    "predict_joint_moment_separated",
    "envelope_uniform",
    "i_hn_numeric",
    "fit_scaling_exponent",
]

_EQ_TOL = 64 * np.finfo(float).eps


class Phase(enum.Enum):
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    INTERMEDIATE = "Intermediate"
    SECOND_CRITICAL = "SecondCritical"
    SUPERCRITICAL = "Supercritical"


@dataclass(frozen=True)
class PhaseReport:
    """Predicted growth law MoM ~ constant * n^exponent * (log n)^log_power.

    constant is present only in the subcritical phase (elsewhere the theory
    pins the growth only up to a bounded factor): 2^{m a^2} C^-(m, a) for the
    symplectic family (absorbing its (2n)^{m a^2} normalization into plain n)
    and C^+(m, a) for the orthogonal families.
    """

    phase: Phase
    exponent: float
    log_power: int
    constant: float | None = None


def _sign_of(group: GroupLabel | GroupFamily) -> int:
    fam = group.family if isinstance(group, GroupLabel) else group
    return -1 if fam is GroupFamily.SP else +1


def subcritical_threshold(m: int, sign: int) -> float:
    """min{1/sqrt(m), (sqrt(8m-3) + sign)/(4m-2)} for sign = +-1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    return min(1.0 / math.sqrt(m), (math.sqrt(8 * m - 3) + sign) / (4 * m - 2))


def c_constant(m: int, alpha: float, sign: int) -> float:
    """The subcritical leading constant C^{+-}(m, alpha), in log domain.

    Defined while every Gamma argument stays positive: below
    subcritical_threshold(m, sign) for m >= 2.  At m = 1 the Gamma(1 - a^2)
    pair cancels between numerator and denominator, so the constant extends to
    alpha < (sqrt(5) + sign)/2, matching the m = 1 phase boundary.
    C^{+-}(m, 0) = 1.
    """
    a = float(alpha)
    if not 0.0 <= a:
        raise DomainError(f"alpha={a} must be nonnegative")
    limit = (math.sqrt(5.0) + sign) / 2.0 if m == 1 else subcritical_threshold(m, sign)
    if a >= limit and a > 0.0:
        raise DomainError(
            f"alpha={a} at or beyond the subcritical threshold {limit:.6f}: Gamma poles ahead"
        )
    if a == 0.0:
        return 1.0
    a2 = a * a
    total = 2 * m * log_barnes_g(1 + a) - m * log_barnes_g(1 + 2 * a)
    total += (-a2 * m * m + sign * a * m) * math.log(4.0) - m * math.log(math.pi)
    if m == 1:
        total += 2.0 * log_gamma((1 - a2 + sign * a) / 2.0)
        total -= log_gamma(1 + sign * a - a2)
        return math.exp(total)
    for j in range(m):
        total += log_gamma(1 - a2 - j * a2)
        total += 2.0 * log_gamma((1 - a2 + sign * a) / 2.0 - j * a2)
        total -= log_gamma(1 - a2)
        total -= log_gamma(1 + sign * a - a2 * (m + j))
    return math.exp(total)


def selberg(m: int, a: float, b: float, c: float) -> LogValue:
    """Selberg's m-dimensional Beta integral

        int_{[0,1]^m} prod_{j<k} |x_j - x_k|^{2c} prod_j (1-x_j)^{a-1} x_j^{b-1} dx
        = prod_{j=0}^{m-1} Gamma(1+c+jc) Gamma(a+jc) Gamma(b+jc)
                           / (Gamma(1+c) Gamma(a+b+c(m+j-1))).

    Finite iff a, b > 0 and c > -min{1/m, a/(m-1), b/(m-1)}; for m = 1 this is
    Beta(a, b) and c is irrelevant.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"divergent Selberg integral: need a, b > 0, got a={a}, b={b}")
    if m == 1:
        return LogValue(1, log_gamma(a) + log_gamma(b) - log_gamma(a + b))
    bound = -min(1.0 / m, a / (m - 1), b / (m - 1))
    if not c > bound:
        raise DomainError(f"divergent Selberg integral: need c > {bound:.6f}, got c={c}")
    total = 0.0
    for j in range(m):
        total += log_gamma(1 + c + j * c) + log_gamma(a + j * c) + log_gamma(b + j * c)
        total -= log_gamma(1 + c) + log_gamma(a + b + c * (m + j - 1))
    return LogValue(1, total)


def i_infinity(m: int, alpha: float, sign: int) -> float:
    """The limiting Selberg-type integral

        int_{(0,pi)^m} prod_{j<k} |2cos t_j - 2cos t_k|^{-2a^2}
                       prod_j |2 sin t_j|^{-a^2 + sign*a}  prod dt_j / pi,

    evaluated in closed form via x_j = 1/2 + cos(t_j)/2:
    4^{-a^2 m^2 + sign*a*m} / pi^m times Selberg at
    a = b = (1 - a^2 + sign*a)/2, c = -a^2.
    """
    a = float(alpha)
    if sign not in (-1, 1):
        raise ValueError("sign must be +1 or -1")
    if m == 1:
        lim = (math.sqrt(5.0) + sign) / 2.0
    else:
        lim = subcritical_threshold(m, sign)
    if not abs(a) < lim:
        raise DomainError(f"i_infinity diverges: |alpha|={abs(a)} >= {lim:.6f}")
    ab = (1 - a * a + sign * a) / 2.0
    sel = selberg(m, ab, ab, -a * a)
    logv = (-a * a * m * m + sign * a * m) * math.log(4.0) - m * math.log(math.pi) + sel.log_abs
    return math.exp(logv)


def classify_phase(group: GroupLabel | GroupFamily, m: int, alpha: float) -> PhaseReport:
    """Phase label, n-exponent, log factor, and (subcritically) the constant.

    Exponents are continuous across every boundary; the orthogonal m = 2 case
    has the five-branch structure with breakpoints 1/sqrt(2) and (sqrt(5)+1)/4.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    a = float(alpha)
    if not a > 0.0:
        raise ValueError(f"alpha={a} must be positive")
    s = _sign_of(group)
    ma2 = m * a * a

    def near(x: float, t: float) -> bool:
        return abs(x - t) <= _EQ_TOL * max(1.0, abs(t))

    if s < 0 or m != 2:
        # threshold carries sign s; the supercritical m*a term carries -s
        # (symplectic: ((sqrt(8m-3)-1)/(4m-2), +m*a), orthogonal the reverse)
        t = (math.sqrt(8 * m - 3) + s) / (4 * m - 2)
        if near(a, t):
            return PhaseReport(Phase.CRITICAL, ma2, 1)
        if a < t:
            const = c_constant(m, a, s)
            if s < 0:
                const *= 2.0 ** ma2  # (2n)^{m a^2} folded into plain-n form
            return PhaseReport(Phase.SUBCRITICAL, ma2, 0, const)
        return PhaseReport(Phase.SUPERCRITICAL, 2 * (m * a) ** 2 - s * m * a - m, 0)
    # orthogonal family, m = 2: two transitions
    t1 = 1.0 / math.sqrt(2.0)
    t2 = (math.sqrt(5.0) + 1.0) / 4.0
    if near(a, t1):
        return PhaseReport(Phase.CRITICAL, 2 * a * a, 1)
    if a < t1:
        return PhaseReport(Phase.SUBCRITICAL, 2 * a * a, 0, c_constant(2, a, +1))
    if near(a, t2):
        return PhaseReport(Phase.SECOND_CRITICAL, 4 * a * a - 1, 1)
    if a < t2:
        return PhaseReport(Phase.INTERMEDIATE, 4 * a * a - 1, 0)
    return PhaseReport(Phase.SUPERCRITICAL, 8 * a * a - 2 * a - 2, 0)


def predict_joint_moment_separated(group: GroupLabel, m: int, alpha: float, thetas) -> float:
    """Leading-order joint moment for well-separated singularities:

        (2n)^{m a^2} G(1+a)^{2m} / G(1+2a)^m
        * prod_{j<k} |2cos t_j - 2cos t_k|^{-2a^2}
        * prod_j (2 sin t_j)^{-a^2 + sign*a}.
    """
    th = np.asarray(thetas, dtype=float).ravel()
    if th.size != m:
        raise ValueError(f"expected m={m} angles")
    a = float(alpha)
    if a == 0.0:
        return 1.0
    s = group.sign_pm
    logv = m * a * a * math.log(2 * group.n)
    logv += 2 * m * log_barnes_g(1 + a) - m * log_barnes_g(1 + 2 * a)
    ct = 2.0 * np.cos(th)
    for j in range(m):
        for k in range(j + 1, m):
            logv += -2 * a * a * math.log(abs(ct[j] - ct[k]))
    logv += ((-a * a + s * a) * np.log(2.0 * np.sin(th))).sum()
    return math.exp(logv)


def _envelope_log_f(thetas: np.ndarray, alpha: float, inv_n: float) -> np.ndarray:
    """log of the merging factor F_n, batched over the leading axes."""
    m = thetas.shape[-1]
    a2 = alpha * alpha
    out = np.zeros(thetas.shape[:-1])
    for j in range(m):
        for k in range(j + 1, m):
            dm = 2.0 * np.abs(np.sin(0.5 * (thetas[..., j] - thetas[..., k]))) + inv_n
            dp = 2.0 * np.abs(np.sin(0.5 * (thetas[..., j] + thetas[..., k]))) + inv_n
            out += -2.0 * a2 * (np.log(dm) + np.log(dp))
    return out


def envelope_uniform(kind: THKind, m: int, alpha: float, thetas, n: int) -> float:
    """The uniform asymptotic envelope of the kind-kappa determinant:

        n^{m a^2} F_n(t) * per-kind product of regularized sine/cosine factors,

    valid (up to a bounded factor) over all of 0 < t_1 < ... < t_m < pi,
    including merging configurations.
    """
    th = np.asarray(thetas, dtype=float).reshape(1, -1)
    if th.shape[1] != m:
        raise ValueError(f"expected m={m} angles")
    a = float(alpha)
    if a == 0.0:
        return 1.0
    kind = THKind(kind)
    inv = 1.0 / n
    a2 = a * a
    logv = m * a2 * math.log(n) + float(_envelope_log_f(th, a, inv)[0])
    t = th[0]
    if kind is THKind.PLUS_0:
        logv += ((-a2 + a) * np.log(2.0 * np.sin(t) + inv)).sum()
    elif kind is THKind.MINUS_2:
        logv += ((-a2 - a) * np.log(2.0 * np.sin(t) + inv)).sum()
    elif kind is THKind.MINUS_1:
        logv += ((-a2 - a) * np.log(2.0 * np.sin(0.5 * t) + inv)).sum()
        logv += ((-a2 + a) * np.log(2.0 * np.cos(0.5 * t) + inv)).sum()
    else:
        logv += ((-a2 + a) * np.log(2.0 * np.sin(0.5 * t) + inv)).sum()
        logv += ((-a2 - a) * np.log(2.0 * np.cos(0.5 * t) + inv)).sum()
    return math.exp(logv)


def _ihn_log_integrand(group: GroupLabel, alpha: float, n: int, pts: np.ndarray) -> np.ndarray:
    a = alpha
    a2 = a * a
    inv = 1.0 / n
    logv = _envelope_log_f(pts, a, inv)
    fam = group.family
    if fam is GroupFamily.SO_EVEN:
        logv += ((-a2 + a) * np.log(2.0 * np.sin(pts) + inv)).sum(axis=-1)
    elif fam is GroupFamily.SP:
        logv += ((-a2 - a) * np.log(2.0 * np.sin(pts) + inv)).sum(axis=-1)
    elif fam is GroupFamily.SO_MINUS_EVEN:
        logv += ((-a2 - a) * np.log(2.0 * np.sin(pts) + inv)).sum(axis=-1)
        logv += (2 * a * np.log(2.0 * np.sin(pts))).sum(axis=-1)
    elif fam is GroupFamily.SO_ODD:
        logv += ((-a2 - a) * np.log(2.0 * np.sin(0.5 * pts) + inv)).sum(axis=-1)
        logv += ((-a2 + a) * np.log(2.0 * np.cos(0.5 * pts) + inv)).sum(axis=-1)
        logv += (2 * a * np.log(2.0 * np.sin(0.5 * pts))).sum(axis=-1)
    elif fam is GroupFamily.SO_MINUS_ODD:
        logv += ((-a2 + a) * np.log(2.0 * np.sin(0.5 * pts) + inv)).sum(axis=-1)
        logv += ((-a2 - a) * np.log(2.0 * np.cos(0.5 * pts) + inv)).sum(axis=-1)
        logv += (2 * a * np.log(2.0 * np.cos(0.5 * pts))).sum(axis=-1)
    else:
        raise ValueError("the singular integral is defined for the five base ensembles")
    return logv


def i_hn_numeric(group: GroupLabel, m: int, alpha: float, n: int | None = None,
                 quad: QuadSpec | None = None) -> float:
    """The group's regularized singular integral over (0, pi)^m, measure dt/pi.

    n defaults to the group's size parameter.  Panels are graded toward the
    simplex diagonal and the edges with depth ceil(log2 n) + 4, resolving the
    1/n-regularized near-singularities; the refinement ratio check raises
    AccuracyError on non-convergence.
    """
    if m < 1 or m > 3:
        raise ValueError("tensor quadrature supports m <= 3")
    nn = group.n if n is None else int(n)
    if quad is None:
        quad = QuadSpec(depth=auto_depth(nn))
    a = float(alpha)

    def f(pts: np.ndarray) -> np.ndarray:
        return np.exp(_ihn_log_integrand(group, a, nn, pts))

    val = integrate_simplex(f, m, 0.0, math.pi, quad)
    return val * math.factorial(m) / math.pi ** m


def fit_scaling_exponent(points) -> tuple[float, float]:
    """Least-squares slope of ln(value) against ln(n), with standard error.

    points: sequence of (n, value) with n strictly increasing, values > 0,
    at least 3 entries.
    """
    pts = [(float(n), float(v)) for n, v in points]
    if len(pts) < 3:
        raise ValueError("need at least 3 points")
    ns = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if np.any(np.diff(ns) <= 0):
        raise ValueError("n values must be strictly increasing")
    if np.any(vs <= 0):
        raise DomainError("values must be positive to fit a power law")
    x = np.log(ns)
    y = np.log(vs)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ y) / sxx
    resid = y - y.mean() - slope * xc
    dof = len(pts) - 2
    stderr = math.sqrt(max(float(resid @ resid), 0.0) / dof / sxx)
    return slope, stderr
