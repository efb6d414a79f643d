"""The even-singularity unit-circle symbol and its Fourier coefficients.

For angles 0 < theta_1 < ... < theta_m < pi and exponent alpha > -1/2 the
symbol is

    f(e^{i t}) = prod_j |e^{it} - e^{i theta_j}|^{2a} |e^{it} - e^{-i theta_j}|^{2a}
               = prod_j ((2 - 2cos(t - theta_j)) (2 + ... ))^a
               = prod_j |2 cos t - 2 cos theta_j|^{2a},

a nonnegative even function with algebraic zeros at +-theta_j.  Matrix entries
downstream need its Fourier coefficients f_j to near machine precision, which
is harder than it looks: f is only Hoelder-2a smooth, so both the uniform-grid
DFT (aliasing ~ N^-(1+2a)) and the truncated convolution of single-factor
expansions (tails ~ L^-(1+4a)) converge algebraically.  Three routes are
provided:

* fourier_coeffs_quadrature - the uniform-grid DFT, the reference definition;
* fourier_coeffs_convolution - convolution of the exact Gamma-ratio expansion
  of each factor |z - e^{i theta_0}|^{2a}, an independent cross-check;
* fourier_coeffs_recurrence - the production path: f satisfies the first-order
  ODE  Q(cos t) f'(t) + 2a sin(t) Q'(cos t) f(t) = 0  with Q the monic
  polynomial with roots cos theta_j, which translates into a banded linear
  recurrence for the f_j whose leading coefficient 2^-m (k + m + 2am) never
  vanishes.  Bootstrapping f_0..f_m by graded-panel quadrature and running the
  recurrence forward is stable (absolute error ~ eps * K^max(0, 2a-1)) and
  costs O(K m) per singularity set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve
from scipy.special import gammaln

from .quadrature import AccuracyError, unit_rule

__all__ = [
    "SingularitySet",
    "FourierSeries",
    "symbol_eval",
    "fourier_coeffs_quadrature",
    "fourier_coeffs_convolution",
    "fourier_coeffs_recurrence",
    "single_factor_coeffs",
]


@dataclass(frozen=True)
class SingularitySet:
    """m paired singularities e^{+-i theta_j} of common exponent 2*alpha."""

    m: int
    alpha: float
    thetas: tuple[float, ...]

    def __post_init__(self):
        if self.m < 1 or self.m != len(self.thetas):
            raise ValueError(f"m={self.m} must be a positive integer matching len(thetas)")
        if not self.alpha > -0.5:
            raise ValueError(f"alpha={self.alpha} must exceed -1/2 for an integrable symbol")
        th = self.thetas
        if any(not (0.0 < t < math.pi) for t in th):
            raise ValueError(f"thetas must lie strictly inside (0, pi): {th}")
        if any(t2 <= t1 for t1, t2 in zip(th, th[1:])):
            raise ValueError(f"thetas must be strictly increasing: {th}")

    @classmethod
    def make(cls, alpha: float, thetas) -> "SingularitySet":
        th = tuple(float(t) for t in thetas)
        return cls(len(th), float(alpha), th)


@dataclass(frozen=True)
class FourierSeries:
    """Real even coefficient sequence: coeffs[j] = f_j for j = 0..K, f_{-j} = f_j."""

    K: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (self.K + 1,):
            raise ValueError(f"coeffs must have shape ({self.K + 1},), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite Fourier coefficient")
        object.__setattr__(self, "coeffs", c)

    def coeff(self, j: int) -> float:
        j = abs(int(j))
        if j > self.K:
            raise IndexError(f"coefficient index {j} beyond truncation K={self.K}")
        return float(self.coeffs[j])


def symbol_eval(s: SingularitySet, theta):
    """Symbol value(s) at angle(s) theta; exactly 0 at theta = +-theta_j, 1 for alpha = 0."""
    t = np.asarray(theta, dtype=float)
    out = np.ones_like(t)
    if s.alpha != 0.0:
        for tj in s.thetas:
            # (2-2cos(t-tj))(2-2cos(t+tj)) = (2cos t - 2cos tj)^2, clipped
            # against negative rounding before the fractional power
            out = out * np.maximum(
                (2.0 - 2.0 * np.cos(t - tj)) * (2.0 - 2.0 * np.cos(t + tj)), 0.0
            ) ** s.alpha
    return float(out) if t.ndim == 0 else out


def min_grid_size(s: SingularitySet, K: int) -> int:
    """Smallest admissible power-of-two DFT grid for truncation K."""
    need = 8 * max(K, math.ceil(16 * s.m * (1.0 + max(s.alpha, 0.0))))
    return 1 << max(6, (need - 1).bit_length())


def fourier_coeffs_quadrature(s: SingularitySet, K: int, grid_size: int,
                              imag_tol: float = 1e-8) -> FourierSeries:
    """Coefficients by the uniform-grid discrete Fourier transform.

    grid_size must be a power of two and at least 8*max(K, ceil(16 m (1+a))).
    The imaginary parts (zero for an even symbol up to rounding) are checked
    against imag_tol and discarded.
    """
    if grid_size & (grid_size - 1) or grid_size < min_grid_size(s, K):
        raise ValueError(
            f"grid_size={grid_size} must be a power of two >= {min_grid_size(s, K)}"
        )
    t = 2.0 * np.pi * np.arange(grid_size) / grid_size
    c = np.fft.rfft(symbol_eval(s, t)) / grid_size
    c = c[: K + 1]
    resid = float(np.abs(c.imag).max())
    if resid > imag_tol:
        raise AccuracyError(
            f"imaginary residual {resid:.3e} above {imag_tol:.1e}: grid too coarse for alpha={s.alpha}"
        )
    return FourierSeries(K, c.real.copy())


def single_factor_coeffs(alpha: float, L: int) -> np.ndarray:
    """Coefficients c_k, k = 0..L, of |1 - e^{i t}|^{2a} = (2 - 2 cos t)^a.

    c_k = (-1)^k Gamma(1+2a) / (Gamma(1+a+k) Gamma(1+a-k)); by symmetry
    c_{-k} = c_k.  For k > 1+a the reflection formula gives the equivalent
    pole-free form c_k = -(sin(pi a)/pi) Gamma(1+2a) Gamma(k-a) / Gamma(k+1+a).
    """
    a = float(alpha)
    k = np.arange(L + 1)
    c = np.zeros(L + 1)
    if a == 0.0:
        c[0] = 1.0
        return c
    if a == round(a) and a > 0:
        ai = int(round(a))
        kk = k[: ai + 1]
        c[: ai + 1] = (-1.0) ** kk * np.exp(
            gammaln(2 * ai + 1) - gammaln(ai + kk + 1) - gammaln(ai - kk + 1)
        )
        return c
    direct = 1.0 + a - k > 0
    kd = k[direct]
    c[direct] = (-1.0) ** kd * np.exp(
        gammaln(1 + 2 * a) - gammaln(1 + a + kd) - gammaln(1 + a - kd)
    )
    kr = k[~direct]
    c[~direct] = -(math.sin(math.pi * a) / math.pi) * np.exp(
        gammaln(1 + 2 * a) + gammaln(kr - a) - gammaln(kr + 1 + a)
    )
    return c


def fourier_coeffs_convolution(s: SingularitySet, K: int, factor_length: int | None = None,
                               tol: float = 1e-8) -> FourierSeries:
    """Coefficients by convolving the 2m exact single-factor expansions.

    Each factor |z - e^{+-i theta_j}|^{2a} contributes c_k e^{-+ i k theta_j};
    the product symbol's coefficients are the 2m-fold convolution, truncated to
    factor length L.  The truncation loss (tails overlap like L^-(1+4a)) is
    estimated from the analytic coefficient envelope and raised as an
    AccuracyError when it exceeds tol.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    a = s.alpha
    L = factor_length if factor_length is not None else max(8 * K, K + 4096)
    if L < K:
        raise ValueError(f"factor_length={L} shorter than requested truncation K={K}")
    half = single_factor_coeffs(a, L)
    if not (a == round(a) and a >= 0):
        # envelope |c_k| ~ A k^-(1+2a); overlap of two truncated tails
        A = math.sin(math.pi * abs(a)) / math.pi * math.exp(gammaln(1 + 2 * a))
        est = 2 * s.m * A * A * (L - K) ** (-1.0 - 2 * a) * L ** (-2.0 * a) / (2 * a) if a > 0 else math.inf
        if est > tol:
            raise AccuracyError(
                f"convolution truncation loss ~{est:.2e} above {tol:.1e}; "
                f"increase factor_length (currently {L})"
            )
    c = np.concatenate([half[::-1], half[1:]])          # k = -L..L
    k = np.arange(-L, L + 1)
    out = None
    for tj in s.thetas:
        for sign in (+1.0, -1.0):
            seq = c * np.exp(-1j * sign * k * tj)
            out = seq if out is None else fftconvolve(out, seq)
    mid = (out.size - 1) // 2
    if mid < K:
        raise ValueError("internal truncation shorter than K")
    window = out[mid - K: mid + K + 1]
    resid = float(np.abs(window.imag).max())
    if resid > max(tol, 1e-9) * max(1.0, float(np.abs(window.real).max())):
        raise AccuracyError(f"convolution imaginary residual {resid:.3e}")
    sym = 0.5 * (window.real[K:] + window.real[K::-1])  # enforce evenness
    return FourierSeries(K, sym)


# ---------------------------------------------------------------------------
# production path: ODE-derived recurrence, batched over singularity sets
# ---------------------------------------------------------------------------

_BOOT_NODES = 10


def _boot_depth(alpha: float) -> int:
    # untreated sliver mass ~ 2^(-depth (1+2a)); aim below ~1e-13
    return int(min(28, max(14, math.ceil(44.0 / (1.0 + 2.0 * abs(alpha))))))


def _ode_band_coeffs(thetas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exponential coefficients of Q(cos t) and of sin(t) Q'(cos t).

    thetas has shape (B, m).  Returns (A, C) of shape (B, 2m+1) indexed by
    r = -m..m (offset m): Q(cos t) = sum_r A_r e^{irt} with A even, and
    sin(t) Q'(cos t) = sum_r i C_r e^{irt} with C odd.  Both are trigonometric
    polynomials of degree m, so a small DFT recovers them exactly.
    """
    B, m = thetas.shape
    L = 1 << max(3, (2 * m + 2 - 1).bit_length())
    t = 2.0 * np.pi * np.arange(L) / L
    x = np.cos(t)[None, :]
    cth = np.cos(thetas)                                # (B, m)
    Q = np.ones((B, L))
    for j in range(m):
        Q = Q * (x - cth[:, j, None])
    Qp = np.zeros((B, L))
    for j in range(m):
        pr = np.ones((B, L))
        for l in range(m):
            if l != j:
                pr = pr * (x - cth[:, l, None])
        Qp += pr
    FQ = np.fft.fft(Q, axis=1) / L
    FS = np.fft.fft(np.sin(t)[None, :] * Qp, axis=1) / L
    r = np.arange(-m, m + 1)
    A = FQ[:, r % L].real
    C = FS[:, r % L].imag
    return A, C


def _bootstrap_coeffs(thetas: np.ndarray, alpha: float, jmax: int) -> np.ndarray:
    """f_j for j = 0..jmax by graded-panel quadrature, batched over rows of thetas.

    Splits (0, pi) at each theta_j and grades every subinterval into both ends,
    resolving the |t - theta_j|^{2a} zeros to relative scale 2^-_BOOT_DEPTH.
    Uses the pair identity (2-2cos(t-tj))(2-2cos(t+tj)) = (2cos t - 2cos tj)^2
    so the fractional power is taken once, and Chebyshev recursion for cos(jt).
    """
    B, m = thetas.shape
    depth = _boot_depth(alpha)
    edges = np.concatenate(
        [np.zeros((B, 1)), np.sort(thetas, axis=1), np.full((B, 1), np.pi)], axis=1
    )                                                   # (B, m+2)
    node_parts = []
    weight_parts = []
    for i in range(m + 1):
        # singular only at the theta_j ends: the 0 and pi edges are smooth
        un, uw = unit_rule(depth, _BOOT_NODES, grade_lo=(i > 0), grade_hi=(i < m))
        lo = edges[:, i, None]
        width = (edges[:, i + 1] - edges[:, i])[:, None]
        node_parts.append(lo + width * un[None, :])
        weight_parts.append(width * uw[None, :])
    nodes = np.concatenate(node_parts, axis=1)
    weights = np.concatenate(weight_parts, axis=1)
    cosn = np.cos(nodes)
    base = np.ones_like(nodes)
    for j in range(m):
        d = 2.0 * cosn - 2.0 * np.cos(thetas[:, j])[:, None]
        base *= d * d
    vw = base ** alpha * weights
    out = np.empty((B, jmax + 1))
    tprev = np.ones_like(cosn)                          # T_0(cos t)
    tcur = cosn                                         # T_1
    out[:, 0] = vw.sum(axis=1) / np.pi
    for j in range(1, jmax + 1):
        out[:, j] = (vw * tcur).sum(axis=1) / np.pi
        tprev, tcur = tcur, 2.0 * cosn * tcur - tprev
    return out


def symbol_coeffs_batch(thetas: np.ndarray, alpha: float, K: int,
                        chunk: int = 4096) -> np.ndarray:
    """Production coefficients f_0..f_K for a batch of singularity sets.

    thetas: (B, m) array, each row strictly inside (0, pi) (merging angles are
    tolerated; ordering is not required).  Dispatch: exact delta for alpha = 0,
    exact small DFT for integer alpha (the symbol is a trig polynomial of
    degree 2*alpha*m), otherwise the ODE recurrence.
    """
    th = np.atleast_2d(np.asarray(thetas, dtype=float))
    B, m = th.shape
    a = float(alpha)
    if a == 0.0:
        out = np.zeros((B, K + 1))
        out[:, 0] = 1.0
        return out
    if a == round(a) and a > 0:
        deg = 2 * int(round(a)) * m
        N = 1 << max(6, (2 * deg + 2 - 1).bit_length())
        ct = 2.0 * np.cos(2.0 * np.pi * np.arange(N) / N)[None, :]
        vals = np.ones((B, N))
        for j in range(m):
            d = ct - 2.0 * np.cos(th[:, j])[:, None]
            vals *= d * d
        vals **= a
        c = np.fft.rfft(vals, axis=1).real / N
        out = np.zeros((B, K + 1))
        take = min(K, N // 2 - 1)
        out[:, : take + 1] = c[:, : take + 1]
        return out
    if B > chunk:
        return np.concatenate(
            [symbol_coeffs_batch(th[i:i + chunk], a, K) for i in range(0, B, chunk)], axis=0
        )
    p = np.zeros((B, max(K, m) + 1 + m))
    p[:, : m + 1] = _bootstrap_coeffs(th, a, m)
    if K > m:
        A, C = _ode_band_coeffs(th)
        twoa = 2.0 * a
        lead_A = A[:, 0]                                # A_{-m}
        lead_C = C[:, 0]
        for k in range(1, K - m + 1):
            acc = np.zeros(B)
            for r in range(-m + 1, m + 1):
                acc += (A[:, r + m] * (k - r) + twoa * C[:, r + m]) * p[:, abs(k - r)]
            p[:, k + m] = -acc / (lead_A * (k + m) + twoa * lead_C)
    return p[:, : K + 1]


def fourier_coeffs_recurrence(s: SingularitySet, K: int) -> FourierSeries:
    """Coefficients by the ODE recurrence (the production path; see module docs)."""
    out = symbol_coeffs_batch(np.asarray(s.thetas)[None, :], s.alpha, K)[0]
    if not np.all(np.isfinite(out)):
        raise AccuracyError("recurrence produced non-finite coefficients")
    return FourierSeries(K, out)
