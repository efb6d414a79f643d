"""Toeplitz+Hankel matrices, log-domain determinants, and the exact
finite-size joint moments of characteristic polynomials.

The (j,k) entry of an order-q matrix of kind kappa combines Fourier
coefficients of the symbol:

    kind 1:  f_{j-k} + f_{j+k}
    kind 2:  f_{j-k} - f_{j+k+2}
    kind 3:  f_{j-k} - f_{j+k+1}
    kind 4:  f_{j-k} + f_{j+k+1}

and the ensemble averages E prod_j |det(I - e^{-i theta_j} U)|^{2a} over the
five base groups are exactly

    SO(2n)      : (1/2) D_n^{1}
    SO^-(2n)    : D_{n-1}^{2} * prod (2 sin theta_j)^{2a}
    SO(2n+1)    : D_n^{3}     * prod (2 sin(theta_j/2))^{2a}
    SO^-(2n+1)  : D_n^{4}     * prod (2 cos(theta_j/2))^{2a}
    Sp(2n)      : D_n^{2}

with the prefactors carrying the fixed +-1 eigenvalues.  Everything is carried
in log-domain: raw determinants overflow well before n ~ 150 at alpha >= 1.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .logvalue import LogValue
from .symbol import (
    FourierSeries,
    SingularitySet,
    fourier_coeffs_convolution,
    fourier_coeffs_quadrature,
    min_grid_size,
    symbol_coeffs_batch,
)

__all__ = [
    "THKind",
    "GroupFamily",
    "GroupLabel",
    "ConsistencyError",
    "build_th_matrix",
    "log_det",
    "joint_moment_exact",
]


class ConsistencyError(ArithmeticError):
    """A computed value violates a structural property beyond rounding noise."""


class THKind(enum.IntEnum):
    """The four Toeplitz+Hankel entry rules."""

    PLUS_0 = 1   # f_{j-k} + f_{j+k}
    MINUS_2 = 2  # f_{j-k} - f_{j+k+2}
    MINUS_1 = 3  # f_{j-k} - f_{j+k+1}
    PLUS_1 = 4   # f_{j-k} + f_{j+k+1}

    @property
    def hankel_shift(self) -> int:
        return {1: 0, 2: 2, 3: 1, 4: 1}[int(self)]

    @property
    def hankel_sign(self) -> int:
        return {1: +1, 2: -1, 3: -1, 4: +1}[int(self)]

    def max_index(self, order: int) -> int:
        """Largest coefficient index an order-`order` matrix touches."""
        if order <= 0:
            return 0
        return 2 * (order - 1) + self.hankel_shift


class GroupFamily(enum.Enum):
    """The five base ensembles plus the two O(N) coset averages."""

    SO_EVEN = "so-even"            # SO(2n)
    SO_ODD = "so-odd"              # SO(2n+1)
    SO_MINUS_EVEN = "sominus-even"  # SO^-(2n)
    SO_MINUS_ODD = "sominus-odd"   # SO^-(2n+1)
    SP = "sp"                      # Sp(2n)
    O_EVEN = "o-even"              # O(2n): half SO(2n), half SO^-(2n)
    O_ODD = "o-odd"                # O(2n+1)


_BASE = (
    GroupFamily.SO_EVEN,
    GroupFamily.SO_MINUS_EVEN,
    GroupFamily.SO_ODD,
    GroupFamily.SO_MINUS_ODD,
    GroupFamily.SP,
)


@dataclass(frozen=True)
class GroupLabel:
    """An ensemble family together with its size parameter n >= 1."""

    family: GroupFamily
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"size parameter n={self.n} must be >= 1")

    # -- structure tables ---------------------------------------------------

    @property
    def is_base(self) -> bool:
        return self.family in _BASE

    @property
    def dim(self) -> int:
        f = self.family
        if f in (GroupFamily.SO_ODD, GroupFamily.SO_MINUS_ODD, GroupFamily.O_ODD):
            return 2 * self.n + 1
        return 2 * self.n

    @property
    def want_det(self) -> int:
        if self.family in (GroupFamily.SO_MINUS_EVEN, GroupFamily.SO_MINUS_ODD):
            return -1
        if self.family in (GroupFamily.O_EVEN, GroupFamily.O_ODD):
            raise ValueError("O(N) is a coset average; sample its components")
        return +1

    @property
    def is_symplectic(self) -> bool:
        return self.family is GroupFamily.SP

    @property
    def sign_pm(self) -> int:
        """+1 for the orthogonal family, -1 for symplectic (exponent sign in
        the asymptotics)."""
        return -1 if self.is_symplectic else +1

    @property
    def forced_fixed(self) -> tuple[int, int]:
        """(fixed_plus, fixed_minus) eigenvalue counts forced by det and parity."""
        return {
            GroupFamily.SO_EVEN: (0, 0),
            GroupFamily.SO_MINUS_EVEN: (1, 1),
            GroupFamily.SO_ODD: (1, 0),
            GroupFamily.SO_MINUS_ODD: (0, 1),
            GroupFamily.SP: (0, 0),
        }[self.family]

    @property
    def th_kind(self) -> THKind:
        return {
            GroupFamily.SO_EVEN: THKind.PLUS_0,
            GroupFamily.SO_MINUS_EVEN: THKind.MINUS_2,
            GroupFamily.SO_ODD: THKind.MINUS_1,
            GroupFamily.SO_MINUS_ODD: THKind.PLUS_1,
            GroupFamily.SP: THKind.MINUS_2,
        }[self.family]

    @property
    def det_order(self) -> int:
        """Matrix order in the determinant identity (n-1 offset for SO^-(2n))."""
        return self.n - 1 if self.family is GroupFamily.SO_MINUS_EVEN else self.n

    def components(self) -> tuple["GroupLabel", "GroupLabel"]:
        """The two determinant-sign components of an O(N) average."""
        if self.family is GroupFamily.O_EVEN:
            return (GroupLabel(GroupFamily.SO_EVEN, self.n),
                    GroupLabel(GroupFamily.SO_MINUS_EVEN, self.n))
        if self.family is GroupFamily.O_ODD:
            return (GroupLabel(GroupFamily.SO_ODD, self.n),
                    GroupLabel(GroupFamily.SO_MINUS_ODD, self.n))
        raise ValueError(f"{self.family.value} is not a coset average")

    def log_fixed_factor(self, alpha: float, thetas: np.ndarray) -> np.ndarray:
        """log of the fixed-eigenvalue prefactor, summed over the last axis."""
        th = np.asarray(thetas, dtype=float)
        f = self.family
        if f is GroupFamily.SO_MINUS_EVEN:
            return 2.0 * alpha * np.log(2.0 * np.sin(th)).sum(axis=-1)
        if f is GroupFamily.SO_ODD:
            return 2.0 * alpha * np.log(2.0 * np.sin(0.5 * th)).sum(axis=-1)
        if f is GroupFamily.SO_MINUS_ODD:
            return 2.0 * alpha * np.log(2.0 * np.cos(0.5 * th)).sum(axis=-1)
        return np.zeros(th.shape[:-1])

    def __str__(self):
        return f"{self.family.value}(n={self.n})"


def build_th_matrix(fs: FourierSeries, n: int, kind: THKind) -> np.ndarray:
    """Assemble the order-n Toeplitz+Hankel matrix from Fourier coefficients."""
    kind = THKind(kind)
    if n < 0:
        raise ValueError("matrix order must be nonnegative")
    if n == 0:
        return np.empty((0, 0))
    need = kind.max_index(n)
    if fs.K < need:
        raise ValueError(
            f"insufficient truncation: kind {int(kind)} at order {n} needs K >= {need}, got {fs.K}"
        )
    j = np.arange(n)[:, None]
    k = np.arange(n)[None, :]
    c = fs.coeffs
    return c[np.abs(j - k)] + kind.hankel_sign * c[j + k + kind.hankel_shift]


def log_det(M: np.ndarray) -> LogValue:
    """Sign and log-magnitude of det(M) by row-pivoted LU; sign 0 when singular."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if M.size and not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    if M.shape[0] == 0:
        return LogValue(1, 0.0)
    sign, logabs = np.linalg.slogdet(M)
    if sign == 0.0:
        return LogValue(0)
    return LogValue(int(sign), float(logabs))


def _coeffs_for(group: GroupLabel, alpha: float, thetas: np.ndarray, coeffs) -> FourierSeries:
    order = group.det_order
    K = max(group.th_kind.max_index(order), 1)
    if isinstance(coeffs, FourierSeries):
        return coeffs
    if coeffs == "auto":
        return FourierSeries(K, symbol_coeffs_batch(thetas[None, :], alpha, K)[0])
    s = SingularitySet.make(alpha, np.sort(thetas))
    if coeffs == "quadrature":
        # aliasing ~ N^-(1+2a) feeds the determinant's entry sensitivity, so
        # the DFT cross-check path gets a generous grid
        return fourier_coeffs_quadrature(s, K, max(min_grid_size(s, K), 1 << 17))
    if coeffs == "convolution":
        return fourier_coeffs_convolution(s, K, factor_length=max(16 * K, K + (1 << 13)))
    raise ValueError(f"unknown coefficient path {coeffs!r}")


def _hadamard_log_scale(M: np.ndarray) -> float:
    norms = np.linalg.norm(M, axis=-1)
    if np.any(norms == 0.0):
        return -math.inf
    return float(np.log(norms).sum(axis=-1))


def _guard_sign(sign: int, logabs: float, scale_log: float, what: str) -> LogValue:
    if sign == 0:
        return LogValue(0)
    if sign > 0:
        return LogValue(1, logabs)
    # expectation positivity is a theorem; a small negative value is rounding
    defect = math.exp(logabs - scale_log) if math.isfinite(scale_log) else 0.0
    if defect < 1e-8:
        return LogValue(1, logabs)
    raise ConsistencyError(
        f"{what} came out negative beyond rounding (relative defect {defect:.2e})"
    )


def joint_moment_exact(group: GroupLabel, m: int, alpha: float, thetas,
                       coeffs="auto") -> LogValue:
    """E over the ensemble of prod_j |det(I - e^{-i theta_j} U)|^{2 alpha}.

    thetas are m distinct angles in (0, pi), in any order.  `coeffs` selects
    the Fourier-coefficient path: "auto" (production recurrence/exact DFT),
    "quadrature", "convolution", or an explicit FourierSeries.
    """
    if not group.is_base:
        raise ValueError("joint_moment_exact takes one of the five base ensembles")
    th = np.asarray(thetas, dtype=float).ravel()
    if th.size != m:
        raise ValueError(f"expected m={m} angles, got {th.size}")
    if np.any(th <= 0.0) or np.any(th >= math.pi):
        raise ValueError("angles must lie strictly inside (0, pi)")
    if np.unique(th).size != th.size:
        raise ValueError("coincident singularities are not admissible")
    fs = _coeffs_for(group, alpha, th, coeffs)
    M = build_th_matrix(fs, group.det_order, group.th_kind)
    det = log_det(M)
    scale = _hadamard_log_scale(M) if M.size else 0.0
    extra = float(group.log_fixed_factor(alpha, th))
    if group.family is GroupFamily.SO_EVEN:
        extra += math.log(0.5)
    val = _guard_sign(det.sign, det.log_abs + extra, scale + extra, f"joint moment for {group}")
    return val


def joint_moment_batch(group: GroupLabel, alpha: float, thetas: np.ndarray,
                       max_elements: int = 40_000_000) -> np.ndarray:
    """Vectorized joint moments for a (B, m) batch of angle tuples.

    Returns the values as floats (they stay in range at desk scale); the
    negativity guard is applied batch-wide.
    """
    th = np.atleast_2d(np.asarray(thetas, dtype=float))
    B = th.shape[0]
    order = group.det_order
    kind = group.th_kind
    if order == 0:
        logs = group.log_fixed_factor(alpha, th)
        return np.exp(logs)
    K = max(kind.max_index(order), 1)
    chunk = max(1, min(B, max_elements // max(order * order, 1)))
    out = np.empty(B)
    j = np.arange(order)[:, None]
    k = np.arange(order)[None, :]
    toep = np.abs(j - k)
    hank = j + k + kind.hankel_shift
    for i in range(0, B, chunk):
        tc = th[i:i + chunk]
        c = symbol_coeffs_batch(tc, alpha, K)
        M = c[:, toep] + kind.hankel_sign * c[:, hank]
        sign, logabs = np.linalg.slogdet(M)
        scale = np.log(np.linalg.norm(M, axis=-1)).sum(axis=-1)
        extra = group.log_fixed_factor(alpha, tc)
        if group.family is GroupFamily.SO_EVEN:
            extra = extra + math.log(0.5)
        neg = sign < 0
        if np.any(neg):
            defect = np.exp(logabs[neg] - scale[neg])
            if np.any(defect >= 1e-8):
                raise ConsistencyError(
                    f"batched joint moment negative beyond rounding for {group} "
                    f"(worst defect {float(defect.max()):.2e})"
                )
        vals = np.where(sign == 0.0, 0.0, np.exp(logabs + extra))
        out[i:i + chunk] = vals
    return out
