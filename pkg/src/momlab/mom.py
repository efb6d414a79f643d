"""Moments of moments: the exact determinant route and the Monte Carlo route.

The target quantity for a group G of size parameter n is

    MoM(m, a) = E_U [ ( (1/2pi) int_0^{2pi} |det(I - e^{-it} U)|^{2a} dt )^m ].

Monte Carlo averages the m-th power of the spectral integral over Haar
samples.  For integer m, Fubini turns the same quantity into an m-fold
integral of the exact Toeplitz+Hankel joint moment over (0, pi)^m with measure
prod dtheta_j / pi, which is evaluated on the ordered simplex (times m!) with
panels graded into the edges and the merging diagonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .determinant import GroupFamily, GroupLabel, joint_moment_batch
from .quadrature import QuadSpec, auto_depth, gl_rule, integrate_simplex
from .sampling import EigenAngles, Seed, cos_pairs_batch, sample_orthogonal_batch, sample_symplectic_batch

__all__ = ["MoMParams", "MCEstimate", "inner_integral", "mom_mc", "mom_exact"]


@dataclass(frozen=True)
class MoMParams:
    """Which moment of which ensemble family: group, power m, exponent alpha."""

    group: GroupFamily
    m: float
    alpha: float

    def __post_init__(self):
        if not self.m >= 1:
            raise ValueError(f"m={self.m} must be >= 1")
        if not self.alpha > 0.0:
            if self.alpha != 0.0:  # alpha = 0 admitted as the exact-1 calibration point
                raise ValueError(f"alpha={self.alpha} must be positive")

    @property
    def integer_m(self) -> int:
        if self.m != int(self.m):
            raise ValueError(f"the exact route needs integer m, got {self.m}")
        return int(self.m)


@dataclass(frozen=True)
class MCEstimate:
    """Plain Monte Carlo mean with its standard error."""

    mean: float
    stderr: float
    samples: int
    seed: Seed

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least 2 samples for a standard error")


def _inner_batch(cosv: np.ndarray, fixed_plus: int, fixed_minus: int,
                 alpha: float, nodes_per_panel: int) -> np.ndarray:
    """Spectral integrals (1/2pi) int |p|^{2a} for a (B, r) batch of cos(theta').

    The integrand is even in t, so the [0, 2pi) panel partition at
    {+-theta'_k, 0, pi} collapses to twice the (0, pi) part: panels between
    consecutive sorted angles, Gauss-Legendre within each panel.
    """
    B, r = cosv.shape
    if alpha == 0.0:
        return np.ones(B)
    ang = np.arccos(np.clip(cosv, -1.0, 1.0))
    ang.sort(axis=1)
    edges = np.concatenate([np.zeros((B, 1)), ang, np.full((B, 1), np.pi)], axis=1)
    x, w = gl_rule(nodes_per_panel)
    lo = edges[:, :-1, None]
    width = np.diff(edges, axis=1)[:, :, None]
    nodes = lo + width * x[None, None, :]               # (B, r+1, p)
    weights = width * w[None, None, :]
    # (2-2cos(t-t'))(2-2cos(t+t')) = (2cos t - 2cos t')^2; the fixed +-1
    # eigenvalues contribute (2 -+ 2cos t); one fractional power at the end
    cosn = np.cos(nodes)
    base = np.ones_like(nodes)
    for k in range(r):
        d = 2.0 * cosn - 2.0 * cosv[:, k][:, None, None]
        base *= d * d
    if fixed_plus:
        base *= (2.0 - 2.0 * cosn) ** fixed_plus
    if fixed_minus:
        base *= (2.0 + 2.0 * cosn) ** fixed_minus
    return (base ** alpha * weights).sum(axis=(1, 2)) / np.pi


def inner_integral(angles: EigenAngles, alpha: float, nodes_per_panel: int = 16) -> float:
    """(1/2pi) int_0^{2pi} |p(t; U)|^{2 alpha} dt for one spectrum.

    Exactly 1 at alpha = 0; otherwise the panel sum described in
    :func:`_inner_batch`.  Accuracy is governed by nodes_per_panel (>= 4).
    """
    if nodes_per_panel < 4:
        raise ValueError("nodes_per_panel must be >= 4")
    if alpha == 0.0:
        return 1.0
    cosv = np.array([[math.cos(t) for t in angles.free_angles]])
    return float(_inner_batch(cosv, angles.fixed_plus, angles.fixed_minus,
                              alpha, nodes_per_panel)[0])


_CHUNK = 4096


def _mc_base(group: GroupLabel, m: float, alpha: float, samples: int, seed: Seed,
             nodes_per_panel: int, stream_offset: int) -> np.ndarray:
    """Per-sample values of (inner integral)^m; sample i uses substream(offset + i)."""
    vals = np.empty(samples)
    fp, fm = group.forced_fixed
    for lo in range(0, samples, _CHUNK):
        hi = min(lo + _CHUNK, samples)
        if group.family is GroupFamily.SP:
            U = sample_symplectic_batch(group.n, seed, stream_offset + lo, hi - lo)
        else:
            U = sample_orthogonal_batch(group.dim, group.want_det, seed,
                                        stream_offset + lo, hi - lo)
        cosv = cos_pairs_batch(U, group)
        inner = _inner_batch(cosv, fp, fm, alpha, nodes_per_panel)
        vals[lo:hi] = inner ** m
    return vals


def mom_mc(p: MoMParams, n: int, samples: int, seed: Seed,
           nodes_per_panel: int = 16) -> MCEstimate:
    """Monte Carlo estimate of MoM over `samples` Haar draws.

    Real (non-integer) m is accepted as an experimental extension; the O(N)
    families average their two determinant-sign components with weight 1/2
    each, splitting the sample budget between them.
    """
    if samples < 100:
        raise ValueError("samples must be >= 100")
    group = GroupLabel(p.group, n)
    if p.alpha == 0.0:
        return MCEstimate(1.0, 0.0, samples, seed)
    if group.family in (GroupFamily.O_EVEN, GroupFamily.O_ODD):
        plus, minus = group.components()
        s1 = samples // 2
        s2 = samples - s1
        v1 = _mc_base(plus, p.m, p.alpha, s1, seed, nodes_per_panel, 0)
        v2 = _mc_base(minus, p.m, p.alpha, s2, seed, nodes_per_panel, s1)
        mean = 0.5 * (v1.mean() + v2.mean())
        stderr = 0.5 * math.hypot(v1.std(ddof=1) / math.sqrt(s1),
                                  v2.std(ddof=1) / math.sqrt(s2))
        return MCEstimate(float(mean), float(stderr), samples, seed)
    vals = _mc_base(group, p.m, p.alpha, samples, seed, nodes_per_panel, 0)
    return MCEstimate(float(vals.mean()),
                      float(vals.std(ddof=1) / math.sqrt(samples)), samples, seed)


def mom_exact(p: MoMParams, n: int, quad: QuadSpec | None = None) -> float:
    """Exact-route MoM for integer m <= 3: the Fubini integral of the
    Toeplitz+Hankel joint moment over the ordered simplex, times m!.

    Raises quadrature.AccuracyError when the refinement ratio test fails
    (quad.check, on by default).
    """
    m = p.integer_m
    if m > 3:
        raise ValueError("the exact route is limited to m <= 3 (cost grows as nodes^m)")
    group = GroupLabel(p.group, n)
    if group.family in (GroupFamily.O_EVEN, GroupFamily.O_ODD):
        plus, minus = group.components()
        pp = MoMParams(plus.family, p.m, p.alpha)
        pm = MoMParams(minus.family, p.m, p.alpha)
        return 0.5 * mom_exact(pp, n, quad) + 0.5 * mom_exact(pm, n, quad)
    if quad is None:
        if p.alpha == 0.0:
            # the integrand is exactly constant: any panel set integrates it,
            # so spend the nodes on exercising the determinant identity only
            quad = QuadSpec(depth=3, nodes_per_panel=8, check=False)
        elif m == 1:
            # the determinant carries oscillatory corrections at frequency
            # ~2n; cap the panel width so GL resolves them
            quad = QuadSpec(depth=auto_depth(n), max_width=16.0 / (3.0 * n))
        else:
            # node count scales like (panels*nodes)^m: trade panel order for
            # dimension on the multi-dimensional route
            quad = QuadSpec(depth=auto_depth(n), nodes_per_panel=12)

    def f(pts: np.ndarray) -> np.ndarray:
        return joint_moment_batch(group, p.alpha, pts)

    val = integrate_simplex(f, m, 0.0, math.pi, quad)
    return val * math.factorial(m) / math.pi ** m
