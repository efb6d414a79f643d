"""Graded-panel Gauss-Legendre quadrature.

All the integrals in this package share one difficulty: integrable algebraic
singularities (or 1/n-regularized near-singularities) pinned to interval
endpoints, to the simplex diagonal, or to interior break points.  The cure is
the same everywhere: split the interval at the special points and refine the
panels geometrically (ratio 1/2) into each singular end, then apply plain
Gauss-Legendre on every panel.  On a panel geometrically separated from the
singularity the integrand is analytic and GL converges spectrally, so the only
error left is the untreated mass of the innermost sliver, ~ratio^(depth*(1+p))
for a |x|^p endpoint singularity.

The m-dimensional integrals are reduced to the ordered simplex
a < t_1 < ... < t_m < b (times m! on symmetric integrands) and evaluated as an
iterated tensor product; the graded unit partition of (0,1) is affinely mapped
onto each nested subinterval, which keeps the whole node tensor a broadcasted
product of 1-D rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np


class AccuracyError(ArithmeticError):
    """A quadrature or series evaluation failed its accuracy check."""


@dataclass(frozen=True)
class QuadSpec:
    """Settings for the graded-panel rules.

    depth is the number of geometric refinement levels stacked into each
    graded end; nodes_per_panel the GL order within a panel.  check=True
    repeats the integral on a refined rule (depth+2, nodes+4) and raises
    AccuracyError when the two disagree beyond rel_tol.
    """

    nodes_per_panel: int = 16
    depth: int = 12
    ratio: float = 0.5
    check: bool = True
    rel_tol: float = 1e-4
    abs_tol: float = 1e-12
    max_width: float | None = None  # cap on absolute panel width (1-D rules only)

    def refined(self) -> "QuadSpec":
        return replace(self, depth=self.depth + 1, nodes_per_panel=self.nodes_per_panel + 2, check=False)


def auto_depth(n: int) -> int:
    """Refinement depth resolving features at scale 1/n: ceil(log2 n) + 4."""
    return max(6, math.ceil(math.log2(max(n, 2))) + 4)


@lru_cache(maxsize=64)
def gl_rule(p: int) -> tuple[np.ndarray, np.ndarray]:
    """GL nodes/weights on (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(p)
    return (0.5 * (x + 1.0)).copy(), (0.5 * w).copy()


@lru_cache(maxsize=256)
def unit_panels(depth: int, ratio: float = 0.5, grade_lo: bool = True, grade_hi: bool = True) -> np.ndarray:
    """Panel edges partitioning (0, 1), geometrically refined into graded ends.

    An ungraded half gets two plain panels (enough for GL once the nearest
    singularity sits a full half-interval away).  Returns an increasing edge
    vector from 0 to 1.
    """
    if depth > 44:
        # beyond ~2^-46 the innermost nodes round onto the interval endpoint
        raise ValueError(f"depth={depth} exceeds float64 panel resolution")
    lo: list[float] = [0.0]
    if grade_lo:
        lo += [0.5 * ratio**k for k in range(depth, -1, -1)]
    else:
        lo += [0.25, 0.5]
    hi: list[float] = []
    if grade_hi:
        hi += [1.0 - 0.5 * ratio**k for k in range(1, depth + 1)]
    else:
        hi.append(0.75)
    hi.append(1.0)
    return np.array(lo + hi)


@lru_cache(maxsize=256)
def unit_rule(depth: int, p: int, ratio: float = 0.5,
              grade_lo: bool = True, grade_hi: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Flattened nodes/weights of the graded composite GL rule on (0, 1)."""
    edges = unit_panels(depth, ratio, grade_lo, grade_hi)
    x, w = gl_rule(p)
    widths = np.diff(edges)
    nodes = edges[:-1, None] + widths[:, None] * x[None, :]
    weights = widths[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def _subdivide(edges: np.ndarray, max_width: float | None) -> np.ndarray:
    """Split panels wider than max_width into equal parts (resolves integrands
    oscillating on a scale the graded partition does not see)."""
    if max_width is None:
        return edges
    out = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        parts = max(1, math.ceil((hi - lo) / max_width))
        out.extend(lo + (hi - lo) * (i + 1) / parts for i in range(parts))
    return np.array(out)


def _rule_1d(a: float, b: float, s: QuadSpec) -> tuple[np.ndarray, np.ndarray]:
    edges = a + (b - a) * unit_panels(s.depth, s.ratio)
    edges = _subdivide(edges, s.max_width)
    x, w = gl_rule(s.nodes_per_panel)
    widths = np.diff(edges)
    nodes = edges[:-1, None] + widths[:, None] * x[None, :]
    weights = widths[:, None] * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate_1d(f: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                 interior_points: Sequence[float] = (), spec: QuadSpec = QuadSpec()) -> float:
    """Integrate f over (a, b), grading into a, b and every interior break point.

    f must accept an array of abscissae and return the integrand values.
    """

    def run(s: QuadSpec) -> float:
        pts = [a] + sorted(float(t) for t in interior_points if a < t < b) + [b]
        total = 0.0
        for lo, hi in zip(pts[:-1], pts[1:]):
            if hi - lo <= 0.0:
                continue
            nodes, weights = _rule_1d(lo, hi, s)
            total += float(np.dot(f(nodes), weights))
        return total

    val = run(spec)
    if spec.check:
        ref = run(spec.refined())
        if abs(val - ref) > max(spec.rel_tol * abs(ref), spec.abs_tol):
            raise AccuracyError(
                f"1-D quadrature did not converge: {val!r} vs refined {ref!r}"
            )
        val = ref
    return val


def integrate_simplex(f: Callable[[np.ndarray], np.ndarray], m: int, a: float, b: float,
                      spec: QuadSpec = QuadSpec(), chunk: int = 65536) -> float:
    """Integrate f over the ordered simplex a < t_1 < ... < t_m < b.

    f takes an (N, m) array of ordered tuples and returns N values.  The result
    is the bare simplex integral; multiply by m! for a symmetric integrand on
    the full cube.  Grading is applied toward both ends of every nested level,
    which covers the a/b edges and the merging diagonals t_j -> t_{j+1}.
    """
    if m < 1 or m > 3:
        raise ValueError("integrate_simplex supports m in {1, 2, 3}")

    def run(s: QuadSpec) -> float:
        un, uw = unit_rule(s.depth, s.nodes_per_panel, s.ratio)
        if m == 1:
            x, w = _rule_1d(a, b, s)
            return float(np.dot(f(x[:, None]), w))
        if m == 2:
            x2 = a + (b - a) * un                      # outer t2
            w2 = (b - a) * uw
            # inner t1 in (a, t2): affine image of the unit rule
            x1 = a + (x2[:, None] - a) * un[None, :]   # (N2, N1)
            w1 = (x2[:, None] - a) * uw[None, :]
            pts = np.empty(x1.shape + (2,))
            pts[..., 0] = x1
            pts[..., 1] = x2[:, None]
            vals = _eval_chunked(f, pts.reshape(-1, 2), chunk).reshape(x1.shape)
            return float(np.dot(w2, (vals * w1).sum(axis=1)))
        # m == 3: iterate outer t3, vectorize the (t2, t1) tensor per t3 node
        x3 = a + (b - a) * un
        w3 = (b - a) * uw
        total = 0.0
        for t3, wt3 in zip(x3, w3):
            x2 = a + (t3 - a) * un
            w2 = (t3 - a) * uw
            x1 = a + (x2[:, None] - a) * un[None, :]
            w1 = (x2[:, None] - a) * uw[None, :]
            pts = np.empty(x1.shape + (3,))
            pts[..., 0] = x1
            pts[..., 1] = x2[:, None]
            pts[..., 2] = t3
            vals = _eval_chunked(f, pts.reshape(-1, 3), chunk).reshape(x1.shape)
            total += wt3 * float(np.dot(w2, (vals * w1).sum(axis=1)))
        return total

    val = run(spec)
    if spec.check:
        ref = run(spec.refined())
        if abs(val - ref) > max(spec.rel_tol * abs(ref), spec.abs_tol):
            raise AccuracyError(
                f"simplex quadrature (m={m}) did not converge: {val!r} vs refined {ref!r}"
            )
        val = ref
    return val


def _eval_chunked(f, pts: np.ndarray, chunk: int) -> np.ndarray:
    if pts.shape[0] <= chunk:
        return np.asarray(f(pts), dtype=float)
    out = np.empty(pts.shape[0])
    for i in range(0, pts.shape[0], chunk):
        out[i:i + chunk] = f(pts[i:i + chunk])
    return out
