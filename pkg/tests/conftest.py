"""Shared brute-force oracles.

These deliberately avoid the library's closed forms and determinant pipeline:
quadrature of explicit integrands only, so closed-form results can be checked
against something that cannot share their bugs.
"""

import math

import numpy as np

from momlab.quadrature import QuadSpec, integrate_simplex


def i_infinity_quadrature(m: int, alpha: float, sign: int,
                          depth: int = 40, nodes: int = 16) -> float:
    """Direct quadrature of the limiting singular integral over (0, pi)^m.

    The pair distance is evaluated as 4 |sin((t_j - t_k)/2) sin((t_j + t_k)/2)|,
    which is |2 cos t_j - 2 cos t_k| without the catastrophic cancellation.
    """
    a2 = alpha * alpha

    def f(pts: np.ndarray) -> np.ndarray:
        logv = ((-a2 + sign * alpha) * np.log(2.0 * np.sin(pts))).sum(axis=-1)
        for j in range(m):
            for k in range(j + 1, m):
                d = 4.0 * np.abs(np.sin(0.5 * (pts[..., j] - pts[..., k]))
                                 * np.sin(0.5 * (pts[..., j] + pts[..., k])))
                logv = logv - 2.0 * a2 * np.log(d)
        return np.exp(logv)

    spec = QuadSpec(depth=depth, nodes_per_panel=nodes, check=False)
    return integrate_simplex(f, m, 0.0, math.pi, spec) * math.factorial(m) / math.pi ** m


def selberg_quadrature_2d(a: float, b: float, c: float,
                          depth: int = 40, nodes: int = 16) -> float:
    """Direct quadrature of the 2-variable Selberg integrand over (0, 1)^2."""

    def f(pts: np.ndarray) -> np.ndarray:
        x, y = pts[..., 0], pts[..., 1]
        return np.abs(x - y) ** (2 * c) * ((1 - x) * (1 - y)) ** (a - 1) * (x * y) ** (b - 1)

    spec = QuadSpec(depth=depth, nodes_per_panel=nodes, check=False)
    return 2.0 * integrate_simplex(f, 2, 0.0, 1.0, spec)


# Weyl integration densities (unnormalized) for the small brute-force ensemble
# averages: r free angle pairs on [0, pi], plus forced fixed eigenvalues.
_WEYL = {
    "so-even": (lambda n: n, (0, 0), "none"),
    "so-odd": (lambda n: n, (1, 0), "sin_half"),
    "sp": (lambda n: n, (0, 0), "sin"),
    "sominus-even": (lambda n: n - 1, (1, 1), "sin"),
    "sominus-odd": (lambda n: n, (0, 1), "cos_half"),
}


def joint_moment_bruteforce(family: str, n: int, alpha: float, thetas) -> float:
    """E prod_j |p(theta_j)|^{2a} by quadrature over the Weyl eigenvalue density.

    Supports r <= 2 free pairs (i.e. the smallest ensembles), which is all the
    anchor tests need.
    """
    from scipy import integrate

    rank_of, fixed, weight = _WEYL[family]
    r = rank_of(n)
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))

    def wfun(a):
        w = 1.0
        for i in range(r):
            for j in range(i + 1, r):
                w *= (math.cos(a[i]) - math.cos(a[j])) ** 2
        for i in range(r):
            if weight == "sin":
                w *= math.sin(a[i]) ** 2
            elif weight == "sin_half":
                w *= math.sin(a[i] / 2) ** 2
            elif weight == "cos_half":
                w *= math.cos(a[i] / 2) ** 2
        return w

    def value(a):
        v = 1.0
        for t in thetas:
            for i in range(r):
                v *= ((2 - 2 * math.cos(t - a[i])) * (2 - 2 * math.cos(t + a[i]))) ** alpha
            v *= (2 - 2 * math.cos(t)) ** (alpha * fixed[0])
            v *= (2 + 2 * math.cos(t)) ** (alpha * fixed[1])
        return v

    if r == 0:
        return value([])
    if r == 1:
        num = integrate.quad(lambda x: wfun([x]) * value([x]), 0, math.pi, limit=400)[0]
        den = integrate.quad(lambda x: wfun([x]), 0, math.pi, limit=400)[0]
        return num / den
    if r == 2:
        num = integrate.dblquad(lambda y, x: wfun([x, y]) * value([x, y]),
                                0, math.pi, 0, math.pi, epsabs=1e-11, epsrel=1e-11)[0]
        den = integrate.dblquad(lambda y, x: wfun([x, y]),
                                0, math.pi, 0, math.pi, epsabs=1e-11, epsrel=1e-11)[0]
        return num / den
    raise ValueError("brute force limited to at most 2 free pairs")
