"""Haar sampling of the compact orthogonal and symplectic ensembles.

Orthogonal samples come from the QR decomposition of a square standard
Gaussian matrix with the R-diagonal sign fix (which makes the decomposition
unique and the Q factor Haar on O(N)); the determinant sign is then forced by
an explicit reflection, which maps Haar measure between the two cosets.
Symplectic samples are built by Gram-Schmidt over quaternion-structured
columns: U^T J U = J together with unitarity is equivalent to U J = J conj(U),
which pairs column k with column n+k = -J conj(column k).

Eigenangles are read off the Hermitian part (U + U*)/2, whose spectrum is
cos(theta'_k) twice per conjugate pair and +-1 once per fixed eigenvalue.

All randomness flows through :class:`Seed`; a Monte Carlo run gives sample i
the stream ``seed.substream(i)``, so results are independent of batch layout
and worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .determinant import GroupFamily, GroupLabel

__all__ = ["Seed", "EigenAngles", "ExtractionError", "sample_orthogonal",
           "sample_symplectic", "eigenangles"]

_MASK64 = (1 << 64) - 1
_PAIR_TOL = 1e-7


class ExtractionError(RuntimeError):
    """Spectrum inconsistent with the group-forced eigenvalue structure."""


@dataclass(frozen=True)
class Seed:
    """(master, stream) pair keying a Philox counter-based generator.

    Identical pairs reproduce identical sample sequences bit-for-bit; distinct
    streams are statistically independent.
    """

    master: int
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "master", int(self.master) & _MASK64)
        object.__setattr__(self, "stream", int(self.stream) & _MASK64)

    def generator(self) -> np.random.Generator:
        key = self.master | (self.stream << 64)
        return np.random.Generator(np.random.Philox(key=key))

    def substream(self, i: int) -> "Seed":
        return Seed(self.master, (self.stream + i) & _MASK64)


@dataclass(frozen=True)
class EigenAngles:
    """Free eigenangle pairs e^{+-i theta'} plus fixed +-1 eigenvalue counts."""

    free_angles: tuple[float, ...]
    fixed_plus: int = 0
    fixed_minus: int = 0

    def __post_init__(self):
        if self.fixed_plus < 0 or self.fixed_minus < 0:
            raise ValueError("fixed eigenvalue counts must be nonnegative")
        if any(not (0.0 <= t <= math.pi) for t in self.free_angles):
            raise ValueError("free angles must lie in [0, pi]")

    @property
    def dim(self) -> int:
        return 2 * len(self.free_angles) + self.fixed_plus + self.fixed_minus


def _gaussian_batch(N: int, seed: Seed, start: int, count: int,
                    complex_cols: int = 0) -> np.ndarray:
    """Stack of per-sample Gaussian draws, sample i from substream(start + i)."""
    if complex_cols:
        out = np.empty((count, complex_cols, N), dtype=complex)
        for i in range(count):
            g = seed.substream(start + i).generator()
            raw = g.standard_normal((complex_cols, N, 2))
            out[i] = raw[..., 0] + 1j * raw[..., 1]
        return out
    out = np.empty((count, N, N))
    for i in range(count):
        out[i] = seed.substream(start + i).generator().standard_normal((N, N))
    return out


def _orthogonalize(A: np.ndarray, want_det: int) -> np.ndarray:
    """Sign-fixed QR of a Gaussian stack, det forced by reflecting the first row."""
    Q, R = np.linalg.qr(A)
    d = np.einsum("...ii->...i", R)
    small = np.abs(d) < 1e-12
    if np.any(small):
        raise np.linalg.LinAlgError("rank-deficient Gaussian draw")
    Q = Q * np.sign(d)[..., None, :]
    dets = np.linalg.det(Q)
    flip = dets * want_det < 0
    Q[flip, 0, :] = -Q[flip, 0, :]
    return Q


def sample_orthogonal_batch(N: int, want_det: int, seed: Seed, start: int,
                            count: int) -> np.ndarray:
    """(count, N, N) stack of Haar samples on SO(N) or SO^-(N)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if want_det not in (-1, 1):
        raise ValueError("want_det must be +1 or -1")
    A = _gaussian_batch(N, seed, start, count)
    try:
        return _orthogonalize(A, want_det)
    except np.linalg.LinAlgError:
        pass
    # probability-zero event: redraw the offending samples once
    Q = np.empty_like(A)
    for i in range(count):
        try:
            Q[i] = _orthogonalize(A[i][None], want_det)[0]
        except np.linalg.LinAlgError:
            g = seed.substream(start + i).generator()
            g.standard_normal((N, N))  # skip the bad block, redraw fresh
            Q[i] = _orthogonalize(g.standard_normal((N, N))[None], want_det)[0]
    return Q


def sample_orthogonal(N: int, want_det: int, seed: Seed) -> np.ndarray:
    """One Haar-distributed orthogonal matrix with the requested determinant.

    Parameters
    ----------
    N : matrix dimension (>= 1).
    want_det : +1 for SO(N), -1 for the SO^-(N) coset.
    seed : RNG key; the same seed reproduces the same matrix exactly.
    """
    return sample_orthogonal_batch(N, want_det, seed, 0, 1)[0]


def _partner(u: np.ndarray, n: int) -> np.ndarray:
    # -J conj(u) with J = [[0, I], [-I, 0]]
    out = np.empty_like(u)
    out[..., :n] = -np.conj(u[..., n:])
    out[..., n:] = np.conj(u[..., :n])
    return out


def sample_symplectic_batch(n: int, seed: Seed, start: int, count: int,
                            check_tol: float = 1e-10) -> np.ndarray:
    """(count, 2n, 2n) stack of Haar samples on the compact group Sp(2n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    W = _gaussian_batch(2 * n, seed, start, count, complex_cols=n)
    basis = np.empty((count, 2 * n, 2 * n), dtype=complex)  # quaternion pairs, interleaved
    for k in range(n):
        w = W[:, k, :].copy()
        for _ in range(2):  # classical Gram-Schmidt, repeated once
            if k:
                prev = basis[:, :, : 2 * k]
                proj = np.einsum("bjc,bj->bc", prev.conj(), w)
                w = w - np.einsum("bjc,bc->bj", prev, proj)
        nrm = np.linalg.norm(w, axis=1)
        if np.any(nrm < 1e-12):
            raise np.linalg.LinAlgError("rank-deficient quaternionic draw")
        u = w / nrm[:, None]
        basis[:, :, 2 * k] = u
        basis[:, :, 2 * k + 1] = _partner(u, n)
    U = np.empty_like(basis)
    U[:, :, :n] = basis[:, :, 0::2]
    U[:, :, n:] = basis[:, :, 1::2]
    residual = _symplectic_residual(U, n)
    if residual > check_tol:
        raise ExtractionError(
            f"symplectic structure residual {residual:.2e} above {check_tol:.1e}"
        )
    return U


def _symplectic_residual(U: np.ndarray, n: int) -> float:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    r1 = np.abs(U @ J @ np.swapaxes(U, -1, -2) - J).max()
    r2 = np.abs(np.swapaxes(U.conj(), -1, -2) @ U - np.eye(2 * n)).max()
    return float(max(r1, r2))


def sample_symplectic(n: int, seed: Seed) -> np.ndarray:
    """One Haar-distributed 2n x 2n unitary symplectic matrix.

    Satisfies ||U J U^T - J||_max <= 1e-10 and ||U* U - I||_max <= 1e-10
    (raises ExtractionError otherwise).
    """
    return sample_symplectic_batch(n, seed, 0, 1)[0]


def cos_pairs_batch(U: np.ndarray, group: GroupLabel) -> np.ndarray:
    """cos(theta') of the free conjugate pairs for a stack of samples.

    Removes the group-forced fixed eigenvalues from the sorted spectrum of the
    Hermitian part (validating they sit within 1e-7 of +-1) and averages the
    remaining values in consecutive pairs.  Near-+-1 *pairs* are legitimate
    free angles and stay free; only the structurally forced eigenvalues are
    claimed as fixed.
    """
    if not group.is_base:
        raise ValueError("cos_pairs_batch takes one of the five base ensembles")
    S = 0.5 * (U + np.swapaxes(U.conj(), -1, -2))
    lam = np.linalg.eigvalsh(S)  # ascending
    fp, fm = group.forced_fixed
    d = lam.shape[-1]
    if fm and np.any(np.abs(lam[..., :fm] + 1.0) > _PAIR_TOL):
        worst = float(np.abs(lam[..., :fm] + 1.0).max())
        raise ExtractionError(f"forced -1 eigenvalue missing (defect {worst:.2e}) for {group}")
    if fp and np.any(np.abs(lam[..., d - fp:] - 1.0) > _PAIR_TOL):
        worst = float(np.abs(lam[..., d - fp:] - 1.0).max())
        raise ExtractionError(f"forced +1 eigenvalue missing (defect {worst:.2e}) for {group}")
    middle = lam[..., fm: d - fp] if fp else lam[..., fm:]
    r = middle.shape[-1]
    if r % 2:
        raise ExtractionError(f"parity mismatch: {r} unpaired eigenvalues for {group}")
    pairs = middle.reshape(middle.shape[:-1] + (r // 2, 2))
    gaps = np.abs(pairs[..., 1] - pairs[..., 0])
    if np.any(gaps > 1e-5):
        raise ExtractionError(
            f"conjugate pairing failed (worst gap {float(gaps.max()):.2e}) for {group}"
        )
    return np.clip(pairs.mean(axis=-1), -1.0, 1.0)


def eigenangles(U: np.ndarray, group: GroupLabel) -> EigenAngles:
    """Free eigenangles and fixed +-1 counts of one sampled matrix.

    Angles that round to exactly 0 or pi (a probability-zero degeneracy) are
    folded into the fixed counts so downstream quadrature never sees an empty
    panel.
    """
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1] or U.shape[0] != group.dim:
        raise ValueError(f"expected a {group.dim} x {group.dim} matrix for {group}")
    ortho = np.abs(U.conj().T @ U - np.eye(U.shape[0])).max()
    if ortho > 1e-8:
        raise ValueError(f"matrix is not unitary to tolerance (residual {ortho:.2e})")
    cosv = cos_pairs_batch(U[None], group)[0]
    ang = np.arccos(cosv)
    fp, fm = group.forced_fixed
    keep = []
    for t in np.sort(ang):
        if t == 0.0:
            fp += 2
        elif t == math.pi:
            fm += 2
        else:
            keep.append(float(t))
    return EigenAngles(tuple(keep), fp, fm)
