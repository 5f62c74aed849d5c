"""Finite truncation of the one-mode interacting Fock space of a measure.

Levels Phi_0, Phi_1, ..., Phi_{dim-1} carry the weighted inner product
<Phi_n, Phi_n> = lambda_n = omega_1 * ... * omega_n (lambda_0 = 1).  The
creation operator raises a level, the annihilation operator lowers with
weight omega, and the shift operator multiplies level n by alpha_n.  In the
orthonormalized basis their sum is the symmetric tridiagonal matrix with
diagonal alpha_n and off-diagonal sqrt(omega_n); its (0, 0) matrix-power
entries are exactly the moments of the underlying measure, which is the
moment equivalence checked by the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .recurrence import JacobiSzego

__all__ = ["FockSpace", "build_fock", "vacuum_moments"]


@dataclass(frozen=True, eq=False)
class FockSpace:
    js: JacobiSzego
    dim: int
    weights: np.ndarray   # weights[n] = lambda_n, n = 0..dim-1

    def creation(self):
        """Matrix of a+ on the level basis: Phi_n -> Phi_{n+1}."""
        m = np.zeros((self.dim, self.dim))
        idx = np.arange(self.dim - 1)
        m[idx + 1, idx] = 1.0
        return m

    def annihilation(self):
        """Matrix of a: Phi_{n+1} -> omega_{n+1} Phi_n, a Phi_0 = 0."""
        m = np.zeros((self.dim, self.dim))
        idx = np.arange(self.dim - 1)
        m[idx, idx + 1] = self.js.omega[: self.dim - 1]
        return m

    def number_op(self):
        return np.diag(np.arange(self.dim, dtype=float))

    def shift_op(self):
        """alpha_N: Phi_n -> alpha_n Phi_n."""
        return np.diag(self.js.alpha[: self.dim])

    def jacobi_matrix(self):
        """Symmetric tridiagonal form of a+ + a + alpha_N (orthonormal basis)."""
        t = np.diag(self.js.alpha[: self.dim]).astype(float)
        rt = np.sqrt(self.js.omega[: self.dim - 1])
        idx = np.arange(self.dim - 1)
        t[idx + 1, idx] = rt
        t[idx, idx + 1] = rt
        return t


def build_fock(js, dim):
    """Fock data of depth dim over the given recurrence coefficients."""
    if dim < 1:
        raise ValueError("dim must be at least 1")
    if js.alpha.size < dim or js.omega.size < dim - 1:
        raise ValueError(
            f"dim = {dim} exceeds available coefficients "
            f"(alpha: {js.alpha.size}, omega: {js.omega.size})")
    weights = np.concatenate([[1.0], np.cumprod(js.omega[: dim - 1])])
    return FockSpace(js, int(dim), weights)


def vacuum_moments(f, n_max):
    """Vacuum moments m_k = <Phi_0, (a+ + a + alpha_N)^k Phi_0>, k <= n_max,
    computed as iterated matrix-vector products of the symmetric tridiagonal
    matrix on the first basis vector.

    A k-step nearest-neighbor walk from level 0 that returns to level 0
    reaches at most level k/2, so dim >= n_max/2 + 1 guarantees the
    truncation is invisible; smaller dims are rejected.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if f.dim < n_max // 2 + 1:
        raise ValueError(
            f"dim = {f.dim} too small for n_max = {n_max}; "
            f"need at least {n_max // 2 + 1}")
    t = f.jacobi_matrix()
    u = np.zeros(f.dim)
    u[0] = 1.0
    out = np.empty(n_max + 1)
    out[0] = 1.0
    for k in range(1, n_max + 1):
        u = t @ u
        out[k] = u[0]
    return out
