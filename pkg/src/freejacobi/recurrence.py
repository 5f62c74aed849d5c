"""Jacobi-Szego recurrence parameters: closed forms, extraction, monic forms.

The monic orthogonal polynomials of a measure satisfy

    p_{n+1}(x) = (x - alpha_n) p_n(x) - omega_n p_{n-1}(x),

with shifts alpha_n (n >= 0) and positive weights omega_n (n >= 1).
Extraction from a raw measure uses the Stieltjes procedure: the recurrence
iterates are built on a quadrature discretization and each coefficient is an
inner-product ratio, which is far better conditioned than any map from raw
moments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, PositivityError
from .measures import _sin_nodes, xi_shift

__all__ = ["JacobiSzego", "stated_params", "extract_from_measure", "monicize"]


@dataclass(frozen=True, eq=False)
class JacobiSzego:
    """Recurrence data; alpha[k] is the shift of index k and omega[k] the
    weight of (1-based) index k+1, so omega[0] = omega_1."""

    alpha: np.ndarray
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float))
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float))
        if np.any(self.omega <= 0.0):
            raise ValueError("all recurrence weights omega must be positive")

    def n_levels(self):
        return self.alpha.size


def stated_params(family, lam=None, theta=None, n_max=12):
    """Closed-form Jacobi-Szego parameters of the three polynomial families.

    family = "Q_lambda":       alpha = 0,    omega_1 = 1/(2(2-lam)), rest 1/4
    family = "P_lambda":       alpha_0 = a(lam), omega_1 = 1/2,      rest 1/4
    family = "Q_lambda_theta": alpha_0 = b,  omega_1 = c/2,          rest 1/4

    with a(lam) = sqrt((1-lam)/(lam(2-lam))), c = 1/(2(1-lam theta)) and
    b = sqrt(lam/((1-theta)(1-lam theta))) (2 theta - 1) as tabulated.

    Caution: the tabulated b is twice the first moment of nu_{lam,theta},
    so for theta != 1/2 this alpha_0 is NOT the extraction fixed point —
    ``extract_from_measure(nu_lambda_theta(p), ...)`` returns alpha_0 = b/2.
    The orthogonal family itself is built by ``build_Q_lambda_theta`` with
    its default b_variant="mean".
    """
    alpha = np.zeros(n_max + 1)
    omega = np.full(n_max, 0.25)
    if family == "Q_lambda":
        if not 0.0 < lam <= 1.0:
            raise ValueError(f"lam = {lam} outside (0, 1]")
        if n_max >= 1:
            omega[0] = 1.0 / (2.0 * (2.0 - lam))
    elif family == "P_lambda":
        alpha[0] = xi_shift(lam)
        if n_max >= 1:
            omega[0] = 0.5
    elif family == "Q_lambda_theta":
        if not (0.0 < theta <= 0.5 and 0.0 < lam <= 1.0):
            raise ValueError(f"invalid (lam, theta) = ({lam}, {theta})")
        alpha[0] = math.sqrt(lam / ((1.0 - theta) * (1.0 - lam * theta))) * (2.0 * theta - 1.0)
        if n_max >= 1:
            omega[0] = 1.0 / (4.0 * (1.0 - lam * theta))
    else:
        raise ValueError(f"unknown family {family!r}")
    return JacobiSzego(alpha, omega)


def _stieltjes_discretized(xs, ws, n_max):
    """Stieltjes procedure on a discrete measure sum_i ws[i] delta_{xs[i]}."""
    alpha = np.zeros(n_max + 1)
    omega = np.zeros(n_max)
    p_prev = np.zeros_like(xs)
    p = np.ones_like(xs)
    norm_prev = None
    norm = float(np.sum(ws))
    alpha[0] = float(np.sum(ws * xs)) / norm
    for k in range(1, n_max + 1):
        w_k = omega[k - 2] if k >= 2 else 0.0
        p_prev, p = p, (xs - alpha[k - 1]) * p - w_k * p_prev
        norm_prev, norm = norm, float(np.sum(ws * p * p))
        if norm <= 0.0:
            raise PositivityError(
                f"lost positivity at index {k} (norm = {norm:.3e}); "
                f"coefficients up to index {k - 1} are reliable", k - 1)
        alpha[k] = float(np.sum(ws * xs * p * p)) / norm
        omega[k - 1] = norm / norm_prev
    return alpha, omega


def extract_from_measure(m, n_max, tol=1e-10):
    """Jacobi-Szego parameters (alpha_0..alpha_{n_max}, omega_1..omega_{n_max})
    of a spectral measure, via the Stieltjes procedure on a sin-substituted
    Gauss discretization (atoms join as exact point masses).

    The discretization doubles until the coefficients settle to tol;
    ConvergenceError is raised otherwise, PositivityError if orthogonality
    collapses (quadrature exhaustion at large n_max).
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    lo, hi = m.support
    prev = None
    n = 2048
    while n <= 32768:
        if hi > lo:
            x_ac, jac, dlo, dhi = _sin_nodes(lo, hi, n)
            if m.density_edges is not None:
                w_ac = m.density_edges(x_ac, dlo, dhi) * jac
            else:
                w_ac = m.density(x_ac) * jac
        else:
            x_ac = np.zeros(0)
            w_ac = np.zeros(0)
        xs = np.concatenate([x_ac, [a for a, _ in m.atoms]])
        ws = np.concatenate([w_ac, [w for _, w in m.atoms]])
        alpha, omega = _stieltjes_discretized(xs, ws, n_max)
        if prev is not None:
            d = max(np.max(np.abs(alpha - prev[0])), np.max(np.abs(omega - prev[1]))
                    if n_max else 0.0)
            if d <= tol:
                return JacobiSzego(alpha, omega)
        prev = (alpha, omega)
        n *= 2
    raise ConvergenceError(
        f"recurrence coefficients did not settle to {tol} by 32768 nodes; "
        f"n_max = {n_max} may exceed double-precision reach for this measure")


def monicize(polys):
    """Divide each polynomial by its leading coefficient.

    Returns (monic list, array of the removed leading scales).
    """
    monic = []
    scales = []
    for p in polys:
        s = p.leading
        if s == 0.0:
            raise ValueError("cannot monicize the zero polynomial")
        scales.append(s)
        monic.append(p * (1.0 / s))
    return monic, np.asarray(scales)
