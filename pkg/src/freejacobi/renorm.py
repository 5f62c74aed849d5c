"""Multiplicative renormalization: theta kernels, the product-dependence
certification, and the generating-function polynomial families.

For a probability measure mu and an analytic rho with rho(0) = 0,
rho'(0) != 0, the kernel psi(u, x) = (1 - rho(u) x)^{-1} / theta(rho(u))
generates the orthogonal polynomials of mu exactly when

    Theta_rho(u, v) = theta(rho(u), rho(v)) / (theta(rho(u)) theta(rho(v)))

depends on (u, v) only through the product uv.  ``certify_product_dependence``
tests that criterion on a grid of equal-product pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import _integrate_ac, cauchy_transform, xi_shift
from .polys import chebyshev_U_ext

__all__ = [
    "RenormKernel",
    "rho_trig",
    "theta_one",
    "theta_two",
    "theta_ratio",
    "certify_product_dependence",
    "rho_trig_identity_check",
    "u_combination",
    "family_gram",
    "build_Q_lambda",
    "build_P_lambda",
    "build_Q_lambda_theta",
]


def rho_trig(u):
    """rho(u) = 2u/(1+u^2); in trigonometric form maps tan to sin."""
    return 2.0 * u / (1.0 + u * u)


@dataclass(frozen=True, eq=False)
class RenormKernel:
    """A measure together with the reparameterization rho."""

    measure: object
    rho: object = rho_trig

    def __post_init__(self):
        if abs(self.rho(0.0)) > 1e-14:
            raise ValueError("rho(0) must vanish")
        d = (self.rho(1e-6) - self.rho(-1e-6)) / 2e-6
        if abs(d) < 1e-8:
            raise ValueError("rho'(0) must be nonzero")


def theta_one(k, u):
    """theta(u) = int (1 - u x)^{-1} dmu(x), evaluated as (1/u) G(1/u)."""
    u = float(u)
    if u == 0.0:
        return 1.0
    return float(np.real(cauchy_transform(k.measure, 1.0 / u) / u))


def theta_two(k, u, v, step=1e-8):
    """theta(u, v) = int (1 - u x)^{-1} (1 - v x)^{-1} dmu(x).

    Computed through the partial-fraction identity
    theta(u, v) = (u theta(u) - v theta(v)) / (u - v).  On the diagonal the
    identity degenerates to the derivative d/dw [w theta(w)] = d/dw G(1/w),
    taken by a complex step: Im G(1/(w + i step)) / step.  Unlike a real
    central difference this has no subtractive cancellation, so the diagonal
    inherits the full quadrature accuracy of the Cauchy transform.
    """
    u, v = float(u), float(v)
    if abs(u - v) < 1e-9:
        w = 0.5 * (u + v)
        if w == 0.0:
            return 1.0
        g = cauchy_transform(k.measure, 1.0 / complex(w, step))
        return float(g.imag) / step
    return (u * theta_one(k, u) - v * theta_one(k, v)) / (u - v)


def theta_ratio(k, u, v):
    """Theta_rho(u, v) = theta(rho u, rho v) / (theta(rho u) theta(rho v))."""
    ru, rv = k.rho(u), k.rho(v)
    return theta_two(k, ru, rv) / (theta_one(k, ru) * theta_one(k, rv))


def _admissible_u(k):
    """Largest u (with margin) such that 1/rho(u) stays off the measure's
    support and atoms; assumes rho is increasing on [0, 1)."""
    m = k.measure
    pts = [abs(m.support_lo), abs(m.support_hi)]
    pts += [abs(x) for x, _ in m.atoms]
    xmax = max(pts)
    w_max = min(0.95 / xmax if xmax > 0 else 0.95, 0.95)
    lo_u, hi_u = 0.0, 0.999
    if k.rho(hi_u) <= w_max:
        return hi_u
    for _ in range(80):
        mid = 0.5 * (lo_u + hi_u)
        if k.rho(mid) < w_max:
            lo_u = mid
        else:
            hi_u = mid
    return lo_u


def _default_grid(k, n_products=40, n_factorizations=5):
    """Equal-product pairs: products log-spaced in (1e-4, min(0.5, (0.95 u_max)^2)],
    each realized by n_factorizations different (u, v) splits."""
    u_max = 0.95 * _admissible_u(k)
    p_hi = min(0.5, u_max * u_max)
    products = np.geomspace(1e-4, p_hi, n_products)
    grid = []
    for p in products:
        for u in np.geomspace(p / u_max, u_max, n_factorizations):
            grid.append((float(u), float(p / u)))
    return grid


def certify_product_dependence(k, grid=None, tol=1e-10):
    """Check that Theta_rho(u, v) depends only on the product uv.

    Pairs in ``grid`` whose products agree within 1e-14 are grouped; within
    each group the spread max - min of Theta_rho must not exceed tol.
    Returns (verdict, report).
    """
    if grid is None:
        grid = _default_grid(k)
    entries = sorted(((u * v, u, v) for u, v in grid), key=lambda e: e[0])
    groups = []
    for p, u, v in entries:
        if groups and abs(p - groups[-1][0]) <= 1e-14:
            groups[-1][1].append((u, v))
        else:
            groups.append((p, [(u, v)]))

    worst = 0.0
    worst_product = None
    n_multi = 0
    for p, pairs in groups:
        if len(pairs) < 2:
            continue
        n_multi += 1
        vals = [theta_ratio(k, u, v) for u, v in pairs]
        spread = max(vals) - min(vals)
        if spread > worst:
            worst, worst_product = spread, p
    verdict = bool(worst <= tol)
    report = {
        "pairs": len(entries),
        "product_groups": n_multi,
        "max_violation": worst,
        "worst_product": worst_product,
        "tol": tol,
        "verdict": verdict,
    }
    return verdict, report


def rho_trig_identity_check(u, v):
    """|lhs - (1+uv)/(1-uv)| for the addition identity satisfied by
    rho(u) = 2u/(1+u^2); returns the absolute discrepancy (contract < 1e-12
    for |u|, |v| < 1)."""
    ru, rv = rho_trig(u), rho_trig(v)
    lhs = (ru + rv) / (ru * math.sqrt(1.0 - rv * rv) + rv * math.sqrt(1.0 - ru * ru))
    return abs(lhs - (1.0 + u * v) / (1.0 - u * v))


# -- generating-function families --------------------------------------------
#
# Every family here is a fixed two-step combination of second-kind Chebyshevs,
#     F_n = U_n + beta U_{n-1} + gamma U_{n-2},
# i.e. the Taylor coefficients in u of (1 + beta u + gamma u^2)/(1 - 2ux + u^2).

def u_combination(family, lam, theta=None, a_variant="sqrt", b_variant="mean"):
    """Weights (beta, gamma) of the named family's Chebyshev combination.

    family = "Q_lambda":       (0,          -lam/(2-lam))
    family = "P_lambda":       (-2 a(lam),  -1)
    family = "Q_lambda_theta": (-2 b,       1 - 2c)

    with a(lam) per ``xi_shift(lam, a_variant)`` and b, c per
    ``build_Q_lambda_theta`` (b depends on b_variant).
    """
    if family == "Q_lambda":
        if not 0.0 < lam <= 1.0:
            raise ValueError(f"lam = {lam} outside (0, 1]")
        return 0.0, -lam / (2.0 - lam)
    if family == "P_lambda":
        return -2.0 * xi_shift(lam, variant=a_variant), -1.0
    if family == "Q_lambda_theta":
        if b_variant not in ("mean", "twice"):
            raise ValueError(f"unknown b_variant {b_variant!r}")
        if theta is None:
            raise ValueError("Q_lambda_theta requires theta")
        b = 0.5 * math.sqrt(lam / ((1.0 - theta) * (1.0 - lam * theta))) \
            * (2.0 * theta - 1.0)
        if b_variant == "twice":
            b = 2.0 * b
        c = 1.0 / (2.0 * (1.0 - lam * theta))
        return -2.0 * b, 1.0 - 2.0 * c
    raise ValueError(f"unknown family {family!r}")


def _family_table(x, beta, gamma, n_max):
    """Values F_0(x)..F_{n_max}(x) (rows) via the Chebyshev recurrence."""
    u = np.empty((n_max + 3,) + x.shape)
    u[0] = u[1] = 0.0          # U_{-2} and U_{-1}
    u[2] = 1.0
    if n_max >= 1:
        u[3] = 2.0 * x
    for k in range(4, n_max + 3):
        u[k] = 2.0 * x * u[k - 1] - u[k - 2]
    return u[2:] + beta * u[1:-1] + gamma * u[:-2]


def family_gram(measure, beta, gamma, n_max):
    """Gram matrix <F_i, F_j> under ``measure`` of the combination family
    F_n = U_n + beta U_{n-1} + gamma U_{n-2}, for i, j <= n_max.

    The family values come from the (stable) Chebyshev recurrence and the
    inner products from quadrature plus exact atom terms.  Expanding the
    products into monomial coefficients and pairing with raw moments loses
    around six digits at degree ~24 through cancellation; this route keeps
    the off-diagonal of an orthogonal family at ~1e-12.
    """
    iu, ju = np.triu_indices(n_max + 1)

    def pair_values(x):
        fam = _family_table(np.asarray(x, dtype=float), beta, gamma, n_max)
        return fam[iu] * fam[ju]

    vals = np.asarray(_integrate_ac(measure, pair_values), dtype=float)
    for x0, w0 in measure.atoms:
        fam = _family_table(np.asarray([float(x0)]), beta, gamma, n_max)[:, 0]
        vals = vals + w0 * fam[iu] * fam[ju]
    g = np.zeros((n_max + 1, n_max + 1))
    g[iu, ju] = vals
    g[ju, iu] = vals
    return g


def build_Q_lambda(lam, n):
    """Q_n = U_n - (lam/(2-lam)) U_{n-2}; Taylor coefficients in u of
    (1 - (lam/(2-lam)) u^2) / (1 - 2ux + u^2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    beta, gamma = u_combination("Q_lambda", lam)
    return chebyshev_U_ext(n) + gamma * chebyshev_U_ext(n - 2)


def build_P_lambda(lam, n, a_variant="sqrt"):
    """P_n = U_n - 2 a(lam) U_{n-1} - U_{n-2}; Taylor coefficients in u of
    (1 - 2 a(lam) u - u^2) / (1 - 2ux + u^2)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    beta, gamma = u_combination("P_lambda", lam, a_variant=a_variant)
    return (chebyshev_U_ext(n) + beta * chebyshev_U_ext(n - 1)
            + gamma * chebyshev_U_ext(n - 2))


def build_Q_lambda_theta(p, n, b_variant="mean"):
    """Q_n = U_n - 2b U_{n-1} + (1-2c) U_{n-2} with b, c from (lam, theta);
    Taylor coefficients in u of (1 - 2bu + (1-2c)u^2) / (1 - 2ux + u^2).

    b_variant selects the shift coefficient.  "mean" (default) puts b equal
    to the first moment of nu_{lam,theta},

        b = sqrt(lam / ((1-theta)(1-lam theta))) (2 theta - 1) / 2,

    which is forced by orthogonality of Q_1 to constants and makes the whole
    family orthogonal.  "twice" uses twice that value; the resulting
    combination fails orthogonality whenever theta != 1/2 and is kept as a
    negative control.  The variants coincide at theta = 1/2 (b = 0).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    beta, gamma = u_combination("Q_lambda_theta", p.lam, p.theta,
                                b_variant=b_variant)
    return (chebyshev_U_ext(n) + beta * chebyshev_U_ext(n - 1)
            + gamma * chebyshev_U_ext(n - 2))
