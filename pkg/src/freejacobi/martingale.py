"""Drift operator on polynomials and the closed-form flow pair (Z_t, K_t).

The drift sends a polynomial p to the finite-variation part of p applied to
the stationary process; a family q_n is "martingale" precisely when
drift(q_n) + n q_n = 0, since the e^{nt} prefactor contributes +n q_n.  The
residual of that identity is evaluated in exact arithmetic over
Q(sqrt(lam(2-lam))): composed coefficients reach ~4^n, so at n = 15 float64
cancellation noise sits near 1e-2 -- far above any 1e-9-scale verdict.

The flow functions implement the closed forms for Z_t (checked against its
autonomous ODE) and for the normalizer K_t in two variants: "displayed",
whose third factor is sqrt(n3/d3) with n3 = 2 - c1 - 2c3 - re^t and
d3 = 2 - c1 + 2c3 - re^t, and "ode", the reciprocal-factor version
sqrt(d3/n3).  Only the latter satisfies the transport equation
K' + K [lam th G(1/Z) + th (1-lam) Z] = 0 for theta != 1/2 or lam != 1;
both are exposed so the discrepancy is checkable, and the ODE residual
accepts a variant argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact import (Quad, chebyshev_u_exact, mu_half_moments, qp_add,
                    qp_compose_linear, qp_max_abs, qp_scale)
from .measures import (JacobiParams, cauchy_closed_form_mu, moments,
                       mu_lambda_theta)
from .polys import Poly, _as_poly

__all__ = [
    "DriftModel", "drift", "martingale_residual",
    "FlowConstants", "flow_Z", "flow_Z_ode_residual",
    "flow_K", "flow_K_ode_residual", "cauchy_mu_half",
]


@dataclass(frozen=True, eq=False)
class DriftModel:
    """Stationary drift data: parameters plus moments m_k of the stationary
    law.  The drift of x^n consumes m_0 .. m_n, so `m` bounds the degree of
    polynomials the model can transport."""

    params: JacobiParams
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=float)
        object.__setattr__(self, "m", m)
        if m.size < 2:
            raise ValueError("need at least m_0 and m_1")
        if abs(m[0] - 1.0) > 1e-9:
            raise ValueError(f"m_0 = {m[0]}, expected 1")
        if abs(m[1] - self.params.theta) > 1e-7:
            raise ValueError(
                f"m_1 = {m[1]}, expected theta = {self.params.theta}")

    @classmethod
    def from_params(cls, params, n_max=32):
        return cls(params, moments(mu_lambda_theta(params), n_max))


def drift(dm, p):
    """Finite-variation part of p under the stationary dynamics.

    Acts linearly; on the monomial x^n (n >= 1),

        n th (1-lam) x^{n-1} - n x^n
          + lam th sum_{l=1}^{n} [m_{n-l} + 2(l-1)(m_{n-l} - m_{n-l+1})] x^{l-1}

    and constants are annihilated.  Degree never increases.
    """
    p = _as_poly(p)
    deg = p.degree
    if deg < 1:
        return Poly([0.0])
    m = dm.m
    if deg >= m.size:
        raise ValueError(f"degree {deg} needs moments up to m_{deg}, "
                         f"model holds {m.size - 1}")
    lam, th = dm.params.lam, dm.params.theta
    out = np.zeros(deg + 1)
    for n in range(1, deg + 1):
        c = p.coeffs[n]
        if c == 0.0:
            continue
        out[n - 1] += c * n * th * (1.0 - lam)
        out[n] -= c * n
        for l in range(1, n + 1):
            term = m[n - l] + 2.0 * (l - 1) * (m[n - l] - m[n - l + 1])
            out[l - 1] += c * lam * th * term
    return Poly(out)


def _drift_exact(coeffs, lam, mom):
    # Same monomial action as drift(), over Q(sqrt(m)) at theta = 1/2.
    half = Fraction(1, 2)
    deg = len(coeffs) - 1
    out = [Quad(0) for _ in range(deg + 1)]
    for n in range(1, deg + 1):
        c = coeffs[n]
        if c.is_zero():
            continue
        out[n - 1] = out[n - 1] + c * (n * half * (1 - lam))
        out[n] = out[n] - c * n
        for l in range(1, n + 1):
            term = mom[n - l] + 2 * (l - 1) * (mom[n - l] - mom[n - l + 1])
            out[l - 1] = out[l - 1] + c * (lam * half * term)
    return out


def _family_u_combination(lam, q, n, family, a_variant):
    """Coefficients (monomial basis, Quad entries) of the degree-n member of
    the chosen Chebyshev-U combination."""
    u_n = chebyshev_u_exact(n)
    u_n1 = chebyshev_u_exact(n - 1)
    u_n2 = chebyshev_u_exact(n - 2)
    if family == "P_lambda":
        if a_variant == "sqrt":
            a = Quad(0, (1 - lam) / q, q)   # (1-lam)/sqrt(q)
        elif a_variant == "rational":
            a = Quad((1 - lam) / q)
        else:
            raise ValueError(f"unknown a_variant {a_variant!r}")
        combo = qp_add(qp_add(u_n, qp_scale(u_n1, -2 * a)),
                       qp_scale(u_n2, -1))
    elif family == "Q_lambda":
        combo = qp_add(u_n, qp_scale(u_n2, -lam / (2 - lam)))
    else:
        raise ValueError(f"unknown family {family!r}")
    return [c if isinstance(c, Quad) else Quad(c) for c in combo]


def martingale_residual(lam, n, family="P_lambda", a_variant="sqrt"):
    """Max-magnitude coefficient of drift(q_n) + n q_n at theta = 1/2, where
    q_n(x) = F_n((2x-1)/sqrt(lam(2-lam))) and F_n is the chosen family.

    family="P_lambda" is U_n - 2 a U_{n-1} - U_{n-2} with a = (1-lam)/sqrt(q)
    (a_variant="sqrt") or the control value a = (1-lam)/q
    (a_variant="rational"), q = lam(2-lam).  family="Q_lambda" is
    U_n - lam/(2-lam) U_{n-2}, the family orthogonal for the stationary law,
    whose residual vanishes identically.

    The computation is exact: `lam` enters at its binary-float rational
    value, moments come from the closed Catalan-tail form, and the result is
    the float of an element of Q(sqrt(q)) -- a reported 0.0 is an exact zero.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    lamF = Fraction(lam)
    if not 0 < lamF <= 1:
        raise ValueError("lam must lie in (0, 1]")
    q = lamF * (2 - lamF)
    combo = _family_u_combination(lamF, q, n, family, a_variant)
    # x -> (2x-1)/sqrt(q): l0 = -sqrt(q)/q, l1 = 2 sqrt(q)/q.
    l0 = Quad(0, Fraction(-1) / q, q)
    l1 = Quad(0, Fraction(2) / q, q)
    q_n = qp_compose_linear(combo, l0, l1)
    mom = mu_half_moments(lamF, n)
    resid = qp_add(_drift_exact(q_n, lamF, mom), qp_scale(q_n, n))
    return qp_max_abs(resid)


@dataclass(frozen=True)
class FlowConstants:
    """Constants of the (Z, K) flow for one (lam, theta, r) choice:
    c1 = 2 th (1 + lam - 2 lam th), c2 = th^2 (1-lam)^2,
    c3 = 1 - th (lam+1) = sqrt(c2 + 1 - c1), horizon t0 = ln(4 lam th^2 / r),
    v0 = (r + c1)/2."""

    c1: float
    c2: float
    c3: float
    r: float
    v0: float
    t0: float

    @classmethod
    def from_params(cls, p, r=None):
        lam, th = p.lam, p.theta
        c1 = 2.0 * th * (1.0 + lam - 2.0 * lam * th)
        c2 = (th * (1.0 - lam)) ** 2
        c3 = 1.0 - th * (lam + 1.0)
        r_max = 4.0 * lam * th * th
        if r is None:
            r = 0.5 * r_max
        if not 0.0 < r <= r_max:
            raise ValueError(f"r = {r} outside (0, {r_max}]")
        return cls(c1, c2, c3, float(r), 0.5 * (r + c1),
                   math.log(r_max / r))


def flow_Z(fc, t):
    """Z_t = 4 r e^t / ((r e^t + c1)^2 - 4 c2), increasing on [0, t0] with
    Z_{t0} = 1.  Rejects t outside [0, t0]."""
    if t < -1e-12 or t > fc.t0 + 1e-12:
        raise ValueError(f"t = {t} outside [0, {fc.t0}]")
    e = fc.r * math.exp(t)
    return 4.0 * e / ((e + fc.c1) ** 2 - 4.0 * fc.c2)


def flow_Z_ode_residual(fc, t, step=1e-6):
    """|Z' - Z sqrt(1 - c1 Z + c2 Z^2)| with a central finite difference for
    Z' (step 1e-6); the closed form keeps this below 1e-7 at interior t."""
    zp = (flow_Z(fc, t + step) - flow_Z(fc, t - step)) / (2.0 * step)
    z = flow_Z(fc, t)
    rad = 1.0 - fc.c1 * z + fc.c2 * z * z
    return abs(zp - z * math.sqrt(max(rad, 0.0)))


def flow_K(fc, lam, theta, t, C=1.0, variant="displayed"):
    """Closed-form normalizer K_t for 0 <= t < t0.

    General branch: C sqrt(1-Z) sqrt((e + c1 + 2 sqrt(c2))/(e + c1 - 2
    sqrt(c2))) times sqrt(n3/d3) ("displayed") or sqrt(d3/n3) ("ode"),
    with e = r e^t, n3 = 2 - c1 - 2 c3 - e, d3 = 2 - c1 + 2 c3 - e.  At
    theta = 1/2 these collapse to C (lam - e)/(lam + e) and
    C (2 - lam - e)/(lam + e).  lam = 1 gets the specialized form
    sqrt((e + 4 th (1-th))^2 - 4 e)/(e + 4 th (1-th)) times
    sqrt((4 th^2 - e)/(4 (1-th)^2 - e)) or its reciprocal; both branches
    agree with the general one in the c2 -> 0 limit.
    """
    if variant not in ("displayed", "ode"):
        raise ValueError(f"unknown variant {variant!r}")
    if t < -1e-12 or t >= fc.t0:
        raise ValueError(f"t = {t} outside [0, {fc.t0})")
    e = fc.r * math.exp(t)
    if lam == 1.0:
        den = e + 4.0 * theta * (1.0 - theta)
        base = math.sqrt(max(den * den - 4.0 * e, 0.0)) / den
        ratio = (4.0 * theta * theta - e) / (4.0 * (1.0 - theta) ** 2 - e)
        if variant == "ode":
            ratio = 1.0 / ratio
        return C * base * math.sqrt(ratio)
    rc2 = math.sqrt(fc.c2)
    f1 = math.sqrt(max(1.0 - flow_Z(fc, t), 0.0))
    f2 = math.sqrt((e + fc.c1 + 2.0 * rc2) / (e + fc.c1 - 2.0 * rc2))
    n3 = 2.0 - fc.c1 - 2.0 * fc.c3 - e
    d3 = 2.0 - fc.c1 + 2.0 * fc.c3 - e
    ratio = n3 / d3 if variant == "displayed" else d3 / n3
    return C * f1 * f2 * math.sqrt(ratio)


def flow_K_ode_residual(fc, lam, theta, t, variant="displayed", step=1e-6):
    """Relative residual |K' + K (lam th G(1/Z) + th (1-lam) Z)| / |K| with a
    central finite difference for K'.  G is the closed-form Cauchy transform
    of the stationary law, evaluated at 1/Z_t > 1."""
    k_hi = flow_K(fc, lam, theta, t + step, variant=variant)
    k_lo = flow_K(fc, lam, theta, t - step, variant=variant)
    kp = (k_hi - k_lo) / (2.0 * step)
    k = flow_K(fc, lam, theta, t, variant=variant)
    z = flow_Z(fc, t)
    g = cauchy_closed_form_mu(JacobiParams(lam, theta), 1.0 / z).real
    return abs(kp + k * (lam * theta * g + theta * (1.0 - lam) * z)) / abs(k)


def cauchy_mu_half(lam, z):
    """Cauchy transform of the stationary law at theta = 1/2:

        G(z) = ((1-lam)(2z-1) - sqrt(4z^2 - 4z + (1-lam)^2)) / (2 lam z (1-z))

    for z outside [0, 1].  The radicand factors through z_pm = (1 +-
    sqrt(lam(2-lam)))/2 and the root is taken factor-by-factor, which places
    the branch cut exactly on [z_-, z_+] and yields G(z) ~ 1/z at infinity.
    """
    if not 0.0 < lam <= 1.0:
        raise ValueError("lam must lie in (0, 1]")
    z = complex(z)
    if z.imag == 0.0 and 0.0 <= z.real <= 1.0:
        raise ValueError(f"z = {z} lies in [0, 1]")
    rq = math.sqrt(lam * (2.0 - lam))
    w = 2.0 * np.sqrt(z - 0.5 * (1.0 + rq)) * np.sqrt(z - 0.5 * (1.0 - rq))
    num = (1.0 - lam) * (2.0 * z - 1.0) - w
    return complex(num / (2.0 * lam * z * (1.0 - z)))
