"""Dense real polynomials, Chebyshev families, and generating-function tools.

Monomial-basis coefficient arrays are the common currency of the package: all
polynomial families used here have degree <= ~40, where dense float64
coefficients are accurate enough for the verification tolerances and
interoperate directly with numpy.
"""

from __future__ import annotations

import operator

import numpy as np
from numpy.polynomial import polynomial as npol

from .errors import ConvergenceError

__all__ = [
    "Poly",
    "chebyshev_T",
    "chebyshev_U",
    "chebyshev_U_ext",
    "eval_three_term",
    "taylor_coeffs_in_u",
]


class Poly:
    """Real polynomial with dense monomial coefficients.

    ``coeffs[k]`` multiplies ``x**k``.  Trailing zero coefficients are
    trimmed so the stored leading coefficient is nonzero unless the
    polynomial is identically zero (stored as the single coefficient 0.0).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        c = np.atleast_1d(np.asarray(coeffs, dtype=float))
        if c.ndim != 1:
            raise ValueError("coefficients must form a one-dimensional sequence")
        nz = np.nonzero(c)[0]
        self.coeffs = c[: nz[-1] + 1].copy() if nz.size else np.zeros(1)

    # -- basic queries ---------------------------------------------------
    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    @property
    def degree(self):
        """Polynomial degree; -1 for the zero polynomial."""
        return -1 if self.is_zero() else self.coeffs.size - 1

    @property
    def leading(self):
        return float(self.coeffs[-1])

    def __call__(self, x):
        return npol.polyval(x, self.coeffs)

    def __repr__(self):
        return f"Poly({self.coeffs.tolist()})"

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        return Poly(npol.polyadd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        return Poly(npol.polysub(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return _as_poly(other).__sub__(self)

    def __neg__(self):
        return Poly(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return Poly(npol.polymul(self.coeffs, other.coeffs))
        return Poly(self.coeffs * float(other))

    __rmul__ = __mul__

    def deriv(self):
        return Poly(npol.polyder(self.coeffs))

    def compose(self, inner):
        """Horner composition self(inner(x))."""
        inner = _as_poly(inner)
        out = Poly([self.coeffs[-1]])
        for c in self.coeffs[-2::-1]:
            out = out * inner + Poly([c])
        return out

    def allclose(self, other, tol=1e-9):
        """Coefficientwise comparison, absolute tolerance scaled by the
        largest coefficient magnitude of either operand."""
        other = _as_poly(other)
        n = max(self.coeffs.size, other.coeffs.size)
        a = np.zeros(n)
        b = np.zeros(n)
        a[: self.coeffs.size] = self.coeffs
        b[: other.coeffs.size] = other.coeffs
        scale = max(1.0, np.abs(a).max(), np.abs(b).max())
        return bool(np.all(np.abs(a - b) <= tol * scale))


def _as_poly(p):
    if isinstance(p, Poly):
        return p
    if np.isscalar(p):
        return Poly([float(p)])
    return Poly(p)


def chebyshev_U(n):
    """Second-kind Chebyshev polynomial U_n via 2x*U_n = U_{n+1} + U_{n-1}."""
    n = operator.index(n)
    if n < 0:
        raise ValueError("n must be nonnegative; see chebyshev_U_ext for the "
                         "U_{-1} = U_{-2} = 0 convention")
    prev = np.array([1.0])           # U_0
    if n == 0:
        return Poly(prev)
    cur = np.array([0.0, 2.0])       # U_1
    for _ in range(n - 1):
        nxt = np.zeros(cur.size + 1)
        nxt[1:] = 2.0 * cur
        nxt[: prev.size] -= prev
        prev, cur = cur, nxt
    return Poly(cur)


def chebyshev_U_ext(n):
    """chebyshev_U extended by the convention U_{-1} = U_{-2} = 0."""
    n = operator.index(n)
    if n in (-1, -2):
        return Poly([0.0])
    return chebyshev_U(n)


def chebyshev_T(n):
    """First-kind Chebyshev polynomial T_n (satisfies 2T_n = U_n - U_{n-2})."""
    n = operator.index(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    prev = np.array([1.0])           # T_0
    if n == 0:
        return Poly(prev)
    cur = np.array([0.0, 1.0])       # T_1
    for _ in range(n - 1):
        nxt = np.zeros(cur.size + 1)
        nxt[1:] = 2.0 * cur
        nxt[: prev.size] -= prev
        prev, cur = cur, nxt
    return Poly(cur)


def eval_three_term(alpha, omega, n, x):
    """Value at x of the monic degree-n orthogonal polynomial defined by

        p_{k+1}(x) = (x - alpha[k]) p_k(x) - omega[k-1] p_{k-1}(x)

    with p_{-1} = 0, p_0 = 1.  ``omega`` is indexed from 1 in the usual
    recurrence convention, i.e. omega[j] is the weight omega_{j+1}; the first
    entry is consumed when stepping from p_1 to p_2.  ``x`` may be a scalar
    or an ndarray.
    """
    n = operator.index(n)
    if n < 0:
        raise ValueError("n must be nonnegative")
    alpha = np.asarray(alpha, dtype=float)
    omega = np.asarray(omega, dtype=float)
    if n >= 1 and alpha.size < n:
        raise ValueError(f"need alpha[0..{n - 1}]")
    if n >= 2:
        if omega.size < n - 1:
            raise ValueError(f"need omega values up to index {n - 1}")
        if np.any(omega[: n - 1] <= 0.0):
            raise ValueError("recurrence weights must be positive")
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(n):
        w = omega[k - 1] if k >= 1 else 0.0
        p_prev, p = p, (x - alpha[k]) * p - w * p_prev
    return p if p.ndim else float(p)


def _contour_coeffs(f, order, radius, n):
    u = radius * np.exp(2j * np.pi * np.arange(n) / n)
    try:
        vals = np.asarray(f(u), dtype=complex)
        if vals.shape != u.shape:
            raise TypeError
    except Exception:
        vals = np.array([f(ui) for ui in u], dtype=complex)
    coeffs = np.fft.fft(vals)[: order + 1] / n
    return coeffs.real / radius ** np.arange(order + 1)


def taylor_coeffs_in_u(f, order, radius=0.5, max_nodes=1 << 16):
    """First order+1 Taylor coefficients of f at u = 0.

    Trapezoidal contour averaging on |u| = radius (exact for trigonometric
    polynomials, spectrally accurate for analytic f), with node doubling
    until successive passes agree to 10*eps/radius**k per coefficient.
    Raises ConvergenceError when the budget is exhausted, e.g. when f has a
    singularity on or inside the contour.
    """
    order = operator.index(order)
    if order < 0:
        raise ValueError("order must be nonnegative")
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    tol = 10.0 * np.finfo(float).eps / radius ** np.arange(order + 1)
    n = 64
    while n < 2 * (order + 1):
        n *= 2
    prev = _contour_coeffs(f, order, radius, n)
    while n < max_nodes:
        n *= 2
        cur = _contour_coeffs(f, order, radius, n)
        if np.all(np.abs(cur - prev) <= tol):
            return cur
        prev = cur
    raise ConvergenceError(
        f"Taylor coefficients did not settle by {max_nodes} contour nodes; "
        "is f analytic on |u| <= radius?")
