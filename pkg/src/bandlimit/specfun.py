"""Closed-form band-limited functions with stable evaluation everywhere.

Each function here is entire of stated exponential type; the closed forms
have removable singularities (at the origin, or at half-odd integers for the
cosine-over-quadratic family) that are filled by exact-rational Taylor
branches or by an equivalent singularity-free rewriting.  Switch radii are
chosen so the direct formula's cancellation error stays below 1e-12 where
the series takes over; the test suite checks branch agreement on an annulus
around every switch radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .quad import TrigTail

_PI = math.pi
_SQRT2 = math.sqrt(2.0)


# ---------------------------------------------------------------------------
# domain records
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BandFunction:
    """Real-axis evaluation rule for an entire function of exponential type.

    ``eval`` accepts floats or numpy arrays.  ``trig_tail`` (optional) is the
    far-field trigonometric-rational form used for rigorous tail integrals.
    """

    eval: Callable
    type_bound: float
    parity: str = "none"  # even | odd | none
    label: str = ""
    trig_tail: Optional[TrigTail] = None

    def __call__(self, x):
        return self.eval(x)


@dataclass(frozen=True)
class FourierProfile:
    """Function supported on I = [-1/2, 1/2]: evaluation rule plus a tag."""

    eval: Callable
    tag: str  # polynomial-times-cutoff | sine-mode | tabulated | rational
    coeffs: Optional[tuple] = None  # polynomial coefficients when applicable

    def __call__(self, t):
        return self.eval(t)


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise polynomial in |xi| with compact support.

    ``pieces`` maps consecutive [breakpoints[i], breakpoints[i+1]] intervals
    to coefficient tuples (ascending powers of |xi|).
    """

    breakpoints: tuple
    pieces: tuple

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        a = np.abs(xi)
        out = np.zeros_like(a)
        for lo, hi, coeffs in zip(self.breakpoints[:-1], self.breakpoints[1:], self.pieces):
            mask = (a >= lo) & (a <= hi)
            if np.any(mask):
                out = np.where(mask, np.polynomial.polynomial.polyval(a, coeffs), out)
        return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# exact-rational series machinery (module-load time, small orders)
# ---------------------------------------------------------------------------


def _sin_series(order: int, scale: int = 1) -> list[Fraction]:
    """Coefficients of sin(scale*u) in powers of u, up to u**order."""
    c = [Fraction(0)] * (order + 1)
    for k in range(0, (order - 1) // 2 + 1):
        n = 2 * k + 1
        c[n] = Fraction((-1) ** k * scale ** n, math.factorial(n))
    return c

def _cos_series(order: int, scale: int = 1) -> list[Fraction]:
    c = [Fraction(0)] * (order + 1)
    for k in range(0, order // 2 + 1):
        n = 2 * k
        c[n] = Fraction((-1) ** k * scale ** n, math.factorial(n))
    return c

def _poly_mul(p: Sequence[Fraction], q: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, a in enumerate(p):
        if a == 0 or i > order:
            continue
        for j, b in enumerate(q):
            if i + j > order:
                break
            if b:
                out[i + j] += a * b
    return out

def _poly_add(p, q, order):
    out = [Fraction(0)] * (order + 1)
    for i in range(order + 1):
        if i < len(p):
            out[i] += p[i]
        if i < len(q):
            out[i] += q[i]
    return out


def _series_coeffs_h0(order: int = 40) -> np.ndarray:
    """Even-power coefficients of h0 around 0: h0 = sum c_k u^(2k), u = pi x."""
    sin_u = _sin_series(order + 5)
    cos_u = _cos_series(order + 5)
    a = _poly_mul([Fraction(108), Fraction(0), Fraction(-25)], sin_u, order + 5)
    b = _poly_mul([Fraction(0), Fraction(-108), Fraction(0), Fraction(-11)], cos_u, order + 5)
    num = _poly_add(a, b, order + 5)
    assert all(num[i] == 0 for i in range(5)), "numerator must vanish to order u^5"
    coef = [num[i] / 40 for i in range(5, order + 5, 2)]
    return np.array([float(c) for c in coef])

def _series_coeffs_f0(order: int = 64) -> np.ndarray:
    """Even-power coefficients of M(u)/u^8 with M = P + Q sin 2u + R cos 2u."""
    P = [Fraction(c) for c in (5832, 0, 4176, 0, 3001, 0, 242)]
    Q = [Fraction(c) for c in (0, -11664, 0, -576, 0, -242)]
    R = [Fraction(c) for c in (-5832, 0, 7488, 0, 1463)]
    s2 = _sin_series(order + 8, scale=2)
    c2 = _cos_series(order + 8, scale=2)
    M = _poly_add(_poly_add(P, _poly_mul(Q, s2, order + 8), order + 8),
                  _poly_mul(R, c2, order + 8), order + 8)
    assert all(M[i] == 0 for i in range(8)), "M must vanish to order u^8"
    coef = [M[i] for i in range(8, order + 8, 2)]
    assert coef[0] == 738
    return np.array([float(c) for c in coef])


_H0_SERIES = _series_coeffs_h0()
_F0_SERIES = _series_coeffs_f0()
_H0_SWITCH = 1.0   # |u| below which the series branch evaluates h0
_F0_SWITCH = 2.0
_SINC_SWITCH = 0.5


def _even_series_eval(u2: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    out = np.zeros_like(u2)
    for c in coeffs[::-1]:
        out = out * u2 + c
    return out


# ---------------------------------------------------------------------------
# elementary members
# ---------------------------------------------------------------------------


def sinc_pw(x):
    """sin(pi x)/(pi x), the normalized cardinal sine (value 1 at 0)."""
    x = np.asarray(x, dtype=float)
    u = _PI * x
    small = np.abs(u) < _SINC_SWITCH
    u_safe = np.where(small, 1.0, u)
    direct = np.sin(u_safe) / u_safe
    u2 = u * u
    series = 1.0 + u2 * (-1.0 / 6 + u2 * (1.0 / 120 + u2 * (-1.0 / 5040
             + u2 * (1.0 / 362880 + u2 * (-1.0 / 39916800 + u2 / 6227020800.0)))))
    out = np.where(small, series, direct)
    return out if out.shape else float(out)


def sinc_pw_prime(x):
    """Derivative of sinc_pw: pi (u cos u - sin u)/u^2 with u = pi x."""
    x = np.asarray(x, dtype=float)
    u = _PI * x
    small = np.abs(u) < _SINC_SWITCH
    u_safe = np.where(small, 1.0, u)
    direct = _PI * (u_safe * np.cos(u_safe) - np.sin(u_safe)) / (u_safe * u_safe)
    u2 = u * u
    series = _PI * u * (-1.0 / 3 + u2 * (1.0 / 30 + u2 * (-1.0 / 840
             + u2 * (1.0 / 45360 + u2 * (-1.0 / 3991680 + u2 / 518918400.0)))))
    out = np.where(small, series, direct)
    return out if out.shape else float(out)


def fejer(x):
    """Fejer kernel (sin(pi x)/(pi x))^2: nonnegative, integral 1, type 2 pi."""
    s = sinc_pw(x)
    return s * s


def h0_hat(xi):
    """(1/4 - xi^2)(1 - 9 xi^2/5) on [-1/2, 1/2], zero outside."""
    xi = np.asarray(xi, dtype=float)
    inside = np.abs(xi) <= 0.5
    v = (0.25 - xi * xi) * (1.0 - 1.8 * xi * xi)
    out = np.where(inside, v, 0.0)
    return out if out.shape else float(out)


def h0(x):
    """Inverse transform of h0_hat: degree-2 polynomial construction.

    ((108 - 25 u^2) sin u - u (11 u^2 + 108) cos u) / (40 u^5), u = pi x,
    with the removable fifth-order singularity at 0 filled by series
    (h0(0) = 91/600).
    """
    x = np.asarray(x, dtype=float)
    u = _PI * x
    small = np.abs(u) < _H0_SWITCH
    u_safe = np.where(small, 1.0, u)
    num = ((108.0 - 25.0 * u_safe ** 2) * np.sin(u_safe)
           - u_safe * (11.0 * u_safe ** 2 + 108.0) * np.cos(u_safe))
    direct = num / (40.0 * u_safe ** 5)
    series = _even_series_eval(u * u, _H0_SERIES)
    out = np.where(small, series, direct)
    return out if out.shape else float(out)


def f0(x):
    """Cumulative profile built from h0: f0(x) = integral_{-inf}^x of -t h0(t)^2.

    Closed form (P(u) + Q(u) sin 2u + R(u) cos 2u)/(12800 pi^2 u^8), u = pi x,
    with P = 242u^6 + 3001u^4 + 4176u^2 + 5832, Q = -242u^5 - 576u^3 - 11664u,
    R = 1463u^4 + 7488u^2 - 5832.  Even, nonnegative, f0(0) = 369/(6400 pi^2).
    """
    x = np.asarray(x, dtype=float)
    u = _PI * x
    small = np.abs(u) < _F0_SWITCH
    u_safe = np.where(small, 1.0, u)
    u2s = u_safe * u_safe
    P = 5832.0 + u2s * (4176.0 + u2s * (3001.0 + u2s * 242.0))
    Q = u_safe * (-11664.0 + u2s * (-576.0 + u2s * (-242.0)))
    R = -5832.0 + u2s * (7488.0 + u2s * 1463.0)
    direct = (P + Q * np.sin(2 * u_safe) + R * np.cos(2 * u_safe)) / (12800.0 * _PI ** 2 * u_safe ** 8)
    series = _even_series_eval(u * u, _F0_SERIES) / (12800.0 * _PI ** 2)
    out = np.where(small, series, direct)
    return out if out.shape else float(out)


F0_PEAK_EXACT = Fraction(369, 6400)  # f0(0) * pi^2


def f_half(x):
    """Lid over the Fejer kernel: sinc^2 + (sinc')^2 / pi^2; value 1 at 0."""
    g = sinc_pw(x)
    gp = sinc_pw_prime(x)
    return g * g + gp * gp / _PI ** 2


def f_half_hat(xi):
    """Transform of f_half: (2/3)(1 - |xi|)^2 (|xi| + 2) on [-1, 1], else 0."""
    xi = np.asarray(xi, dtype=float)
    a = np.abs(xi)
    v = (2.0 / 3.0) * (1.0 - a) ** 2 * (a + 2.0)
    out = np.where(a <= 1.0, v, 0.0)
    return out if out.shape else float(out)


F_HALF_HAT_PROFILE = PiecewiseProfile(
    breakpoints=(0.0, 1.0),
    pieces=(((4.0 / 3.0), -2.0, 0.0, (2.0 / 3.0)),),  # (2/3)(1-a)^2(a+2) expanded
)


def hk(k: int, x):
    """Orthonormal family member 4 sqrt(2) cos(pi x) / (pi (k^2 - 4 x^2)), k odd.

    Evaluated through the equivalent pole-free form
    sqrt(2) (-1)^((k-1)/2) sinc_pw(|x| - k/2) / (k + |x| - k/2),
    an identity valid for all real x, so the removable singularities at
    +/- k/2 need no separate branch.
    """
    if k < 1 or k % 2 == 0:
        raise ValueError("k must be an odd positive integer")
    x = np.asarray(x, dtype=float)
    delta = np.abs(x) - 0.5 * k
    sign = 1.0 if (k - 1) // 2 % 2 == 0 else -1.0
    out = _SQRT2 * sign * sinc_pw(delta) / (k + delta)
    return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# Bessel-type members: g_alpha(x) = J_alpha(pi x) / (pi x)^alpha
# ---------------------------------------------------------------------------

_BESSEL_Z_SWITCH = 12.0


def _bessel_g_series(alpha: float, z: np.ndarray) -> np.ndarray:
    """Power series of J_alpha(z)/z^alpha (entire in z^2), |z| <= switch."""
    q = 0.25 * z * z
    term = np.full_like(q, 1.0 / (2.0 ** alpha * math.gamma(alpha + 1.0)))
    total = term.copy()
    for nu in range(1, 60):
        term = term * (-q) / (nu * (nu + alpha))
        total += term
        if np.all(np.abs(term) <= 1e-18 * np.maximum(np.abs(total), 1e-300)):
            break
    return total


def _bessel_pq(alpha: float, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Hankel asymptotic sums P, Q for J_alpha(z), z >= switch radius.

    Terms are added while they decrease; the first omitted term bounds the
    truncation error (classical asymptotic-series property).
    """
    mu = 4.0 * alpha * alpha
    P = np.ones_like(z)
    Q = np.zeros_like(z)
    term = np.ones_like(z)
    for j in range(1, 40):
        prev = term
        term = term * (mu - (2 * j - 1) ** 2) / (8.0 * j * z)
        if np.all(np.abs(term) >= np.abs(prev)) and j > 2:
            break
        if j % 2 == 1:
            Q += term * (-1.0) ** ((j - 1) // 2)
        else:
            P += term * (-1.0) ** (j // 2)
        if np.all(np.abs(term) <= 1e-18):
            break
    return P, Q


def _bessel_g_asym(alpha: float, z: np.ndarray) -> np.ndarray:
    P, Q = _bessel_pq(alpha, z)
    omega = z - 0.5 * alpha * _PI - 0.25 * _PI
    J = np.sqrt(2.0 / (_PI * z)) * (P * np.cos(omega) - Q * np.sin(omega))
    return J / z ** alpha


def bessel_g(alpha: float, x):
    """g_alpha(x) = J_alpha(pi x)/(pi x)^alpha, entire and even; g_alpha(0) =
    1/(2^alpha Gamma(alpha + 1)).

    Power series for |pi x| <= 12, Hankel large-argument asymptotics beyond;
    the crossover is validated by branch agreement in the test suite.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    x = np.asarray(x, dtype=float)
    z = np.abs(_PI * x)
    out = np.empty_like(z)
    small = z <= _BESSEL_Z_SWITCH
    if np.any(small):
        out[small] = _bessel_g_series(alpha, z[small])
    if np.any(~small):
        out[~small] = _bessel_g_asym(alpha, z[~small])
    return out if out.shape else float(out)


def bessel_g_prime(alpha: float, x):
    """Analytic derivative of g_alpha: g_alpha'(x) = -pi^2 x g_{alpha+1}(x)."""
    x = np.asarray(x, dtype=float)
    out = -_PI ** 2 * x * bessel_g(alpha + 1.0, x)
    return out if out.shape else float(out)


# ---------------------------------------------------------------------------
# far-field trigonometric-rational forms
# ---------------------------------------------------------------------------


def sinc_tail() -> TrigTail:
    t = TrigTail(valid_from=1.0)
    t.add(1, 1, s=1.0 / _PI)
    return t


def sinc_prime_tail() -> TrigTail:
    # sinc' = cos(pi x)/x - sin(pi x)/(pi x^2)
    t = TrigTail(valid_from=1.0)
    t.add(1, 1, c=1.0)
    t.add(1, 2, s=-1.0 / _PI)
    return t


def h0_tail() -> TrigTail:
    """Exact far-field form of h0 (no remainder)."""
    t = TrigTail(valid_from=0.5)
    t.add(1, 3, s=-25.0 / (40.0 * _PI ** 3))
    t.add(1, 5, s=108.0 / (40.0 * _PI ** 5))
    t.add(1, 2, c=-11.0 / (40.0 * _PI ** 2))
    t.add(1, 4, c=-108.0 / (40.0 * _PI ** 4))
    return t


def f0_tail() -> TrigTail:
    """Exact far-field form of f0 (pure, sin 2u and cos 2u components).

    A term c u^j in the numerator contributes c x^(-n)/(12800 pi^(n+2))
    with n = 8 - j, since u = pi x and the denominator is 12800 pi^2 u^8.
    """
    t = TrigTail(valid_from=1.0)
    for n, coef in ((2, 242.0), (4, 3001.0), (6, 4176.0), (8, 5832.0)):
        t.add(0, n, c=coef / (12800.0 * _PI ** (n + 2)))
    for n, coef in ((3, -242.0), (5, -576.0), (7, -11664.0)):
        t.add(2, n, s=coef / (12800.0 * _PI ** (n + 2)))
    for n, coef in ((4, 1463.0), (6, 7488.0), (8, -5832.0)):
        t.add(2, n, c=coef / (12800.0 * _PI ** (n + 2)))
    return t


def hk_tail(k: int, valid_from: Optional[float] = None, tol: float = 1e-16) -> TrigTail:
    """Laurent far-field form of hk with a rigorous truncation remainder.

    4 sqrt(2) cos(pi x)/(pi (k^2 - 4x^2)) =
    -(sqrt(2)/pi) cos(pi x) sum_{n>=0} (k/2)^(2n) x^(-2n-2) for |x| > k/2.
    """
    X = max(float(k), 1.0) if valid_from is None else valid_from
    if X <= 0.5 * k:
        raise ValueError("tail form requires valid_from > k/2")
    q = (0.5 * k / X) ** 2
    t = TrigTail(valid_from=X)
    c0 = -_SQRT2 / _PI
    n = 0
    coef = c0
    while True:
        t.add(1, 2 * n + 2, c=coef)
        n += 1
        coef = c0 * (0.5 * k) ** (2 * n)
        if (0.5 * k / X) ** (2 * n) / (1.0 - q) * abs(c0) / X ** 2 < tol or n > 400:
            break
    t.rem_coef = abs(c0) * (0.5 * k) ** (2 * n) / (1.0 - q)
    t.rem_power = 2 * n + 2
    return t


# ---------------------------------------------------------------------------
# BandFunction factories
# ---------------------------------------------------------------------------


def sinc_band() -> BandFunction:
    return BandFunction(eval=sinc_pw, type_bound=_PI, parity="even",
                        label="sinc", trig_tail=sinc_tail())


def fejer_band() -> BandFunction:
    t = sinc_tail()
    return BandFunction(eval=fejer, type_bound=2 * _PI, parity="even",
                        label="fejer", trig_tail=t * t)


def h0_band() -> BandFunction:
    return BandFunction(eval=h0, type_bound=_PI, parity="even",
                        label="h0", trig_tail=h0_tail())


def f0_band() -> BandFunction:
    return BandFunction(eval=f0, type_bound=2 * _PI, parity="even",
                        label="f0", trig_tail=f0_tail())


def f_half_band() -> BandFunction:
    ts, tp = sinc_tail(), sinc_prime_tail()
    tail = ts * ts + (tp * tp).scaled(1.0 / _PI ** 2)
    return BandFunction(eval=f_half, type_bound=2 * _PI, parity="even",
                        label="f_half", trig_tail=tail)


def hk_band(k: int) -> BandFunction:
    return BandFunction(eval=lambda x, k=k: hk(k, x), type_bound=_PI,
                        parity="even", label=f"h{k}", trig_tail=hk_tail(k))


def bessel_band(alpha: float) -> BandFunction:
    return BandFunction(eval=lambda x, a=alpha: bessel_g(a, x), type_bound=_PI,
                        parity="even", label=f"g_alpha[{alpha:g}]")
