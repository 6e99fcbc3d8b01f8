"""Sonin lids: radially decreasing envelopes from oscillatory ODE solutions.

A solution g of y'' + (B/x) y' + C y = 0 with B, C > 0 yields the lid
f = g^2 + g'^2 / C, which touches g^2 at the critical points of g and is
radially decreasing.  The Bessel-type solutions g_alpha give a one-parameter
family of admissible profiles; the figure of merit is the ratio of the
integral of the lid to its value at the origin, minimized over alpha.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import quad
from .specfun import (BandFunction, bessel_g, bessel_g_prime, sinc_band,
                      sinc_pw_prime)

_PI = math.pi


@dataclass(frozen=True)
class SoninLid:
    """Lid data: the generator g, its analytic derivative, ODE coefficients."""

    g: BandFunction
    g_prime: BandFunction
    C: float
    B: float

    def __post_init__(self):
        if self.C <= 0 or self.B <= 0:
            raise ValueError("ODE coefficients must be positive")


def lid_eval(lid: SoninLid, x):
    """g(x)^2 + g'(x)^2 / C."""
    g = np.asarray(lid.g.eval(x), dtype=float)
    gp = np.asarray(lid.g_prime.eval(x), dtype=float)
    out = g * g + gp * gp / lid.C
    return out if out.shape else float(out)


def lid_monotone_check(lid: SoninLid, grid: Sequence[float]) -> float:
    """Max increase of the lid along a sorted positive grid (should be <= 0)."""
    xs = np.asarray(grid, dtype=float)
    if np.any(xs <= 0) or np.any(np.diff(xs) <= 0):
        raise ValueError("grid must be sorted and positive")
    vals = lid_eval(lid, xs)
    return float(np.max(np.diff(vals)))


def fejer_lid() -> SoninLid:
    """Lid over the Fejer kernel: g = sinc, C = pi^2, B = 2."""
    gp = BandFunction(eval=sinc_pw_prime, type_bound=_PI, parity="odd",
                      label="sinc'")
    return SoninLid(g=sinc_band(), g_prime=gp, C=_PI ** 2, B=2.0)


def bessel_lid(alpha: float) -> SoninLid:
    """Lid built on g_alpha; satisfies y'' + ((2a+1)/x) y' + pi^2 y = 0."""
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    g = BandFunction(eval=lambda x, a=alpha: bessel_g(a, x), type_bound=_PI,
                     parity="even", label=f"g_alpha[{alpha:g}]")
    gp = BandFunction(eval=lambda x, a=alpha: bessel_g_prime(a, x),
                      type_bound=_PI, parity="odd", label=f"g_alpha'[{alpha:g}]")
    return SoninLid(g=g, g_prime=gp, C=_PI ** 2, B=2.0 * alpha + 1.0)


# ---------------------------------------------------------------------------
# tail of the lid integral from Hankel asymptotics
# ---------------------------------------------------------------------------


def _hankel_coeffs(nu: float, nterms: int) -> np.ndarray:
    """A_j(nu) = prod_{m<=j} (4 nu^2 - (2m-1)^2) / (j! 8^j), j = 0..nterms."""
    out = np.empty(nterms + 1)
    out[0] = 1.0
    mu = 4.0 * nu * nu
    for j in range(1, nterms + 1):
        out[j] = out[j - 1] * (mu - (2 * j - 1) ** 2) / (8.0 * j)
    return out


def _pq_series(nu: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Coefficient arrays of P, Q in powers of 1/z (index = power)."""
    A = _hankel_coeffs(nu, order)
    P = np.zeros(order + 1)
    Q = np.zeros(order + 1)
    for j in range(0, order + 1, 2):
        P[j] = (-1.0) ** (j // 2) * A[j]
    for j in range(1, order + 1, 2):
        Q[j] = (-1.0) ** ((j - 1) // 2) * A[j]
    return P, Q


def _series_mul(a: np.ndarray, b: np.ndarray, order: int) -> np.ndarray:
    out = np.zeros(order + 1)
    for i, ai in enumerate(a[:order + 1]):
        if ai == 0.0:
            continue
        jmax = order - i
        out[i:i + jmax + 1] += ai * b[:jmax + 1]
    return out


def _osc_halfline(q: float, Z: float, psi: float, max_terms: int = 16
                  ) -> tuple[float, float]:
    """(int_Z^inf z^(-q) cos(2z - psi) dz, error bound) by parts."""
    T = 0.0 + 0.0j
    coef = 1.0 + 0.0j
    phase = complex(math.cos(2.0 * Z), math.sin(2.0 * Z))
    err = math.inf
    m = 0
    while m < max_terms:
        term = -coef * Z ** (-(q + m)) * phase / 2j
        if abs(term) >= err:
            break
        T += term
        err = abs(term)
        coef *= (q + m) / 2j
        m += 1
    rem = abs(coef) * Z ** (1.0 - q - m) / (q + m - 1.0)
    rot = complex(math.cos(psi), -math.sin(psi))
    return (rot * T).real, min(err, rem)


def lid_integrand(alpha: float, x):
    """f_alpha(x) = g_alpha^2 + (g_alpha')^2/pi^2 = (J_a^2 + J_{a+1}^2)(z)/z^(2a)."""
    g = bessel_g(alpha, x)
    gp = bessel_g_prime(alpha, x)
    out = np.asarray(g, dtype=float) ** 2 + np.asarray(gp, dtype=float) ** 2 / _PI ** 2
    return out if out.shape else float(out)


def _lid_tail(alpha: float, X: float, order: int = 10) -> tuple[float, float]:
    """(int_X^inf f_alpha dx, error bound) from the product asymptotics."""
    Z = _PI * X
    Pa, Qa = _pq_series(alpha, order)
    Pb, Qb = _pq_series(alpha + 1.0, order)
    s_avg = np.zeros(order + 1)
    s_cos = np.zeros(order + 1)
    s_sin = np.zeros(order + 1)
    for (P, Q, sgn) in ((Pa, Qa, 1.0), (Pb, Qb, -1.0)):
        PP = _series_mul(P, P, order)
        QQ = _series_mul(Q, Q, order)
        PQ = _series_mul(P, Q, order)
        s_avg += PP + QQ
        s_cos += sgn * (PP - QQ)
        s_sin += sgn * (-2.0 * PQ)
    # J_a^2 + J_{a+1}^2 = (1/(pi z)) [s_avg + s_cos cos 2w + s_sin sin 2w],
    # w = z - phi, phi = alpha pi/2 + pi/4; and the x-integral carries 1/pi.
    phi = alpha * _PI / 2.0 + _PI / 4.0
    total = 0.0
    errs = 0.0
    for kpow in range(order + 1):
        q = 2.0 * alpha + 1.0 + kpow
        if s_avg[kpow]:
            total += s_avg[kpow] * Z ** (1.0 - q) / (q - 1.0)
        if s_cos[kpow]:
            v, e = _osc_halfline(q, Z, 2.0 * phi)
            total += s_cos[kpow] * v
            errs += abs(s_cos[kpow]) * e
        if s_sin[kpow]:
            # sin(2w) = cos(2z - 2phi - pi/2)
            v, e = _osc_halfline(q, Z, 2.0 * phi + _PI / 2.0)
            total += s_sin[kpow] * v
            errs += abs(s_sin[kpow]) * e
    # truncation of the product series: next avg coefficient over Z^order
    trunc = (abs(s_avg[order]) + abs(s_cos[order]) + abs(s_sin[order]) + 1.0) \
        * Z ** (-(2.0 * alpha + order)) / (2.0 * alpha + order)
    return total / _PI ** 2, (errs + trunc) / _PI ** 2


def bessel_lid_ratio(alpha: float, tol: float = 1e-10, X: float = 14.0
                     ) -> float:
    """Ratio (integral of the lid)/(lid at 0) for the alpha family.

    Numerator by adaptive quadrature on [0, X] plus the asymptotic tail;
    denominator from the series value at the origin.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    pts = [0.5 * n for n in range(1, int(2 * X))]
    fin = quad.integrate_finite(lambda x: lid_integrand(alpha, x), 0.0, X,
                                tol=0.25 * tol, points=pts)
    tail, tail_err = _lid_tail(alpha, X)
    numer = 2.0 * (fin.value + tail)
    denom = lid_integrand(alpha, 0.0)
    return numer / denom


def closed_form_lid_ratio(alpha: float) -> float:
    """Gamma-function closed form of the same ratio (independent route).

    Obtained from the classical values of int_0^inf J_nu(t)^2 t^(-2 alpha) dt
    for nu = alpha, alpha + 1; used as the second path of the two-path check.
    """
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    a = alpha
    return (2.0 ** (2 * a) / _PI * math.gamma(a) * math.gamma(a + 1.0) ** 2
            * (4 * a + 2) / (math.gamma(a + 0.5) * math.gamma(2 * a + 0.5)
                             * (4 * a + 1)))


@dataclass(frozen=True)
class AlphaMinimum:
    alpha: float
    ratio: float
    boundary: Optional[str] = None   # 'lo' | 'hi' when the minimum sits on an edge
    unimodal: bool = True


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_alpha(lo: float, hi: float, tol: float = 1e-4,
                   scan_points: int = 50, ratio_tol: float = 1e-8) -> AlphaMinimum:
    """Golden-section minimum of the lid ratio over [lo, hi].

    A coarse scan first verifies unimodality empirically (the construction
    guarantees a minimizer but not unimodality); a minimum within tol of an
    endpoint is flagged as a boundary minimum.
    """
    if not (0.0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    if hi - lo <= tol:
        mid = 0.5 * (lo + hi)
        return AlphaMinimum(alpha=mid, ratio=bessel_lid_ratio(mid, ratio_tol))
    xs = np.linspace(lo, hi, scan_points)
    vals = np.array([bessel_lid_ratio(a, ratio_tol) for a in xs])
    sign_changes = np.diff(np.sign(np.diff(vals)))
    n_minima = int(np.sum(sign_changes > 0))
    interior_min = 0 < int(np.argmin(vals)) < scan_points - 1
    unimodal = n_minima <= 1

    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = bessel_lid_ratio(c, ratio_tol), bessel_lid_ratio(d, ratio_tol)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = bessel_lid_ratio(c, ratio_tol)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = bessel_lid_ratio(d, ratio_tol)
    alpha_star = 0.5 * (a + b)
    ratio_star = bessel_lid_ratio(alpha_star, ratio_tol)
    boundary = None
    if alpha_star - lo <= 2.0 * tol and not interior_min:
        boundary = "lo"
    elif hi - alpha_star <= 2.0 * tol and not interior_min:
        boundary = "hi"
    return AlphaMinimum(alpha=alpha_star, ratio=ratio_star,
                        boundary=boundary, unimodal=unimodal)
