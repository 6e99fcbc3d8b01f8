"""Sharp constants for derivative-weighted energies of band-limited functions.

For a polynomial weight positive on [0, 1], the weighted energy of a
unit-normalized band-limited function is bounded below by the reciprocal of
int_0^1 dt / P(t^2); the unique minimizer is the cosine transform of
1/P(4 t^2).  The Fourier-side form of the energy, int P(4t^2) |profile|^2,
equals the time-side sum of weighted derivative norms; both sides are
implemented so the bridge itself is testable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np

from . import _trigforms as tf
from . import quad
from .specfun import FourierProfile

_PI = math.pi

TIME_SIDE_DERIV_CAP = 4


class WeightError(ValueError):
    """Weight polynomial fails the positivity hypothesis on [0, 1]."""


@dataclass(frozen=True)
class WeightPoly:
    """Real polynomial sum a_n x^n, checked positive on [0, 1].

    The check combines a dense scan with a derivative-bound certificate:
    min over the grid minus (grid step / 2) * max-slope must stay positive.
    """

    coeffs: tuple

    def __init__(self, coeffs: Sequence[float]):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in coeffs))
        if not self.coeffs:
            raise WeightError("empty coefficient list")
        grid = np.linspace(0.0, 1.0, 10001)
        vals = self(grid)
        slope_bound = sum(n * abs(c) for n, c in enumerate(self.coeffs))
        margin = float(vals.min()) - 0.5e-4 * slope_bound
        if margin <= 0.0:
            raise WeightError(
                f"polynomial not certifiably positive on [0,1]: "
                f"grid min {vals.min():.3e}, slope bound {slope_bound:.3e}")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out if out.shape else float(out)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def sharp_constant(P: WeightPoly, tol: float = 1e-12) -> float:
    """Reciprocal of int_0^1 dt / P(t^2), the best constant for the weight."""
    r = quad.integrate_finite(lambda t: 1.0 / P(t * t), 0.0, 1.0, tol=tol)
    return 1.0 / r.value


def extremal_g(P: WeightPoly, x: float, tol: float = 1e-12) -> float:
    """Value at x of the unique minimizer, normalized to 1 at the origin."""
    c = sharp_constant(P, tol=tol)
    x = float(x)
    pts = None
    if abs(x) > 1.0:
        pts = [(m + 0.5) / abs(x) for m in range(int(abs(x)) + 1) if (m + 0.5) / abs(x) < 1.0]
    r = quad.integrate_finite(lambda t: np.cos(_PI * x * t) / P(t * t), 0.0, 1.0,
                              tol=tol, points=pts)
    return c * r.value


def log_corollary_constant(a: float, tol: float = 1e-12) -> float:
    """Closed form (log((1 + sqrt(a) pi)/(1 - sqrt(a) pi)) / (2 pi sqrt(a)))^-1.

    Valid for 0 < a < 1/pi^2; cross-checked on the spot against the
    quadrature constant of the weight 1 - a pi^2 x.
    """
    if not 0.0 < a < 1.0 / _PI ** 2:
        raise ValueError("need 0 < a < 1/pi^2")
    ra = math.sqrt(a)
    closed = 1.0 / (math.log((1.0 + ra * _PI) / (1.0 - ra * _PI)) / (2.0 * _PI * ra))
    check = sharp_constant(WeightPoly([1.0, -a * _PI ** 2]), tol=tol)
    if abs(closed - check) > 1e-9 * max(1.0, abs(closed)):
        raise RuntimeError(f"closed form and quadrature disagree: {closed} vs {check}")
    return closed


# ---------------------------------------------------------------------------
# band-limited functions from profiles on I = [-1/2, 1/2]
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PWFunction:
    """Band-limited function given by its profile on I.

    Polynomial profiles evaluate through closed forms (moment series near
    the origin, trigonometric-rational forms beyond) and carry exact tails;
    other profiles fall back to panel quadrature of the defining integral.
    """

    profile: FourierProfile

    def g0(self) -> float:
        if self.profile.coeffs is not None:
            return float(sum(float(q) / (2 ** m * (m + 1))
                             for m, q in enumerate(self.profile.coeffs) if m % 2 == 0))
        r = quad.integrate_finite(lambda t: np.asarray(self.profile.eval(t), dtype=float),
                                  -0.5, 0.5, tol=1e-12)
        return r.value

    def deriv_eval(self, n: int, x) -> np.ndarray:
        """Complex values of the n-th derivative on the real axis."""
        if self.profile.coeffs is None:
            return self._deriv_eval_quadrature(n, x)
        pc_f = [float(q) for q in self.profile.coeffs]
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xa = np.atleast_1d(x)
        w = 2.0 * _PI * np.abs(xa)
        out = np.empty(xa.shape, dtype=complex)
        small = w <= 24.0
        if np.any(small):
            out[small] = tf.series_transform_eval(pc_f, n, np.abs(xa[small]))
        if np.any(~small):
            re_form, im_form = _poly_forms(tuple(self.profile.coeffs), n)
            u = _PI * np.abs(xa[~small])
            out[~small] = _PI ** n * (tf.form_eval(re_form, u)
                                      + 1j * tf.form_eval(im_form, u))
        # restore odd/even symmetry for negative arguments:
        # g(-x) = conj(g(x)) for real profiles; derivative flips parity
        neg = xa < 0
        if np.any(neg):
            out[neg] = np.conj(out[neg]) * (-1.0) ** n
        return out[0] if scalar else out

    def _deriv_eval_quadrature(self, n: int, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xa = np.atleast_1d(x)
        out = np.empty(xa.shape, dtype=complex)
        for i, xi in enumerate(xa):
            pts = list(np.linspace(-0.5, 0.5, max(4, int(2 * abs(xi)) + 2))[1:-1])
            re = quad.integrate_finite(
                lambda t: np.asarray(self.profile.eval(t), dtype=float)
                * (2.0 * _PI * t) ** n * np.cos(2.0 * _PI * xi * t + 0.5 * _PI * n),
                -0.5, 0.5, tol=1e-11, points=pts)
            im = quad.integrate_finite(
                lambda t: np.asarray(self.profile.eval(t), dtype=float)
                * (2.0 * _PI * t) ** n * np.sin(2.0 * _PI * xi * t + 0.5 * _PI * n),
                -0.5, 0.5, tol=1e-11, points=pts)
            out[i] = re.value + 1j * im.value
        return out[0] if scalar else out

    def eval(self, x) -> np.ndarray:
        v = self.deriv_eval(0, x)
        return v.real if np.ndim(v) else float(np.real(v))

    def __call__(self, x):
        return self.eval(x)


@lru_cache(maxsize=256)
def _poly_forms(coeffs: tuple, deriv: int):
    # Fraction(float) is exact, and all recursion constants are dyadic, so
    # the forms represent the float-coefficient profile without drift
    pc = [Fraction(q) for q in coeffs]
    return tf.symmetric_transform_forms(pc, deriv=deriv)


def poly_pw(coeffs: Sequence[float]) -> PWFunction:
    """PWFunction whose profile is the polynomial (times the cutoff on I)."""
    coeffs = tuple(float(c) for c in coeffs)

    def prof_eval(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in reversed(coeffs):
            out = out * t + c
        return np.where(np.abs(t) <= 0.5, out, 0.0)

    return PWFunction(profile=FourierProfile(eval=prof_eval,
                                             tag="polynomial-times-cutoff",
                                             coeffs=coeffs))


def indicator_pw() -> PWFunction:
    """The unit profile: transform is the cardinal sine."""
    return poly_pw([1.0])


def extremal_pw(P: WeightPoly, tol: float = 1e-12) -> PWFunction:
    """Profile lambda/P(4 t^2) of the minimizer (rational, not polynomial)."""
    lam = sharp_constant(P, tol=tol)

    def prof_eval(t):
        t = np.asarray(t, dtype=float)
        return np.where(np.abs(t) <= 0.5, lam / P(4.0 * t * t), 0.0)

    return PWFunction(profile=FourierProfile(eval=prof_eval, tag="rational"))


def random_admissible_pw(rng: np.random.Generator, degree: int = 6,
                         max_tries: int = 100) -> PWFunction:
    """Random polynomial profile, gauge-normalized so g(0) = 1.

    Coefficients uniform in [-1, 1]; draws whose profile integral nearly
    vanishes are rejected (the gauge would blow up).
    """
    for _ in range(max_tries):
        c = rng.uniform(-1.0, 1.0, size=degree + 1)
        g0 = sum(c[m] / (2 ** m * (m + 1)) for m in range(0, degree + 1, 2))
        if abs(g0) > 1e-2:
            return poly_pw(list(c / g0))
    raise RuntimeError("could not draw an admissible profile")


# ---------------------------------------------------------------------------
# the two sides of the energy identity
# ---------------------------------------------------------------------------


def functional(P: WeightPoly, g: PWFunction, tol: float = 1e-11) -> float:
    """Fourier-side energy int_I P(4 t^2) |profile(t)|^2 dt."""
    prof = g.profile.eval
    r = quad.integrate_finite(
        lambda t: P(4.0 * t * t) * np.asarray(prof(t), dtype=float) ** 2,
        -0.5, 0.5, tol=tol)
    return r.value


def time_side_functional(P: WeightPoly, g: PWFunction, tol: float = 1e-9) -> float:
    """Time-side energy sum_n a_n pi^(-2n) int |g^(n)|^2 dx.

    Exists to exercise the Plancherel bridge against ``functional``.
    Requires a polynomial profile and weight degree at most
    TIME_SIDE_DERIV_CAP; derivatives come from differentiating under the
    integral, never from finite differences.
    """
    if P.degree > TIME_SIDE_DERIV_CAP:
        raise ValueError(f"time-side cap is degree {TIME_SIDE_DERIV_CAP}")
    if g.profile.coeffs is None:
        raise ValueError("time-side path needs a polynomial profile")
    total = 0.0
    for n, a_n in enumerate(P.coeffs):
        if a_n == 0.0:
            continue
        re_form, im_form = _poly_forms(g.profile.coeffs, n)
        t_re = tf.form_to_trigtail(re_form, valid_from=8.0, scale=_PI ** n)
        t_im = tf.form_to_trigtail(im_form, valid_from=8.0, scale=_PI ** n)
        tail = t_re * t_re + t_im * t_im

        def sq(x, n=n):
            v = g.deriv_eval(n, x)
            return np.abs(np.asarray(v)) ** 2

        r = quad.hybrid_line_integral(sq, tail, tol=tol, X=12.0)
        total += a_n / _PI ** (2 * n) * r.value
    return total


def binomial_inequality_check(N: int, sigma: float, f_profile: FourierProfile,
                              tol: float = 1e-10) -> float:
    """Alternating binomial derivative sum, computed on the Fourier side.

    Equals int (1 - 4 pi^2 xi^2 / sigma^2)^N |profile|^2 over the support,
    which is nonnegative when the profile lives in [-sigma/2pi, sigma/2pi];
    support violations raise.
    """
    if N < 0 or N > TIME_SIDE_DERIV_CAP:
        raise ValueError(f"N must be within [0, {TIME_SIDE_DERIV_CAP}]")
    s = sigma / (2.0 * _PI)
    if s < 0.5:
        probe = np.linspace(s * 1.0001, 0.5, 64)
        vals = np.asarray(f_profile.eval(probe), dtype=float)
        if np.max(np.abs(vals)) > 1e-10:
            raise ValueError("profile support exceeds [-sigma/2pi, sigma/2pi]")
    lim = min(s, 0.5)
    r = quad.integrate_finite(
        lambda t: (1.0 - 4.0 * _PI ** 2 * t * t / sigma ** 2) ** N
        * np.asarray(f_profile.eval(t), dtype=float) ** 2,
        -lim, lim, tol=tol)
    return r.value
