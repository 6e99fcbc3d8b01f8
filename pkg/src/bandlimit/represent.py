"""Bridge between the band function h and its radially decreasing profile.

For h of type at most pi with even modulus and x h square-integrable,
f(x) = integral over (-inf, x] of -t h(t)^2 is even, nonnegative, radially
decreasing, and integrable, with f'(x) = -x h(x)^2, peak f(0) equal to the
half-line first moment, and total integral equal to the second moment.
The quotient of those two moments (times two) is the monotone-delta
objective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import quad
from .specfun import BandFunction

_PI = math.pi


class RepresentError(RuntimeError):
    pass


def _require_even_modulus(h: BandFunction):
    if h.parity not in ("even", "odd"):
        raise RepresentError("h must have even modulus (parity even or odd)")


def half_moment(h: BandFunction, power: int, tol: float = 1e-11) -> quad.QuadResult:
    """int_0^inf x^power h(x)^2 dx via quadrature plus the exact trig tail."""
    if h.trig_tail is None:
        raise RepresentError(f"band function {h.label!r} carries no tail form")
    tail = (h.trig_tail * h.trig_tail).weighted(power)
    f = lambda x: x ** power * np.asarray(h.eval(x)) ** 2
    return quad.hybrid_line_integral(f, tail, tol=tol,
                                     X=max(tail.valid_from, 6.0), even=False)


def h_to_f(h: BandFunction, x: float, tol: float = 1e-10,
           peak: Optional[float] = None) -> float:
    """Cumulative profile value f(x) = int_{-inf}^x of -t h(t)^2.

    Computed as peak - int_0^|x| t h(t)^2 (the even-modulus reduction, which
    is also the stable direction).  ``peak`` may be supplied when the caller
    knows it exactly (quadratic-form identities); otherwise it is integrated.
    """
    _require_even_modulus(h)
    if peak is None:
        peak = half_moment(h, 1, tol=tol).value
    ax = abs(float(x))
    if ax == 0.0:
        return peak
    pts = [0.5 * n for n in range(1, int(2 * ax) + 1)]
    inner = quad.integrate_finite(lambda t: t * np.asarray(h.eval(t)) ** 2,
                                  0.0, ax, tol=tol, points=pts)
    return peak - inner.value


def quotient(h: BandFunction, tol: float = 1e-11) -> float:
    """2 int x^2 h^2 / int |x| h^2, the monotone-delta objective at h."""
    _require_even_modulus(h)
    num = half_moment(h, 2, tol=tol)      # (1/2) int x^2 h^2
    den = half_moment(h, 1, tol=tol)      # (1/2) int |x| h^2
    if abs(den.value) <= 1e3 * den.total_error or den.value <= 0.0:
        raise RepresentError("denominator vanishes: h is (numerically) zero")
    return 2.0 * num.value / den.value


def derivative_identity_check(h: BandFunction, f_closed: Callable,
                              xs: Sequence[float], step: float = 1e-5) -> float:
    """Max residual of f'(x) + x h(x)^2 over xs, f' by central differences."""
    worst = 0.0
    for x in xs:
        fp = (float(f_closed(x + step)) - float(f_closed(x - step))) / (2.0 * step)
        resid = abs(fp + x * float(h.eval(x)) ** 2)
        worst = max(worst, resid)
    return worst


@dataclass(frozen=True)
class MonotoneProfile:
    """The profile f attached to a band function h.

    ``mass`` is int x^2 h^2 (= int f), ``peak`` is f(0); both may come from
    exact quadratic-form identities or from quadrature.
    """

    h: BandFunction
    mass: float
    peak: float
    tol: float = 1e-10

    def f_eval(self, x) -> np.ndarray:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([h_to_f(self.h, t, tol=self.tol, peak=self.peak) for t in xs])
        return float(out[0]) if np.ndim(x) == 0 else out

    def tabulate(self, xmax: float, n: int = 512) -> tuple[np.ndarray, np.ndarray]:
        """Dense table of f on [0, xmax] via cumulative panel integrals."""
        xs = np.linspace(0.0, xmax, n)
        vals = np.empty(n)
        vals[0] = self.peak
        acc = 0.0
        g = lambda t: t * np.asarray(self.h.eval(t)) ** 2
        for i in range(1, n):
            seg = quad.integrate_finite(g, xs[i - 1], xs[i], tol=self.tol)
            acc += seg.value
            vals[i] = self.peak - acc
        return xs, vals


def make_profile(h: BandFunction, tol: float = 1e-10,
                 mass: Optional[float] = None, peak: Optional[float] = None
                 ) -> MonotoneProfile:
    _require_even_modulus(h)
    if peak is None:
        peak = half_moment(h, 1, tol=tol).value
    if mass is None:
        mass = 2.0 * half_moment(h, 2, tol=tol).value
    return MonotoneProfile(h=h, mass=mass, peak=peak, tol=tol)
