"""Orthonormal-family pipeline for the monotone-delta bound.

The even cosine-over-quadratic family (odd indices) is orthonormal for the
x^2-weighted inner product; restricted to d modes, the quotient's reciprocal
is the largest-magnitude eigenvalue of the matrix of half-line first-moment
integrals.  Those entries have closed forms through sine/cosine integrals:

    Q_kk     = 2 Si(pi k)/(pi k) - 4/(pi^2 k^2)
    Q_kj     = (4/pi^2) [ln(k/j) + Ci(pi j) - Ci(pi k)] / (j^2 - k^2)

(k, j odd, k != j), which makes the d = 1000 run a plain dense eigensolve.
A declared-decay quadrature assembly survives as an independent cross-check
at small d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import sici

from . import quad
from .eigen import SymMatrix, eig_sym
from .specfun import BandFunction, hk, hk_band, hk_tail

_PI = math.pi


def q_entry_closed(k: int, j: int) -> float:
    """Closed form of the half-line moment integral for odd modes k, j."""
    if k % 2 == 0 or j % 2 == 0 or k < 1 or j < 1:
        raise ValueError("modes must be odd positive integers")
    if k == j:
        si, _ = sici(_PI * k)
        return 2.0 * si / (_PI * k) - 4.0 / (_PI ** 2 * k * k)
    _, ci_k = sici(_PI * k)
    _, ci_j = sici(_PI * j)
    return 4.0 / _PI ** 2 * (math.log(k / j) + ci_j - ci_k) / (j * j - k * k)


def q_entry_quadrature(k: int, j: int, tol: float = 1e-11) -> quad.QuadResult:
    """The same entry by finite quadrature plus the Laurent trig tail."""
    tail = (hk_tail(k) * hk_tail(j)).weighted(1)
    f = lambda x: x * hk(k, x) * hk(j, x)
    return quad.hybrid_line_integral(f, tail, tol=tol,
                                     X=max(tail.valid_from, 4.0), even=False)


def assemble_Q(d: int, tol: float = 1e-10, method: str = "closed") -> SymMatrix:
    """d x d matrix over modes 1, 3, ..., 2d-1.

    method='closed' (default) fills entries from the sine/cosine-integral
    closed forms, vectorized; method='quadrature' integrates each entry
    (practical for small d; used to validate the closed forms).
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if method == "closed":
        k = (2 * np.arange(1, d + 1) - 1).astype(float)
        si, ci = sici(_PI * k)
        kk, jj = np.meshgrid(k, k, indexing="ij")
        with np.errstate(divide="ignore", invalid="ignore"):
            Q = 4.0 / _PI ** 2 * (np.log(kk / jj) + ci[None, :] - ci[:, None]) / (jj ** 2 - kk ** 2)
        Q[np.arange(d), np.arange(d)] = 2.0 * si / (_PI * k) - 4.0 / (_PI ** 2 * k * k)
    elif method == "quadrature":
        Q = np.zeros((d, d))
        for i in range(d):
            for j in range(i, d):
                r = q_entry_quadrature(2 * i + 1, 2 * j + 1, tol=tol)
                Q[i, j] = Q[j, i] = r.value
    else:
        raise ValueError(f"unknown method {method!r}")
    return SymMatrix(Q, provenance=f"half-line moment matrix, d={d}, {method}")


def check_orthonormal(kmax: int, tol: float = 1e-9) -> float:
    """Max deviation from orthonormality over both evaluation paths.

    Fourier path: 2 int_I sin(pi k t) sin(pi j t) dt by finite quadrature.
    Time path: int x^2 h_k h_j dx by quadrature plus exact trig tails.
    """
    if kmax < 1 or kmax % 2 == 0:
        raise ValueError("kmax must be odd and positive")
    modes = list(range(1, kmax + 1, 2))
    worst = 0.0
    for a, k in enumerate(modes):
        for j in modes[a:]:
            target = 1.0 if k == j else 0.0
            four = quad.integrate_finite(
                lambda t, k=k, j=j: 2.0 * np.sin(_PI * k * t) * np.sin(_PI * j * t),
                -0.5, 0.5, tol=tol)
            tail = (hk_tail(k) * hk_tail(j)).weighted(2)
            time = quad.hybrid_line_integral(
                lambda x, k=k, j=j: x * x * hk(k, x) * hk(j, x),
                tail, tol=tol, X=max(tail.valid_from, 4.0))
            worst = max(worst, abs(four.value - target), abs(time.value - target))
    return worst


@dataclass(frozen=True)
class L2Solution:
    """Extreme eigenpair of the d-mode problem."""

    d: int
    lam: float
    bound: float
    coeffs: np.ndarray
    h: BandFunction
    diagnostics: dict = field(default_factory=dict)

    @property
    def peak(self) -> float:
        """f(0) = int_0^inf x h^2 = a.Qa = |lam| (unit eigenvector)."""
        return abs(self.lam)

    @property
    def mass(self) -> float:
        """int x^2 h^2 = |a|^2 = 1 for the unit eigenvector."""
        return float(self.coeffs @ self.coeffs)


def combination_band(coeffs: np.ndarray, with_tail: Optional[bool] = None) -> BandFunction:
    """Band function sum_i a_i h_{2i-1}, evaluated through the pole-free form.

    The far-field Laurent tail is attached for moderate mode counts only;
    large-d solutions use quadratic-form identities instead of tail algebra.
    """
    a = np.asarray(coeffs, dtype=float)
    d = a.size
    k = (2.0 * np.arange(1, d + 1) - 1.0)
    sign = np.where(((k - 1.0) / 2.0) % 2 == 0, 1.0, -1.0)

    def eval_h(x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        xa = np.atleast_1d(np.abs(x)).ravel()
        out = np.empty_like(xa)
        chunk = max(1, int(2e6 // max(d, 1)))
        for lo in range(0, xa.size, chunk):
            ax = xa[lo:lo + chunk, None]
            delta = ax - 0.5 * k[None, :]
            arg = _PI * delta
            sinc = np.where(np.abs(arg) < 1e-8, 1.0 - arg * arg / 6.0,
                            np.sin(arg) / np.where(arg == 0.0, 1.0, arg))
            out[lo:lo + chunk] = (math.sqrt(2.0) * sinc * sign[None, :]
                                  / (k[None, :] + delta)) @ a
        if scalar:
            return float(out[0])
        return out.reshape(np.shape(x))

    tail = None
    if with_tail or (with_tail is None and d <= 64):
        for i in range(d):
            if a[i] == 0.0:
                continue
            t = hk_tail(2 * i + 1, valid_from=float(max(2 * d, 4))).scaled(a[i])
            tail = t if tail is None else tail + t
    return BandFunction(eval=eval_h, type_bound=_PI, parity="even",
                        label=f"l2_solution[d={d}]", trig_tail=tail)


def solve_l2(d: int, tol: float = 1e-10, method: str = "closed") -> L2Solution:
    """Largest-|eigenvalue| pair of the d-mode matrix; bound = 1/|lambda|.

    Eigenvector gauge: first coordinate positive.
    """
    Q = assemble_Q(d, tol=tol, method=method)
    pairs = eig_sym(Q, tol=tol)
    lam, vec = pairs[0]
    if vec[0] < 0:
        vec = -vec
    return L2Solution(d=d, lam=lam, bound=1.0 / abs(lam), coeffs=vec,
                      h=combination_band(vec),
                      diagnostics={"method": method, "dim": d})


def extremizer_zeros(sol: L2Solution, count: int, grid_per_unit: float = 200) -> list[float]:
    """First ``count`` positive zeros of the solution's band function."""
    if count < 1:
        raise ValueError("count must be positive")
    lo, hi = 0.5, count + 2.0
    roots = quad.find_roots(sol.h, lo, hi, grid=int(grid_per_unit * (hi - lo)), tol=1e-11)
    if len(roots) < count:
        raise RuntimeError(f"only {len(roots)} zeros found in [{lo}, {hi}]")
    return roots[:count]
