"""Polynomial pipeline for the monotone-delta bound.

Trial transforms (1/4 - y^2) y^i on [-1/2, 1/2] generate a finite-dimensional
Rayleigh quotient 2 a.Na / a.Da whose minimum bounds the monotone-delta
constant from above.  Both Gram matrices have exact rational closed forms
(times 1/pi^2): N from the Plancherel identity on the profile derivatives, D
from the regularized half-line table of trigonometric-rational products.
The pencil is solved at elevated precision; its monomial-type conditioning
makes binary64 reduction useless beyond degree ~10, which is why the exact
assembly is the default and the declared-decay quadrature assembly is kept
as an independent cross-check at small degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from . import _trigforms as tf
from . import quad
from .eigen import SymMatrix, eig_gen_min, pencil_min_exact, rational_quadform
from .specfun import BandFunction

_PI = math.pi

D_CAP = 40  # documented degree cap for assembly


def _p_coeffs(i: int) -> list[Fraction]:
    """Coefficients of p_i(y) = (1/4 - y^2) y^i = y^i/4 - y^(i+2)."""
    return [Fraction(0)] * i + [Fraction(1, 4), Fraction(0), Fraction(-1)]


@lru_cache(maxsize=None)
def basis_form(i: int) -> dict:
    """Exact trig-rational form of the real basis member F_i.

    F_i is the transform of p_i evaluated at -x: real part for even i,
    imaginary part for odd i (the only nonzero component either way).
    """
    re_form, im_form = tf.symmetric_transform_forms(_p_coeffs(i), deriv=0)
    return re_form if i % 2 == 0 else im_form


def basis_eval(i: int, x) -> np.ndarray:
    """Evaluate F_i with a series branch near 0 and the exact form beyond.

    The switch radius grows with i: the closed form loses digits through
    cancellation once pi|x| falls below about the top inverse power, while
    the moment series stays accurate for |2 pi x| up to ~30.
    """
    if i < 0:
        raise ValueError("index must be nonnegative")
    x_in = np.asarray(x, dtype=float)
    scalar = x_in.ndim == 0
    xa = np.atleast_1d(np.abs(x_in))
    u = _PI * xa
    u_switch = max(7.0, 1.1 * (i + 3))
    out = np.empty_like(u)
    small = u < u_switch
    if np.any(small):
        vals = tf.series_transform_eval(_p_coeffs(i), 0, xa[small])
        out[small] = vals.real if i % 2 == 0 else vals.imag
    if np.any(~small):
        out[~small] = tf.form_eval(basis_form(i), u[~small])
    if i % 2 == 1:  # odd members are odd functions of x
        out = out * np.sign(np.atleast_1d(x_in))
    return float(out[0]) if scalar else out


def basis_band(i: int) -> BandFunction:
    tail = tf.form_to_trigtail(basis_form(i), valid_from=max(3.0, 0.45 * (i + 3)))
    return BandFunction(eval=lambda x, i=i: basis_eval(i, x), type_bound=_PI,
                        parity="even" if i % 2 == 0 else "odd",
                        label=f"poly_basis[{i}]", trig_tail=tail)


@lru_cache(maxsize=None)
def n_entry_exact(i: int, j: int) -> Fraction:
    """pi^2 * N_ij, exactly: (1/4) int_I p_i'(t) p_j'(t) dt."""
    if (i + j) % 2 == 1:
        return Fraction(0)

    def dcoefs(k: int) -> dict:
        out = {}
        if k >= 1:
            out[k - 1] = Fraction(k, 4)
        out[k + 1] = out.get(k + 1, Fraction(0)) - (k + 2)
        return out

    total = Fraction(0)
    for m1, c1 in dcoefs(i).items():
        for m2, c2 in dcoefs(j).items():
            m = m1 + m2
            if m % 2 == 0:
                total += c1 * c2 * Fraction(1, 2 ** m * (m + 1))
    return total / 4


@lru_cache(maxsize=None)
def d_entry_exact(i: int, j: int) -> Fraction:
    """pi^2 * D_ij, exactly, via the regularized half-line table.

    D_ij = int |x| F_i F_j dx = (2/pi^2) int_0^inf u (F_i F_j)(u) du; the
    table evaluates the u-integral as an exact rational (the pi/2 component
    cancels identically, which is asserted).
    """
    if (i + j) % 2 == 1:
        return Fraction(0)
    prod = tf.product_basis(basis_form(i), basis_form(j))
    shifted = {r - 1: (2 * p, 2 * c, 2 * s) for r, (p, c, s) in prod.items()}
    q0, qpi = tf.halfline_integral_exact(shifted)
    assert qpi == 0, f"unexpected pi/2 component in D[{i},{j}]"
    return q0


def exact_nd_matrices(d: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(pi^2 N, pi^2 D) as exact rational (d+1) x (d+1) matrices."""
    n = d + 1
    N = [[n_entry_exact(i, j) for j in range(n)] for i in range(n)]
    D = [[d_entry_exact(i, j) for j in range(n)] for i in range(n)]
    return N, D


def _declared_decay_for_pair(i: int, j: int) -> quad.DecayDeclaration:
    """|x F_i(x) F_j(x)| <= C/x^3 from the exact far-field envelopes."""
    ti = tf.form_to_trigtail(basis_form(i), valid_from=2.0)
    tj = tf.form_to_trigtail(basis_form(j), valid_from=2.0)
    wt = (ti * tj).weighted(1)
    X0 = 2.0
    C = sum(math.hypot(c, s) * X0 ** (3 - r) for (_, r), (c, s) in wt.terms.items())
    return quad.DecayDeclaration(exponent=3.0, coefficient=C, X0=X0)


def assemble_ND(d: int, tol: float = 1e-9, method: str = "exact"
                ) -> tuple[SymMatrix, SymMatrix]:
    """Assemble the quotient matrices N and D for degree d.

    method='exact': float images of the exact rational entries (default).
    method='hybrid': finite quadrature plus exact trigonometric tails.
    method='quadrature': the declared-decay recipe end to end; honest but
    only practical at loose tolerances and small d (cross-check path).
    Both matrices are checked positive definite.
    """
    if d < 0 or d > D_CAP:
        raise ValueError(f"degree must be within [0, {D_CAP}]")
    n = d + 1
    N = np.zeros((n, n))
    D = np.zeros((n, n))
    if method == "exact":
        for i in range(n):
            for j in range(i, n):
                N[i, j] = N[j, i] = float(n_entry_exact(i, j)) / _PI ** 2
                D[i, j] = D[j, i] = float(d_entry_exact(i, j)) / _PI ** 2
    elif method in ("hybrid", "quadrature"):
        bands = [basis_band(i) for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                if (i + j) % 2 == 1:
                    continue
                N[i, j] = N[j, i] = _n_entry_quadrature(bands[i], bands[j], tol)
                if method == "hybrid":
                    fij = lambda x, bi=bands[i], bj=bands[j]: x * bi.eval(x) * bj.eval(x)
                    tail = (bands[i].trig_tail * bands[j].trig_tail).weighted(1)
                    r = quad.hybrid_line_integral(fij, tail, tol=tol,
                                                  X=max(tail.valid_from, 6.0))
                    D[i, j] = D[j, i] = r.value
                else:
                    fij = lambda x, bi=bands[i], bj=bands[j]: abs(x) * bi.eval(x) * bj.eval(x)
                    r = quad.integrate_line(fij, _declared_decay_for_pair(i, j), tol=tol)
                    D[i, j] = D[j, i] = r.value
    else:
        raise ValueError(f"unknown method {method!r}")
    Nm = SymMatrix(N, provenance=f"poly basis N, d={d}, {method}")
    Dm = SymMatrix(D, provenance=f"poly basis D, d={d}, {method}")
    for mat, name in ((Nm, "N"), (Dm, "D")):
        try:
            np.linalg.cholesky(mat.array)
        except np.linalg.LinAlgError as exc:
            raise quad.QuadratureError(f"{name} not positive definite at d={d}") from exc
    return Nm, Dm


def _n_entry_quadrature(bi: BandFunction, bj: BandFunction, tol: float) -> float:
    f = lambda x, bi=bi, bj=bj: x * x * bi.eval(x) * bj.eval(x)
    tail = (bi.trig_tail * bj.trig_tail).weighted(2)
    r = quad.hybrid_line_integral(f, tail, tol=tol, X=max(tail.valid_from, 6.0))
    return r.value


@dataclass(frozen=True)
class MonotoneSolution:
    """Result of one degree-d minimization."""

    d: int
    bound: float
    coeffs: np.ndarray
    h: BandFunction
    peak: float            # f(0) = (1/2) int |x| h^2
    mass: float            # int x^2 h^2 = int f
    diagnostics: dict = field(default_factory=dict)


def _combination_band(coeffs: np.ndarray) -> BandFunction:
    idx = [i for i, a in enumerate(coeffs) if a != 0.0]
    tail = None
    for i in idx:
        t = tf.form_to_trigtail(basis_form(i), valid_from=3.0 + 0.45 * len(coeffs),
                                scale=float(coeffs[i]))
        tail = t if tail is None else tail + t
    parity = "even" if all(i % 2 == 0 for i in idx) else (
        "odd" if all(i % 2 == 1 for i in idx) else "none")

    def eval_h(x, coeffs=np.array(coeffs)):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for i, a in enumerate(coeffs):
            if a:
                out = out + a * np.asarray(basis_eval(i, x))
        return out if out.shape else float(out)

    return BandFunction(eval=eval_h, type_bound=_PI, parity=parity,
                        label="poly_solution", trig_tail=tail)


def solve_poly(d: int, tol: float = 1e-10, method: str = "exact") -> MonotoneSolution:
    """Minimize the quotient over degree-d profiles.

    The pencil block-diagonalizes by index parity; both blocks are solved
    and the smaller minimum returned (even-parity wins for every tabulated
    degree).  Exact method: rational entries + high-precision pencil solve.
    Gauge: coefficients scaled so the leading nonzero coordinate is 1.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if method == "exact":
        Nf, Df = exact_nd_matrices(d)
        dps = 40 + 6 * d
        best = None
        for parity in (0, 1):
            idx = [i for i in range(d + 1) if i % 2 == parity]
            if not idx:
                continue
            Nb = [[2 * Nf[i][j] for j in idx] for i in idx]
            Db = [[Df[i][j] for j in idx] for i in idx]
            lam, vec = pencil_min_exact(Nb, Db, dps=dps)
            if best is None or lam < best[0]:
                full = np.zeros(d + 1)
                for k, i in enumerate(idx):
                    full[i] = vec[k]
                best = (lam, full)
        lam, a = best
        Nfl = np.array([[float(v) for v in row] for row in Nf])
        Dfl = np.array([[float(v) for v in row] for row in Df])
        diagnostics = {"method": "exact", "dps": dps}
    else:
        Nm, Dm = assemble_ND(d, tol=tol, method=method)
        lam, a = eig_gen_min(SymMatrix(2 * Nm.array), Dm)
        Nfl, Dfl = Nm.array * _PI ** 2, Dm.array * _PI ** 2
        diagnostics = {"method": method, "tol": tol}

    nz = np.nonzero(np.abs(a) > 1e-9 * np.abs(a).max())[0]
    a = a / a[nz[0]]
    peak = float(a @ Dfl @ a) / (2.0 * _PI ** 2)
    mass = float(a @ Nfl @ a) / _PI ** 2
    h = _combination_band(a)
    return MonotoneSolution(d=d, bound=float(lam), coeffs=a, h=h,
                            peak=peak, mass=mass, diagnostics=diagnostics)


CERT_COEFFS = (Fraction(1), Fraction(0), Fraction(-9, 5))


def certify_d2_exact() -> Fraction:
    """Exact rational value of the quotient at the fixed degree-2 profile.

    Builds both quadratic forms from exact entries at the coefficient
    vector (1, 0, -9/5) and returns 2 a.Na / a.Da as a reduced fraction.
    """
    N, D = exact_nd_matrices(2)
    num = 2 * rational_quadform(CERT_COEFFS, N)
    den = rational_quadform(CERT_COEFFS, D)
    return num / den
