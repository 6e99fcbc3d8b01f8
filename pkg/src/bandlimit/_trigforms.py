"""Exact trigonometric-rational forms of moment transforms on [-1/2, 1/2].

The half-interval moment integrals

    C_m(w) = int_0^{1/2} t^m cos(w t) dt,   S_m(w) = int_0^{1/2} t^m sin(w t) dt

obey a two-term integration-by-parts recursion whose closed forms are finite
combinations  sum_r u^(-r) (a_r cos u + b_r sin u)  with u = w/2 and exactly
rational a_r, b_r.  Transforms of polynomials times the cutoff on the
symmetric interval, their derivatives, their pairwise products, and the full
half-line integrals of those products all reduce to this representation.

Chains for the symmetric-interval transforms never reach S_0, whose constant
boundary term is the only non-oscillatory contribution, so every form here
is purely oscillatory; the half-line integral of a product is obtained by a
downward reduction to sine/cosine integrals followed by an exact X -> 0
limit in which all singular parts must cancel.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .quad import TrigTail

_PI = math.pi

Form = dict  # r -> (a_r, b_r): coefficients of u^(-r) cos u and u^(-r) sin u


def _form_add(f1: Form, f2: Form, s=Fraction(1)) -> Form:
    out = {r: [a, b] for r, (a, b) in f1.items()}
    for r, (a, b) in f2.items():
        c = out.setdefault(r, [Fraction(0), Fraction(0)])
        c[0] += s * a
        c[1] += s * b
    return {r: (a, b) for r, (a, b) in out.items() if a or b}


def _form_inv_w(form: Form) -> Form:
    # multiply by 1/w = u^(-1)/2
    return {r + 1: (a / 2, b / 2) for r, (a, b) in form.items()}


def cs_forms(max_m: int) -> tuple[list[Form], list[Form]]:
    """Exact forms of C_m and S_m for m = 0..max_m (S_0: oscillatory part).

    The pure 1/w term of S_0 is omitted; it is never reached by the chains
    used for symmetric-interval transforms (see module docstring).
    """
    C = [{1: (Fraction(0), Fraction(1, 2))}]
    S = [{1: (Fraction(-1, 2), Fraction(0))}]
    for m in range(1, max_m + 1):
        half_pow = Fraction(1, 2 ** m)
        C.append(_form_add({1: (Fraction(0), half_pow / 2)},
                           _form_inv_w(S[m - 1]), s=Fraction(-m)))
        S.append(_form_add({1: (-half_pow / 2, Fraction(0))},
                           _form_inv_w(C[m - 1]), s=Fraction(m)))
    return C, S


def symmetric_transform_forms(pcoeffs: Sequence, deriv: int = 0
                              ) -> tuple[Form, Form]:
    """Forms of Re and Im of d^deriv/dx^deriv of int_I q(t) e^(2 pi i x t) dt.

    q(t) = sum_m pcoeffs[m] t^m on I = [-1/2, 1/2].  The value at x is
    pi**deriv * (real_form(u) + i imag_form(u)) with u = pi x: the rational
    part 2^deriv of (2 pi)^deriv is folded into the exact coefficients, the
    transcendental pi**deriv stays outside.
    """
    degree = len(pcoeffs) - 1
    C, S = cs_forms(degree + deriv)
    re_form: Form = {}
    im_form: Form = {}
    two_pow = Fraction(2) ** deriv  # rational half of (2 pi)^deriv
    for m, q in enumerate(pcoeffs):
        if q == 0:
            continue
        j = m + deriv
        # int_I t^j e^{iwt} dt = 2 C_j (j even) or 2i S_j (j odd);
        # the derivative contributes (2 pi i)^deriv, so the power of i is
        # deriv + (j mod 2); the remaining pi^deriv stays outside the form.
        base = C[j] if j % 2 == 0 else S[j]
        coeff = Fraction(q) * 2 * two_pow
        ipow = (deriv + (j % 2)) % 4
        if ipow in (0, 2):
            sgn = Fraction(1) if ipow == 0 else Fraction(-1)
            re_form = _form_add(re_form, base, s=sgn * coeff)
        else:
            sgn = Fraction(1) if ipow == 1 else Fraction(-1)
            im_form = _form_add(im_form, base, s=sgn * coeff)
    return re_form, im_form


def form_eval(form: Form, u: np.ndarray) -> np.ndarray:
    """Evaluate sum_r u^(-r)(a_r cos u + b_r sin u) in floats."""
    u = np.asarray(u, dtype=float)
    cu, su = np.cos(u), np.sin(u)
    out = np.zeros_like(u)
    for r, (a, b) in sorted(form.items(), reverse=True):
        out += (float(a) * cu + float(b) * su) / u ** r
    return out


def form_to_trigtail(form: Form, valid_from: float, scale: float = 1.0) -> TrigTail:
    """Convert a u-form (u = pi x) to a TrigTail in x units (exact tail)."""
    t = TrigTail(valid_from=valid_from)
    for r, (a, b) in form.items():
        f = scale / _PI ** r
        t.add(1, r, c=float(a) * f, s=float(b) * f)
    return t


def product_basis(f1: Form, f2: Form) -> dict:
    """Product of two forms in the basis u^(-r){1, cos 2u, sin 2u}.

    Returns {r: (p, c, s)} with exact coefficients.
    """
    out: dict = {}
    for r1, (a1, b1) in f1.items():
        for r2, (a2, b2) in f2.items():
            e = out.setdefault(r1 + r2, [Fraction(0)] * 3)
            e[0] += (a1 * a2 + b1 * b2) / 2
            e[1] += (a1 * a2 - b1 * b2) / 2
            e[2] += (a1 * b2 + a2 * b1) / 2
    return {r: tuple(v) for r, v in out.items()}


def halfline_integral_exact(prod: dict) -> tuple[Fraction, Fraction]:
    """Exact int_0^inf of sum_n u^(-n)(p_n + c_n cos 2u + s_n sin 2u) du.

    Returns (q0, qpi) with value = q0 + qpi * pi/2.  Works by reducing each
    tail integral int_X^inf downward to Si/Ci, expanding everything in exact
    series around X = 0, and asserting that the singular parts (negative
    powers, log X, Euler-gamma pieces) cancel; the X^0 coefficient is the
    integral.  Raises AssertionError if the combination does not converge.
    """
    nmax = max(prod)
    NORD = nmax + 4

    def ser_add(s1, s2, scale=Fraction(1)):
        out = dict(s1)
        for key, v in s2.items():
            out[key] = out.get(key, Fraction(0)) + scale * v
        return out

    def ser_shift(s, dk, scale):
        return {(k + dk, t): scale * v for (k, t), v in s.items() if k + dk <= NORD}

    half_orders = NORD // 2 + 2
    cosX = {(2 * m, '1'): Fraction((-4) ** m, math.factorial(2 * m))
            for m in range(half_orders)}
    sinX = {(2 * m + 1, '1'): Fraction((-1) ** m * 2 * 4 ** m, math.factorial(2 * m + 1))
            for m in range(half_orders)}
    # int_X^inf cos(2u)/u du = -Ci(2X) = -(gamma + ln 2 + ln X) + Cin(2X)
    Ic = {1: ser_add({(0, 'G'): Fraction(-1), (0, 'L'): Fraction(-1)},
                     {(2 * m, '1'): Fraction((-1) ** (m + 1) * 4 ** m,
                                             2 * m * math.factorial(2 * m))
                      for m in range(1, half_orders)})}
    # int_X^inf sin(2u)/u du = pi/2 - Si(2X)
    Is = {1: ser_add({(0, 'P'): Fraction(1)},
                     {(2 * m + 1, '1'): Fraction(-(-1) ** m * 2 * 4 ** m,
                                                 (2 * m + 1) * math.factorial(2 * m + 1))
                      for m in range(half_orders)})}
    Ip = {}
    for n in range(2, nmax + 1):
        Ic[n] = ser_add(ser_shift(cosX, 1 - n, Fraction(1, n - 1)),
                        Is[n - 1], scale=Fraction(-2, n - 1))
        Is[n] = ser_add(ser_shift(sinX, 1 - n, Fraction(1, n - 1)),
                        Ic[n - 1], scale=Fraction(2, n - 1))
        Ip[n] = {(1 - n, '1'): Fraction(1, n - 1)}

    total: dict = {}
    for n, (p, c, s) in prod.items():
        if p:
            assert n >= 2, "non-oscillatory 1/u term diverges"
            total = ser_add(total, Ip[n], scale=p)
        if c:
            total = ser_add(total, Ic[n], scale=c)
        if s:
            total = ser_add(total, Is[n], scale=s)

    q0 = Fraction(0)
    qpi = Fraction(0)
    for (k, t), v in total.items():
        if v == 0:
            continue
        if k < 0 or (k == 0 and t in ('L', 'G')):
            raise AssertionError(f"singular term did not cancel: {(k, t)} -> {v}")
        if k == 0 and t == '1':
            q0 = v
        elif k == 0 and t == 'P':
            qpi = v
    return q0, qpi


def series_transform_eval(pcoeffs: Sequence, deriv: int, x: np.ndarray,
                          order: int = 80) -> np.ndarray:
    """Small-argument evaluation of d^deriv/dx^deriv int_I q(t) e^(2 pi i x t) dt.

    Power series in x from exact interval moments; accurate while the
    largest term (|w|/2)^k/k! stays small against 1/eps, i.e. for
    |2 pi x| up to roughly 25.  Returns complex values.
    """
    x = np.asarray(x, dtype=float)

    # moment of t^j against q: int_I q(t) t^j dt = sum_m q_m I_{m+j},
    # I_n = 1/(2^n (n+1)) for even n else 0
    def poly_moment(j):
        acc = 0.0
        for m, q in enumerate(pcoeffs):
            n = m + j
            if q and n % 2 == 0:
                acc += float(q) / (2 ** n * (n + 1))
        return acc

    w = 2.0 * _PI * x
    total = np.zeros(x.shape, dtype=complex)
    term = np.ones_like(total)  # (iw)^k / k!
    for k in range(order):
        mu = poly_moment(deriv + k)
        if mu:
            total += term * mu
        term = term * 1j * w / (k + 1)
    return total * (2j * _PI) ** deriv
