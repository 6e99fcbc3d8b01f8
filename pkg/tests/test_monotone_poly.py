import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from bandlimit import monotone_poly as mpoly
from bandlimit import quad
from bandlimit.eigen import rational_quadform

mpmath.mp.dps = 25

PI2 = math.pi ** 2


def basis_oracle(i, x):
    """Defining moment integral of the basis member, extended precision."""
    kern = mpmath.cos if i % 2 == 0 else mpmath.sin
    v = 2 * mpmath.quad(lambda y: (mpmath.mpf(1) / 4 - y * y) * y ** i
                        * kern(2 * mpmath.pi * x * y), [0, mpmath.mpf(1) / 2])
    return float(v)


class TestBasis:
    def test_member_zero_at_origin(self):
        # integral of (1/4 - y^2) over the interval
        assert abs(mpoly.basis_eval(0, 0.0) - 1.0 / 6.0) < 1e-14

    def test_odd_members_vanish_at_origin(self):
        for i in (1, 3, 7):
            assert mpoly.basis_eval(i, 0.0) == 0.0

    def test_member_two_at_origin(self):
        # integral of (1/4 - y^2) y^2 = 1/48 - 1/80 = 1/120, oracle-confirmed
        assert abs(mpoly.basis_eval(2, 0.0) - basis_oracle(2, 0.0)) < 1e-15
        assert abs(mpoly.basis_eval(2, 0.0) - 1.0 / 120.0) < 1e-15

    @pytest.mark.parametrize("i", [0, 1, 2, 5, 9, 14, 20])
    def test_matches_oracle_across_branches(self, i):
        for x in (0.07, 0.6, 1.9, 4.1, 7.7, 15.2):
            mine = mpoly.basis_eval(i, x)
            ref = basis_oracle(i, x)
            assert abs(mine - ref) < 2e-11 * (1.0 + abs(ref))

    def test_odd_symmetry(self):
        assert abs(mpoly.basis_eval(3, 1.3) + mpoly.basis_eval(3, -1.3)) < 1e-15


class TestExactEntries:
    def test_n00(self):
        # (1/4) int_I (-2t)^2 dt = (1/4)(1/3); the defining integral is the
        # authority (arithmetic oracle below)
        ref = mpmath.quad(lambda t: 4 * t * t, [-mpmath.mpf(1) / 2, mpmath.mpf(1) / 2]) / 4
        assert mpoly.n_entry_exact(0, 0) == Fraction(1, 12)
        assert abs(float(mpoly.n_entry_exact(0, 0)) - float(ref)) < 1e-15

    def test_parity_entries_vanish(self):
        assert mpoly.n_entry_exact(0, 1) == 0
        assert mpoly.d_entry_exact(2, 3) == 0

    def test_d00_against_quadrature_oracle(self):
        b = mpoly.basis_band(0)
        tail = (b.trig_tail * b.trig_tail).weighted(1)
        r = quad.hybrid_line_integral(lambda x: x * b.eval(x) ** 2, tail,
                                      tol=1e-13, X=8.0)
        assert abs(float(mpoly.d_entry_exact(0, 0)) / PI2 - r.value) < 1e-12

    def test_d_energy_identity_on_random_vectors(self):
        # time-domain second moment equals the profile-derivative form
        rng = np.random.default_rng(8)
        d = 4
        Nf, _ = mpoly.exact_nd_matrices(d)
        for _ in range(3):
            a = rng.normal(size=d + 1)
            a[1::2] = 0.0  # even sector: real-valued combination
            band = mpoly._combination_band(a)
            tail = (band.trig_tail * band.trig_tail).weighted(2)
            r = quad.hybrid_line_integral(lambda x: x * x * band.eval(x) ** 2,
                                          tail, tol=1e-11, X=8.0)
            fourier = sum(a[i] * a[j] * float(Nf[i][j]) / PI2
                          for i in range(d + 1) for j in range(d + 1))
            assert abs(r.value - fourier) < 1e-8 * max(1.0, abs(fourier))


class TestAssemble:
    def test_exact_matrices_positive_definite(self):
        N, D = mpoly.assemble_ND(6)
        np.linalg.cholesky(N.array)
        np.linalg.cholesky(D.array)

    def test_methods_agree_small_degree(self):
        N0, D0 = mpoly.assemble_ND(4, method="exact")
        N1, D1 = mpoly.assemble_ND(4, tol=1e-11, method="hybrid")
        assert np.allclose(N0.array, N1.array, atol=1e-10)
        assert np.allclose(D0.array, D1.array, atol=1e-10)

    def test_declared_decay_method_agrees_loosely(self):
        N0, D0 = mpoly.assemble_ND(2, method="exact")
        N1, D1 = mpoly.assemble_ND(2, tol=2e-7, method="quadrature")
        assert np.allclose(D0.array, D1.array, atol=5e-7)
        assert np.allclose(N0.array, N1.array, atol=5e-9)

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            mpoly.assemble_ND(mpoly.D_CAP + 1)


class TestSolve:
    def test_degree_two(self):
        s = mpoly.solve_poly(2)
        assert abs(s.bound - 1.277171240) < 1e-8

    def test_degree_four(self):
        s = mpoly.solve_poly(4)
        assert abs(s.bound - 1.277148060) < 1e-8

    def test_rayleigh_consistency(self):
        s = mpoly.solve_poly(6)
        Nf, Df = mpoly.exact_nd_matrices(6)
        a = s.coeffs
        num = 2.0 * sum(a[i] * a[j] * float(Nf[i][j]) for i in range(7) for j in range(7))
        den = sum(a[i] * a[j] * float(Df[i][j]) for i in range(7) for j in range(7))
        assert abs(num / den - s.bound) < 1e-10

    def test_nestedness(self):
        bounds = {d: mpoly.solve_poly(d).bound for d in (2, 4, 6, 8)}
        for d in (2, 4, 6):
            assert bounds[d + 2] <= bounds[d] + 1e-12

    def test_bound_exceeds_one(self):
        assert mpoly.solve_poly(3).bound > 1.0

    def test_float_pencil_path_small_degree(self):
        s = mpoly.solve_poly(4, tol=1e-11, method="hybrid")
        assert abs(s.bound - 1.277148060) < 1e-7

    def test_solution_profile_metadata(self):
        s = mpoly.solve_poly(2)
        # peak = (1/2) int |x| h^2 = int_0^inf x h^2, from the exact form
        b = s.h
        tail = (b.trig_tail * b.trig_tail).weighted(1)
        r = quad.hybrid_line_integral(lambda x: x * b.eval(x) ** 2, tail,
                                      tol=1e-11, X=8.0, even=False)
        assert abs(r.value - s.peak) < 1e-9


class TestCertificate:
    def test_exact_value(self):
        c = mpoly.certify_d2_exact()
        assert c == Fraction(49484, 38745)

    def test_reduced(self):
        c = mpoly.certify_d2_exact()
        assert math.gcd(c.numerator, c.denominator) == 1

    def test_binary64_image_consistent_with_solver(self):
        c = float(mpoly.certify_d2_exact())
        s = mpoly.solve_poly(2)
        assert s.bound <= c + 1e-12      # fixed vector cannot beat the minimum
        assert abs(c - s.bound) < 1e-8

    def test_certificate_from_quadform(self):
        N, D = mpoly.exact_nd_matrices(2)
        num = 2 * rational_quadform(mpoly.CERT_COEFFS, N)
        den = rational_quadform(mpoly.CERT_COEFFS, D)
        assert num / den == Fraction(49484, 38745)
