import math

import numpy as np
import pytest

from bandlimit import monotone_l2 as ml2
from bandlimit import monotone_poly as mpoly
from bandlimit import quad
from bandlimit.specfun import hk

# golden diagonal entry, frozen from the extended-precision reduction
# 2 Si(pi)/pi - 4/pi^2 evaluated at 35 digits
Q11_GOLDEN = 0.7736950099028161844565


class TestEntries:
    def test_diagonal_golden(self):
        assert abs(ml2.q_entry_closed(1, 1) - Q11_GOLDEN) < 1e-15

    def test_rejects_even_modes(self):
        with pytest.raises(ValueError):
            ml2.q_entry_closed(2, 1)

    @pytest.mark.parametrize("k,j", [(1, 1), (1, 3), (3, 9), (5, 7), (11, 13)])
    def test_closed_form_against_quadrature(self, k, j):
        closed = ml2.q_entry_closed(k, j)
        r = ml2.q_entry_quadrature(k, j, tol=1e-12)
        assert abs(closed - r.value) < 1e-12 + r.total_error

    def test_symmetry_by_construction(self):
        Q = ml2.assemble_Q(12).array
        assert np.array_equal(Q, Q.T)

    def test_assembly_methods_agree(self):
        Qc = ml2.assemble_Q(6, method="closed").array
        Qq = ml2.assemble_Q(6, tol=1e-12, method="quadrature").array
        assert np.allclose(Qc, Qq, atol=1e-11)


class TestOrthonormality:
    def test_fourier_entry_values(self):
        r = quad.integrate_finite(lambda t: 2 * np.sin(np.pi * t) ** 2, -0.5, 0.5, tol=1e-12)
        assert abs(r.value - 1.0) < 1e-12
        r2 = quad.integrate_finite(lambda t: 2 * np.sin(np.pi * t) * np.sin(3 * np.pi * t),
                                   -0.5, 0.5, tol=1e-12)
        assert abs(r2.value) < 1e-12

    def test_time_domain_unit_norm(self):
        from bandlimit.specfun import hk_tail
        tail = (hk_tail(1) * hk_tail(1)).weighted(2)
        r = quad.hybrid_line_integral(lambda x: x * x * hk(1, x) ** 2, tail,
                                      tol=1e-10, X=4.0)
        assert abs(r.value - 1.0) < 1e-8

    def test_deviation_small_modes(self):
        assert ml2.check_orthonormal(9, tol=1e-10) < 1e-8


class TestSolve:
    def test_reference_bounds(self):
        assert abs(ml2.solve_l2(10).bound - 1.277199350) < 1e-8
        assert abs(ml2.solve_l2(50).bound - 1.277136017) < 1e-8

    def test_largest_eigenvalue_d10(self):
        s = ml2.solve_l2(10)
        assert abs(abs(s.lam) - 1.0 / 1.277199350) < 1e-8

    def test_rayleigh_consistency(self):
        s = ml2.solve_l2(40)
        Q = ml2.assemble_Q(40).array
        a = s.coeffs
        assert abs((a @ Q @ a) / (a @ a) - abs(s.lam)) < 1e-10

    def test_bound_strictly_decreasing(self):
        bounds = [ml2.solve_l2(d).bound for d in (10, 50, 100, 150)]
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))

    def test_eigvector_gauge(self):
        s = ml2.solve_l2(25)
        assert s.coeffs[0] > 0

    def test_solution_band_function_quotient(self):
        # independent quadrature of the solution's quotient returns the bound
        from bandlimit.represent import quotient
        s = ml2.solve_l2(12)
        q = quotient(s.h, tol=1e-10)
        assert abs(q - s.bound) < 1e-8

    def test_cross_pipeline_agreement(self):
        b_l2 = ml2.solve_l2(300).bound
        b_poly = mpoly.solve_poly(20).bound
        assert abs(b_l2 - b_poly) <= 2e-8


class TestZeros:
    def test_first_zeros_d200(self):
        s = ml2.solve_l2(200)
        z = ml2.extremizer_zeros(s, 5)
        for got, ref in zip(z, (1.5866, 2.5648, 3.5525, 4.5444, 5.5387)):
            assert abs(got - ref) < 5e-5

    def test_single_mode_first_sign_change(self):
        s = ml2.L2Solution(d=1, lam=ml2.q_entry_closed(1, 1),
                           bound=1.0 / ml2.q_entry_closed(1, 1),
                           coeffs=np.array([1.0]), h=ml2.combination_band([1.0]))
        xs = np.linspace(0.01, 3.0, 3000)
        vals = np.asarray(s.h.eval(xs))
        # h1 = sqrt(2) sinc(|x|-1/2)/(1+|x|-1/2): no zero at the pole 1/2,
        # first sign change at x = 3/2 (zero of the shifted cardinal sine)
        assert abs(vals[np.argmin(np.abs(xs - 0.5))]) > 0.5
        sign_flips = np.nonzero(np.diff(np.sign(vals)))[0]
        first = xs[sign_flips[0]]
        assert abs(first - 1.5) < 2e-3

    def test_requesting_too_many_zeros_reports(self):
        s = ml2.solve_l2(5)
        with pytest.raises(RuntimeError):
            # a two-unit grid cell holds two zeros: the scan misses them all
            ml2.extremizer_zeros(s, 3, grid_per_unit=0.5)
