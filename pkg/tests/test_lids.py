import math

import numpy as np
import pytest

from bandlimit import lids, quad, specfun as sf


class TestLidEval:
    def test_fejer_lid_at_origin(self):
        assert lids.lid_eval(lids.fejer_lid(), 0.0) == 1.0

    def test_fejer_lid_at_integers(self):
        # g'(n) = (-1)^n / n for the cardinal sine, so the lid is 1/(pi n)^2
        lid = lids.fejer_lid()
        for n in (1, 2, 5):
            gp = sf.sinc_pw_prime(float(n))
            assert abs(gp - (-1.0) ** n / n) < 1e-14
            assert abs(lids.lid_eval(lid, float(n)) - 1.0 / (math.pi * n) ** 2) < 1e-14

    def test_lid_dominates_square(self):
        lid = lids.fejer_lid()
        rng = np.random.default_rng(1)
        xs = rng.uniform(-30.0, 30.0, size=200)
        assert np.all(lids.lid_eval(lid, xs) >= sf.sinc_pw(xs) ** 2)

    def test_lid_touches_square_at_critical_points(self):
        lid = lids.fejer_lid()
        crit = quad.find_roots(sf.sinc_pw_prime, 1.0, 4.0, grid=600, tol=1e-12)
        assert crit
        for x in crit:
            assert abs(lids.lid_eval(lid, x) - sf.sinc_pw(x) ** 2) < 1e-13

    def test_rejects_nonpositive_coefficients(self):
        with pytest.raises(ValueError):
            lids.SoninLid(g=sf.sinc_band(), g_prime=sf.sinc_band(), C=-1.0, B=1.0)


class TestMonotone:
    def test_fejer_lid_is_radially_decreasing(self):
        lid = lids.fejer_lid()
        grid = np.arange(0.1, 20.0, 0.05)
        assert lids.lid_monotone_check(lid, grid) <= 1e-12

    def test_bessel_lid_is_radially_decreasing(self):
        lid = lids.bessel_lid(1.0)
        grid = np.arange(0.1, 20.0, 0.05)
        assert lids.lid_monotone_check(lid, grid) <= 1e-10

    def test_broken_lid_detected(self):
        # halving the zeroth-order coefficient destroys the lid property
        broken = lids.SoninLid(g=sf.sinc_band(),
                               g_prime=lids.fejer_lid().g_prime,
                               C=math.pi ** 2 / 2.0, B=2.0)
        grid = np.arange(0.1, 20.0, 0.05)
        assert lids.lid_monotone_check(broken, grid) > 0.0

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            lids.lid_monotone_check(lids.fejer_lid(), [-1.0, 0.5])


class TestRatio:
    def test_half_order_value(self):
        assert abs(lids.bessel_lid_ratio(0.5) - 4.0 / 3.0) < 1e-8

    def test_near_optimal_value(self):
        assert abs(lids.bessel_lid_ratio(0.787) - 1.284) < 1e-3

    @pytest.mark.parametrize("alpha", [0.3, 0.6, 1.0, 2.0])
    def test_ratio_exceeds_one(self, alpha):
        assert lids.bessel_lid_ratio(alpha) > 1.0

    @pytest.mark.parametrize("alpha", [0.4, 0.9, 1.7])
    def test_two_path_agreement(self, alpha):
        quadr = lids.bessel_lid_ratio(alpha)
        closed = lids.closed_form_lid_ratio(alpha)
        assert abs(quadr - closed) < 1e-9

    def test_closed_form_golden_at_one(self):
        assert abs(lids.closed_form_lid_ratio(1.0) - 1.296911150621923474482) < 1e-14

    def test_no_lid_beats_the_eigen_pipelines(self):
        for alpha in (0.3, 0.5, 0.787, 1.2, 2.0):
            assert lids.bessel_lid_ratio(alpha, tol=1e-8) >= 1.2771 - 1e-3

    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            lids.bessel_lid_ratio(0.0)


class TestTransformConsistency:
    def test_lid_transform_matches_piecewise_form(self):
        # transform of the half-order lid against its displayed piecewise form
        fb = sf.f_half_band()
        for xi in (0.0, 0.25, 0.8, 1.2):
            osc = quad.TrigTail(valid_from=1.0)
            osc.add(2.0 * xi, 0, c=1.0)
            tail = fb.trig_tail * osc
            r = quad.hybrid_line_integral(
                lambda x: sf.f_half(x) * np.cos(2.0 * math.pi * xi * x), tail,
                tol=1e-10, X=40.5)
            assert abs(r.value - sf.f_half_hat(xi)) < 1e-7


class TestMinimize:
    def test_optimum_location_and_value(self):
        m = lids.minimize_alpha(0.3, 2.0, tol=1e-4)
        assert abs(m.alpha - 0.787) <= 1e-3 + 2e-4
        assert abs(m.ratio - 1.284) <= 1e-3
        assert m.boundary is None
        assert m.unimodal

    def test_degenerate_window(self):
        m = lids.minimize_alpha(0.7, 0.7 + 5e-5, tol=1e-4)
        assert abs(m.alpha - (0.7 + 2.5e-5)) < 1e-6

    def test_boundary_minimum_flagged(self):
        # the ratio decreases through [0.5, 0.6]: minimum pinned at the edge
        m = lids.minimize_alpha(0.5, 0.6, tol=1e-4)
        assert m.boundary == "hi"
        assert abs(m.alpha - 0.6) < 1e-3

    def test_rejects_bad_window(self):
        with pytest.raises(ValueError):
            lids.minimize_alpha(1.0, 0.5)
