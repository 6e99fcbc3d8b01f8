import math

import mpmath
import numpy as np
import pytest
from scipy.special import jv

from bandlimit import quad, specfun as sf

mpmath.mp.dps = 30


def mp_h0(x):
    u = mpmath.pi * x
    return ((108 - 25 * u ** 2) * mpmath.sin(u)
            - u * (11 * u ** 2 + 108) * mpmath.cos(u)) / (40 * u ** 5)


def mp_f0(x):
    u = mpmath.pi * x
    P = 5832 + u ** 2 * (4176 + u ** 2 * (3001 + 242 * u ** 2))
    Q = u * (-11664 + u ** 2 * (-576 - 242 * u ** 2))
    R = -5832 + u ** 2 * (7488 + 1463 * u ** 2)
    return (P + Q * mpmath.sin(2 * u) + R * mpmath.cos(2 * u)) / (12800 * mpmath.pi ** 2 * u ** 8)


class TestSinc:
    def test_values(self):
        assert sf.sinc_pw(0.0) == 1.0
        assert abs(sf.sinc_pw(1.0)) < 1e-16
        assert abs(sf.sinc_pw(0.5) - 2.0 / math.pi) < 1e-15

    def test_branch_agreement(self):
        for x in np.linspace(0.13, 0.19, 7):  # annulus around the switch u = 0.5
            direct = math.sin(math.pi * x) / (math.pi * x)
            assert abs(sf.sinc_pw(x) - direct) < 1e-14

    def test_derivative_matches_finite_difference(self):
        for x in [0.3, 1.7, 4.2]:
            fd = (sf.sinc_pw(x + 1e-6) - sf.sinc_pw(x - 1e-6)) / 2e-6
            assert abs(sf.sinc_pw_prime(x) - fd) < 1e-8
        assert sf.sinc_pw_prime(0.0) == 0.0


class TestFejer:
    def test_values(self):
        assert sf.fejer(0.0) == 1.0
        assert abs(sf.fejer(0.5) - 4.0 / math.pi ** 2) < 1e-15
        for n in (1, 2, 7):
            assert abs(sf.fejer(float(n))) < 1e-30

    def test_nonnegative(self):
        xs = np.linspace(-20, 20, 1001)
        assert np.all(sf.fejer(xs) >= 0.0)


class TestBesselG:
    def test_rejects_nonpositive_alpha(self):
        with pytest.raises(ValueError):
            sf.bessel_g(0.0, 1.0)
        with pytest.raises(ValueError):
            sf.bessel_g(-1.0, 1.0)

    def test_value_at_origin(self):
        for alpha in (0.4, 1.0, 2.5):
            expected = 1.0 / (2.0 ** alpha * math.gamma(alpha + 1.0))
            assert abs(sf.bessel_g(alpha, 0.0) - expected) < 1e-15

    def test_half_order_reduces_to_sinc(self):
        g0 = sf.bessel_g(0.5, 0.0)
        for x in (0.3, 1.7):
            assert abs(sf.bessel_g(0.5, x) / g0 - sf.sinc_pw(x)) < 1e-14

    def test_series_oracle_at_one_two(self):
        # J_1(2 pi)/(2 pi) by a 40-term power series
        z = 2.0 * math.pi
        total = 0.0
        term = (z / 2.0) / math.gamma(2.0)
        for nu in range(40):
            total += term
            term *= -(z / 2.0) ** 2 / ((nu + 1) * (nu + 2))
        assert abs(sf.bessel_g(1.0, 2.0) - total / z) < 1e-14

    @pytest.mark.parametrize("alpha", [0.35, 0.787, 1.5, 2.0])
    def test_branch_agreement_on_switch_annulus(self, alpha):
        for z in np.linspace(11.0, 13.0, 9):
            x = z / math.pi
            mine = sf.bessel_g(alpha, x)
            ref = jv(alpha, z) / z ** alpha
            assert abs(mine - ref) < 1e-10 * (1.0 + abs(ref))

    def test_derivative_identity(self):
        # d/dx [J_a(pi x)/(pi x)^a] = -pi^2 x J_{a+1}(pi x)/(pi x)^(a+1)
        for alpha in (0.6, 1.2):
            for x in (0.4, 2.2, 6.0):
                fd = (sf.bessel_g(alpha, x + 5e-7) - sf.bessel_g(alpha, x - 5e-7)) / 1e-6
                assert abs(sf.bessel_g_prime(alpha, x) - fd) < 1e-7


class TestH0:
    def test_origin(self):
        assert abs(sf.h0(0.0) - 91.0 / 600.0) < 1e-16

    def test_first_zero_bracket(self):
        roots = quad.find_roots(sf.h0, 1.0, 2.0, grid=200, tol=1e-10)
        assert len(roots) == 1
        assert abs(roots[0] - 1.5839) < 5e-4

    def test_series_branch_against_extended_precision(self):
        for x in (1e-4, 1e-2, 0.05):
            assert abs(sf.h0(x) - float(mp_h0(mpmath.mpf(float(x))))) < 1e-10

    def test_branch_agreement_on_switch_annulus(self):
        for u in np.linspace(0.9, 1.1, 11):
            x = u / math.pi
            assert abs(sf.h0(x) - float(mp_h0(mpmath.mpf(float(x))))) < 1e-13

    def test_matches_defining_transform(self):
        for x in (0.3, 1.2, 3.7):
            ref = 2 * mpmath.quad(
                lambda y: (mpmath.mpf(1) / 4 - y * y) * (1 - mpmath.mpf(9) / 5 * y * y)
                * mpmath.cos(2 * mpmath.pi * x * y), [0, mpmath.mpf(1) / 2])
            assert abs(sf.h0(x) - float(ref)) < 1e-14


class TestH0Hat:
    def test_values(self):
        assert sf.h0_hat(0.0) == 0.25
        assert sf.h0_hat(0.5) == 0.0
        assert sf.h0_hat(-0.5) == 0.0
        assert abs(sf.h0_hat(1.0 / 3.0) - 1.0 / 9.0) < 1e-15
        assert sf.h0_hat(0.7) == 0.0

    def test_transform_consistency(self):
        # numerically computed transform of h0 returns the profile
        hb = sf.h0_band()
        for xi in (0.0, 0.2, 0.49):
            osc = quad.TrigTail(valid_from=1.0)
            osc.add(2.0 * xi, 0, c=1.0)
            tail = hb.trig_tail * osc
            r = quad.hybrid_line_integral(
                lambda x: sf.h0(x) * np.cos(2 * math.pi * xi * x), tail,
                tol=1e-11, X=40.5)
            assert abs(r.value - sf.h0_hat(xi)) < 1e-8


class TestF0:
    def test_peak_is_cumulative_integral(self):
        X = 400
        ref = mpmath.quad(lambda t: t * mp_h0(t) ** 2,
                          [mpmath.mpf(n) / 2 for n in range(0, 2 * X + 1)],
                          method="gauss-legendre", maxdegree=4)
        far = (11.0 / (40.0 * math.pi ** 2)) ** 2 / (4.0 * X ** 2)
        assert abs(sf.f0(0.0) - (float(ref) + far)) < 1e-9
        assert sf.f0(0.0) > 0.0

    def test_even(self):
        for x in (0.7, 2.3, 9.1):
            assert sf.f0(x) == sf.f0(-x)

    def test_derivative_is_minus_x_h0_squared(self):
        for x in (0.5, 1.0, 3.25):
            x_mp = mpmath.mpf(float(x))
            fp = (mp_f0(x_mp + mpmath.mpf("1e-5")) - mp_f0(x_mp - mpmath.mpf("1e-5"))) / mpmath.mpf("2e-5")
            resid = abs(float(fp) + x * sf.h0(x) ** 2)
            assert resid < 1e-9

    def test_nonnegative_on_grid(self):
        xs = np.linspace(-30, 30, 1501)
        assert np.all(sf.f0(xs) >= 0.0)

    def test_branch_agreement_on_switch_annulus(self):
        for u in np.linspace(1.8, 2.2, 11):
            x = u / math.pi
            assert abs(sf.f0(x) - float(mp_f0(mpmath.mpf(float(x))))) < 1e-14 * sf.f0(0.0)


class TestFHalf:
    def test_values(self):
        assert sf.f_half(0.0) == 1.0
        assert abs(sf.f_half_hat(0.0) - 4.0 / 3.0) < 1e-15

    def test_mass_equals_profile_at_zero(self):
        fb = sf.f_half_band()
        r = quad.hybrid_line_integral(fb.eval, fb.trig_tail, tol=1e-10, X=25.5)
        assert abs(r.value - sf.f_half_hat(0.0)) < 1e-8

    def test_piecewise_profile_matches(self):
        prof = sf.F_HALF_HAT_PROFILE
        for xi in (0.0, 0.3, 0.77, 0.99):
            assert abs(prof(xi) - sf.f_half_hat(xi)) < 1e-14
        assert prof(1.2) == 0.0


class TestHk:
    def test_rejects_bad_k(self):
        with pytest.raises(ValueError):
            sf.hk(2, 0.1)
        with pytest.raises(ValueError):
            sf.hk(0, 0.1)
        with pytest.raises(ValueError):
            sf.hk(-3, 0.1)

    def test_value_at_origin(self):
        assert abs(sf.hk(1, 0.0) - 4.0 * math.sqrt(2.0) / math.pi) < 1e-15

    def test_removable_pole_by_richardson(self):
        # limit at 1/2 via offset evaluations of the raw formula
        def raw(x):
            return 4 * math.sqrt(2) * math.cos(math.pi * x) / (math.pi * (1 - 4 * x * x))
        h = 1e-6
        extrap = (raw(0.5 + h) + raw(0.5 - h)) / 2.0
        assert abs(sf.hk(1, 0.5) - extrap) < 1e-9
        assert abs(sf.hk(1, 0.5) - math.sqrt(2.0)) < 1e-14

    def test_even(self):
        for x in (0.4, 2.2):
            assert sf.hk(3, x) == sf.hk(3, -x)

    def test_matches_raw_formula_away_from_poles(self):
        for k in (1, 3, 11):
            for x in (0.2, 0.9, 4.3, 17.8):
                if abs(abs(x) - k / 2) < 1e-6:
                    continue
                raw = 4 * math.sqrt(2) * math.cos(math.pi * x) / (math.pi * (k * k - 4 * x * x))
                assert abs(sf.hk(k, x) - raw) < 1e-13 * (1 + abs(raw))

    def test_tail_form_matches(self):
        t = sf.hk_tail(7)
        for x in (8.0, 19.3):
            assert abs(sf.hk(7, x) - float(t(np.array([x]))[0])) < 1e-14


@pytest.mark.parametrize("band", ["sinc", "fejer", "h0", "f0", "f_half"])
def test_even_parity_on_random_grid(band):
    factory = {"sinc": sf.sinc_band, "fejer": sf.fejer_band, "h0": sf.h0_band,
               "f0": sf.f0_band, "f_half": sf.f_half_band}[band]
    b = factory()
    assert b.parity == "even"
    rng = np.random.default_rng(42)
    xs = rng.uniform(-50.0, 50.0, size=1000)
    left = np.asarray(b.eval(xs))
    right = np.asarray(b.eval(-xs))
    assert np.all(np.abs(left - right) <= 1e-12 * (1.0 + np.abs(left)))


@pytest.mark.parametrize("band", ["h0", "f0", "f_half", "fejer"])
def test_tail_forms_match_functions(band):
    factory = {"fejer": sf.fejer_band, "h0": sf.h0_band,
               "f0": sf.f0_band, "f_half": sf.f_half_band}[band]
    b = factory()
    xs = np.array([3.3, 7.9, 26.4])
    assert np.allclose(np.asarray(b.eval(xs)), b.trig_tail(xs), rtol=0, atol=1e-15)
