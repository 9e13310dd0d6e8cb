from fractions import Fraction
from math import factorial, gamma, log, pi

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cartan_hartogs.domains import (CartanBase, CartanHartogsDomain, Point, ScalarXY, sample_interior,
                                    type_i)
from cartan_hartogs.errors import DomainError, ParameterError, RangeError
from cartan_hartogs.numerics import wirtinger_hessian
from cartan_hartogs.potentials import (BERGMAN, POWER, RICCI, _bergman_log_derivs, bergman_coefficients,
                                       bergman_first_second, bergman_log_kernel, bergman_log_kernel_flat,
                                       derivs_of, g_series, hua_polynomial, log_g_lambda, log_g_lambda_flat,
                                       ricci_first_second, ricci_log_g)

from conftest import ball, sample_points


class TestHuaPolynomial:
    def test_single_bracket(self):
        p = hua_polynomial(1, 1, 2.0)
        for x in (-3.0, 0.0, 1.5):
            assert p(x) == pytest.approx((x + 1) * (x + 1 + 2.0))

    def test_first_bracket_n2(self):
        k = 0.5
        p = hua_polynomial(1, 2, k)
        for x in (-2.0, 0.3, 4.0):
            assert p(x) == pytest.approx((x + 1) * (x + 1 + 2 * k) * (x + 1 + k))

    def test_two_rows(self):
        # m = n = 2, K = 1: (x+1)(x+3)(x+2)(x+4)(x+3)
        p = hua_polynomial(2, 2, 1.0)
        assert p.degree == 5
        assert sorted(p.roots) == [-4, -3, -3, -2, -1]

    @pytest.mark.parametrize("m,n,k", [(1, 1, 1.0), (2, 3, 0.5), (3, 2, 1.7)])
    def test_vanishes_at_minus_one(self, m, n, k):
        assert hua_polynomial(m, n, k).exact(-1) == 0

    def test_coefficients_match_evaluation(self):
        p = hua_polynomial(2, 2, 0.5)
        c = p.coefficients
        assert len(c) == 6 and c[-1] == 1.0
        for x in (-1.7, 0.2, 2.0):
            assert np.polyval(c[::-1], x) == pytest.approx(p(x), rel=1e-12)

    def test_invalid(self):
        with pytest.raises(ParameterError):
            hua_polynomial(0, 1, 1.0)


class TestCoefficients:
    @pytest.mark.parametrize("k", [0.5, 1.0, 1.7, 2.0])
    def test_ball_type(self, k):
        b = bergman_coefficients(1, 1, k, 1).b
        assert b.tolist() == pytest.approx([0.0, k - 1, 1.0], abs=1e-12)

    def test_unit_parameters(self):
        assert bergman_coefficients(1, 1, 1.0, 1).exact == (0, 0, 1)

    def test_frozen_two_by_two(self):
        assert bergman_coefficients(2, 2, 1.0, 1).exact == (0, 0, 0, 0, -2, 1)

    @pytest.mark.parametrize("m", [1, 2, 3])
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("k", [0.5, 1.0, 1.7, 2.0])
    def test_b0_zero_and_top_one(self, m, n, k):
        c = bergman_coefficients(m, n, k, 2)
        assert c.exact[0] == 0
        assert len(c.exact) == m * n + 2
        assert c.exact[-1] == 1

    @pytest.mark.parametrize("m,n,k", [(1, 2, 0.5), (2, 2, 1.7), (2, 3, 2.0)])
    def test_series_reproduces_polynomial(self, m, n, k):
        # sum_k b_k (-1)^k j!/(j-k)! = P(-j-1) for every j, by construction of the recurrence
        c = bergman_coefficients(m, n, k, 1)
        p = hua_polynomial(m, n, k)
        for j in range(m * n + 2):
            lhs = sum(c.exact[i] * (-1) ** i * Fraction(factorial(j), factorial(j - i)) for i in range(j + 1))
            assert lhs == p.exact(-j - 1)


class TestGSeries:
    def test_ball_values(self):
        c = bergman_coefficients(1, 1, 1.0, 1)
        assert g_series(c, ScalarXY(0.0, 1.0)) == pytest.approx((2.0, 6.0, 24.0))
        xy = ScalarXY.from_x(0.5)
        g, g1, g2 = g_series(c, xy)
        assert (g, g1, g2) == pytest.approx((2 * 8, 6 * 16, 24 * 32))

    @pytest.mark.parametrize("m,n,k,N", [(1, 1, 2.0, 1), (2, 1, 1.0, 2), (2, 2, 0.5, 1), (1, 3, 2.0, 2)])
    @pytest.mark.parametrize("x", [0.0, 0.4, 0.9])
    def test_derivatives_by_differences(self, m, n, k, N, x):
        c = bergman_coefficients(m, n, k, N)
        h = 1e-5 * (1 - x)

        def g_at(t):
            return g_series(c, ScalarXY(t, 1.0 / (1.0 - t)))[0]

        g, g1, g2 = g_series(c, ScalarXY(x, 1.0 / (1.0 - x)))
        assert (g_at(x + h) - g_at(x - h)) / (2 * h) == pytest.approx(g1, rel=1e-6)
        h = 1e-3 * (1 - x)
        d2 = (-g_at(x + 2 * h) + 16 * g_at(x + h) - 30 * g + 16 * g_at(x - h) - g_at(x - 2 * h)) / (12 * h * h)
        assert d2 == pytest.approx(g2, rel=1e-6)

    def test_overflow(self):
        c = bergman_coefficients(2, 2, 1.0, 1)
        with pytest.raises(RangeError, match="Y="):
            g_series(c, ScalarXY(1 - 1e-300, 1e300))

    def test_log_form_survives_large_y(self):
        c = bergman_coefficients(2, 2, 1.0, 1)
        logg, d1, d2 = _bergman_log_derivs(c, 1e150)
        assert np.all(np.isfinite([logg, d1, d2]))
        assert d1 > 0 and d2 > 0


class TestKernel:
    def test_ball_kernel(self):
        d = ball()
        for pt in sample_points(d, 100, x_max=0.99, seed=3):
            z, w = pt.Z[0, 0], pt.W[0]
            ref = log(2 / pi**2) - 3 * log(1 - abs(z) ** 2 - abs(w) ** 2)
            assert bergman_log_kernel(d, pt) == pytest.approx(ref, abs=1e-10)

    def test_ball_kernel_origin(self):
        assert np.exp(bergman_log_kernel(ball(), Point.origin(ball()))) == pytest.approx(2 / pi**2, rel=1e-14)

    @pytest.mark.parametrize("n,N,k", [(1, 1, 1.0), (2, 1, 0.5), (3, 2, 2.0), (2, 3, 1.7)])
    def test_origin_is_inverse_volume(self, n, N, k):
        # for m = 1 the base is the unit ball B^n and Vol = pi^(n+N) Gamma(N/K+1) / (N! Gamma(N/K+n+1))
        d = type_i(1, n, N, k)
        vol = pi ** (n + N) * gamma(N / k + 1) / (factorial(N) * gamma(N / k + n + 1))
        assert bergman_log_kernel(d, Point.origin(d)) == pytest.approx(-log(vol), abs=1e-12)

    @pytest.mark.parametrize("m,n,N,k", [(2, 2, 1, 1.0), (2, 3, 2, 0.5)])
    def test_origin_is_normalised_sum(self, m, n, N, k):
        d = type_i(m, n, N, k)
        b = bergman_coefficients(m, n, k, N).b
        total = sum(bj * factorial(N + j - 1) for j, bj in enumerate(b))
        ref = -m * n * log(k) - (m * n + N) * log(pi) + log(total)
        assert bergman_log_kernel(d, Point.origin(d)) == pytest.approx(ref, rel=1e-13)

    def test_ball_identity_constant_offset(self):
        d = ball()
        diffs = [bergman_log_kernel(d, p) - log_g_lambda(d, p) for p in sample_points(d, 100, 0.99, 8)]
        assert np.var(diffs) <= 1e-18
        assert np.mean(diffs) == pytest.approx(log(2 / pi**2), abs=1e-12)

    def test_outside(self):
        with pytest.raises(DomainError):
            bergman_log_kernel(ball(), Point(np.array([[0.9]]), np.array([0.9])))

    def test_type_i_only(self):
        d = CartanHartogsDomain(CartanBase.type_ii(2), 1, 1.0)
        with pytest.raises(ParameterError):
            bergman_log_kernel(d, Point.origin(d))

    def test_flat_matches_pointwise(self):
        d = type_i(2, 2, 1, 0.5)
        pts = sample_points(d, 6, 0.9, 4)
        flat = bergman_log_kernel_flat(d, np.array([p.flat(d) for p in pts]))
        assert flat == pytest.approx([bergman_log_kernel(d, p) for p in pts], rel=1e-12)


class TestGLambda:
    @pytest.mark.parametrize("base", [CartanBase.type_i(2, 2), CartanBase.type_ii(2),
                                      CartanBase.type_iii(3), CartanBase.type_iv(2)])
    def test_origin_zero(self, base):
        d = CartanHartogsDomain(base, 2, 1.5, 2.0)
        assert log_g_lambda(d, Point.origin(d)) == 0.0

    def test_type_iv_value(self):
        d = CartanHartogsDomain(CartanBase.type_iv(2), 1, 1.0, 1.0)
        pt = Point(np.zeros((1, 2)), np.array([np.sqrt(0.5)]))
        assert log_g_lambda(d, pt) == pytest.approx(log(2.0), rel=1e-15)

    def test_flat_matches_pointwise(self):
        d = CartanHartogsDomain(CartanBase.type_iii(3), 2, 0.7, 1.3)
        pts = sample_points(d, 5, 0.9, 2)
        flat = log_g_lambda_flat(d, np.array([p.flat(d) for p in pts]))
        assert flat == pytest.approx([log_g_lambda(d, p) for p in pts], rel=1e-12)

    @pytest.mark.parametrize("base", [CartanBase.type_ii(2), CartanBase.type_iii(3), CartanBase.type_iv(3)])
    def test_hessian_positive_other_types(self, base):
        d = CartanHartogsDomain(base, 2, 1.5, 2.0)
        for pt in sample_points(d, 10, 0.9, 6):
            h = wirtinger_hessian(lambda zs: log_g_lambda_flat(d, zs), pt.flat(d), batched=True,
                                  extrapolate=True)
            assert np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0] > 0


class TestDerivs:
    def test_power_stack(self):
        d = type_i(1, 1, 1, 1.0, 3.0)
        out = derivs_of(POWER, d, ScalarXY.from_x(0.5))
        assert (out.d1, out.d2, out.d3, out.d4) == (6.0, 12.0, 48.0, 288.0)

    def test_bergman_ball_at_origin(self):
        out = derivs_of(BERGMAN, ball(), ScalarXY.from_x(0.0))
        assert out.d1 == pytest.approx(3.0, rel=1e-15)
        assert out.d3 is None

    def test_ricci_ball_at_origin(self):
        out = derivs_of(RICCI, ball(), ScalarXY.from_x(0.0))
        assert (out.d1, out.d2) == pytest.approx((3.0, 3.0), rel=1e-15)

    def test_ricci_at_y_one(self):
        d = type_i(2, 3, 2, 1.7, 4.0)
        d1, _ = ricci_first_second(d, 1.0)
        assert d1 == pytest.approx(6 * 4.0 / (4.0 + 1.7 * 5 + 2 - 4.0) + 3, rel=1e-15)

    def test_unknown_generator(self):
        with pytest.raises(ParameterError):
            derivs_of("other", ball(), ScalarXY.from_x(0.1))

    @pytest.mark.parametrize("params", [(1, 1, 1, 1.0, 3.0), (2, 2, 1, 0.5, 1.5), (2, 3, 2, 1.7, 4.0)])
    @pytest.mark.parametrize("x", [0.0, 0.5, 0.9])
    def test_first_second_by_differences(self, params, x):
        d = type_i(*params)
        coeffs = bergman_coefficients(d.m, d.n, d.K, d.N)
        fns = {
            POWER: lambda t: d.lam * np.log(1 / (1 - t)),
            BERGMAN: lambda t: float(_bergman_log_derivs(coeffs, 1 / (1 - t))[0]),
            RICCI: lambda t: float(ricci_log_g(d, 1 / (1 - t))),
        }
        y = 1 / (1 - x)
        for gen, f in fns.items():
            h = 1e-4 * (1 - x)
            num1 = (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)
            num2 = (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)
            if gen == POWER:
                d1, d2 = d.lam * y, d.lam * y * y
            elif gen == BERGMAN:
                d1, d2 = bergman_first_second(d, y)
            else:
                d1, d2 = ricci_first_second(d, y)
            assert num1 == pytest.approx(d1, rel=1e-6)
            assert num2 == pytest.approx(d2, rel=1e-5)

    @settings(max_examples=40, deadline=None)
    @given(m=st.integers(1, 3), n=st.integers(1, 3), N=st.integers(1, 3),
           k=st.sampled_from([0.5, 1.0, 1.7, 2.0]))
    def test_bergman_positivity(self, m, n, N, k):
        d = type_i(m, n, N, k)
        x = np.linspace(0.0, 0.999, 200)
        d1, d2 = bergman_first_second(d, 1 / (1 - x))
        assert np.all(d1 > 0)
        assert np.all(d1 + d2 * x > 0)

    def test_ricci_forms_positive(self):
        d = type_i(2, 3, 2, 0.5, 9.0)
        y = np.geomspace(1, 1e6, 100)
        d1, d2 = ricci_first_second(d, y)
        assert np.all(d1 > 0) and np.all(d2 > 0)
