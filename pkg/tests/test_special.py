"""Series/integral kernels against independent oracles and identities."""

import math

import mpmath
import pytest

from polyspec import special as sp


def brute_theta3(q, terms=50):
    return 1.0 + 2.0 * sum(q ** (n * n) for n in range(1, terms + 1))


def brute_theta2(q, terms=50):
    return 2.0 * sum(q ** ((n + 0.5) ** 2) for n in range(terms + 1))


def brute_theta4(q, terms=50):
    return 1.0 + 2.0 * sum((-1) ** n * q ** (n * n) for n in range(1, terms + 1))


class TestTheta:
    def test_theta3_small_nome_tends_to_one(self):
        assert sp.theta3(1e-12).value == pytest.approx(1.0, abs=1e-11)

    def test_theta3_classical_value(self):
        # Theta3(e^-pi) = pi^(1/4)/Gamma(3/4)
        got = sp.theta3(math.exp(-math.pi)).value
        assert got == pytest.approx(math.pi**0.25 / math.gamma(0.75), abs=1e-13)
        assert got == pytest.approx(brute_theta3(math.exp(-math.pi)), abs=1e-14)

    def test_theta3_at_half(self):
        assert sp.theta3(0.5).value == pytest.approx(brute_theta3(0.5), abs=1e-14)
        assert sp.theta3(0.5).value == pytest.approx(2.1289368272118736, abs=1e-12)

    def test_theta2_small_nome_tends_to_zero(self):
        assert sp.theta2(1e-12).value == pytest.approx(0.0, abs=1e-2)

    def test_theta2_at_half(self):
        assert sp.theta2(0.5).value == pytest.approx(brute_theta2(0.5), abs=1e-14)
        assert sp.theta2(0.5).value == pytest.approx(2.1289312505130273, abs=1e-12)

    def test_jacobi_quartic_identity(self):
        # Theta3^4 = Theta2^4 + Theta4^4
        for q in (math.exp(-math.pi), 0.3, 0.05):
            t3 = sp.theta3(q).value
            t2 = sp.theta2(q).value
            t4 = brute_theta4(q)
            assert t3**4 == pytest.approx(t2**4 + t4**4, rel=1e-13)

    @pytest.mark.parametrize("x", [0.3, 1.0, 2.7, 10.0])
    def test_poisson_duality(self, x):
        lhs = sp.theta3(math.exp(-math.pi * x)).value
        rhs = x**-0.5 * sp.theta3(math.exp(-math.pi / x)).value
        assert abs(lhs - rhs) < 1e-12

    @pytest.mark.parametrize("q", [-0.1, 0.0, 1.0, 1.5])
    def test_domain_errors(self, q):
        with pytest.raises(ValueError):
            sp.theta3(q)
        with pytest.raises(ValueError):
            sp.theta2(q)

    def test_nome_from_rate(self):
        assert sp.nome_from_rate(2.0) == pytest.approx(math.exp(-2.0))
        with pytest.raises(ValueError):
            sp.nome_from_rate(0.0)


class TestDedekindEta:
    def test_eta_i_classical(self):
        # eta(i) = Gamma(1/4)/(2 pi^(3/4))
        want = math.gamma(0.25) / (2.0 * math.pi**0.75)
        assert sp.dedekind_eta(1.0).value == pytest.approx(want, abs=1e-14)

    def test_eta_2i_classical(self):
        # eta(2i) = Gamma(1/4)/(2^(11/8) pi^(3/4))
        want = math.gamma(0.25) / (2.0 ** (11.0 / 8.0) * math.pi**0.75)
        assert sp.dedekind_eta(2.0).value == pytest.approx(want, abs=1e-14)

    def test_large_ratio_leading_behavior(self):
        ratio = 40.0
        got = sp.dedekind_eta(ratio).value
        assert got == pytest.approx(math.exp(-math.pi * ratio / 12.0), rel=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            sp.dedekind_eta(0.0)

    def test_hexagonal_point_two_term_truncation(self):
        x = math.exp(-math.pi * math.sqrt(3.0))
        two_terms = math.exp(-math.pi * math.sqrt(3.0) / 24.0) * (1.0 + x)
        full = sp.abs_eta_hexagonal().value
        assert two_terms == pytest.approx(0.8005943719418485, abs=1e-12)
        # remaining factors change the value only at the x^2 scale
        assert abs(full - two_terms) < 2.0 * x**2

    def test_hexagonal_point_log_form(self):
        x = math.exp(-math.pi * math.sqrt(3.0))
        log_series = -math.pi * math.sqrt(3.0) / 24.0 + sum(
            math.log(1.0 + (-1) ** (n + 1) * x**n) for n in range(1, 40)
        )
        assert math.log(sp.abs_eta_hexagonal().value) == pytest.approx(
            log_series, abs=1e-14
        )


class TestDivisorSums:
    @pytest.mark.parametrize("n,want", [(1, 1), (6, 12), (12, 28), (97, 98)])
    def test_sigma1(self, n, want):
        assert sp.sigma1(n) == want

    def test_sigma1_domain(self):
        with pytest.raises(ValueError):
            sp.sigma1(0)

    def test_sigma1_against_brute_force(self):
        for n in range(1, 200):
            assert sp.sigma1(n) == sum(d for d in range(1, n + 1) if n % d == 0)

    def test_weighted_sum_large_rate_leading_term(self):
        x = 40.0
        got = sp.divisor_weighted_sum(x).value
        assert got == pytest.approx(math.exp(-x), rel=1e-12)
        got_alt = sp.divisor_weighted_sum(x, alternating=True).value
        assert got_alt == pytest.approx(-math.exp(-x), rel=1e-12)

    @pytest.mark.parametrize("x", [1.0, 2.0, 2.0 * math.pi])
    def test_log_product_identity(self, x):
        # -sum log(1 - e^{-nx}) equals the divisor-weighted series
        series = sp.divisor_weighted_sum(x, tol=1e-16).value
        product = -sum(
            math.log(1.0 - math.exp(-n * x)) for n in range(1, 60)
        )
        assert series == pytest.approx(product, abs=1e-12)

    def test_alternating_log_product_identity(self):
        x = math.pi * math.sqrt(3.0)
        series = sp.divisor_weighted_sum(x, alternating=True, tol=1e-16).value
        product = -sum(
            math.log(1.0 + (-1) ** (n + 1) * math.exp(-n * x))
            for n in range(1, 40)
        )
        assert series == pytest.approx(product, abs=1e-13)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            sp.divisor_weighted_sum(0.0)


class TestBesselK:
    @pytest.mark.parametrize("z", [0.5, 1.0, 2.0, 10.0])
    def test_half_order_closed_form(self, z):
        # K_{1/2}(z) = sqrt(pi/(2z)) e^{-z}
        want = math.sqrt(math.pi / (2.0 * z)) * math.exp(-z)
        got = sp.bessel_k(0.5, z, tol=1e-14)
        assert abs(got.value - want) <= max(got.tail_bound, 1e-13)

    def test_k12_at_two(self):
        got = sp.bessel_k(0.5, 2.0).value
        assert got == pytest.approx(math.sqrt(math.pi / 4.0) * math.exp(-2.0), abs=1e-12)

    @pytest.mark.parametrize("order,z", [(0.0, 1.0), (0.2, 2.0 * math.pi), (1.5, 3.0)])
    def test_against_mpmath(self, order, z):
        want = float(mpmath.besselk(order, z))
        assert sp.bessel_k(order, z, tol=1e-14).value == pytest.approx(want, abs=1e-13)

    def test_k0_at_one(self):
        assert sp.bessel_k(0.0, 1.0).value == pytest.approx(0.42102443824070834, abs=1e-12)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            sp.bessel_k(0.5, 0.0)


class TestExpSymmetricIntegral:
    @pytest.mark.parametrize("a", [1.0, 2.0])
    @pytest.mark.parametrize("b", [1.0, 2.0])
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_closed_form_at_zero(self, a, b, n):
        got = sp.exp_symmetric_integral(a, b, n, 0.0, tol=1e-13)
        want = math.sqrt(b / (a * n)) * math.exp(-2.0 * math.pi * a * n / b)
        assert abs(got.value - want) < 1e-10

    def test_specific_values(self):
        assert sp.exp_symmetric_integral(1, 1, 1, 0.0).value == pytest.approx(
            math.exp(-2.0 * math.pi), abs=1e-12
        )
        assert sp.exp_symmetric_integral(1, 2, 1, 0.0).value == pytest.approx(
            math.sqrt(2.0) * math.exp(-math.pi), abs=1e-12
        )

    def test_bessel_equivalence_away_from_zero(self):
        # at s the integral equals 2 K_{s-1/2}(2 pi a n / b)
        got = sp.exp_symmetric_integral(1, 1, 1, 0.3).value
        want = 2.0 * float(mpmath.besselk(0.2, 2.0 * math.pi))
        assert got == pytest.approx(want, abs=1e-13)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            sp.exp_symmetric_integral(0.0, 1.0, 1, 0.0)
        with pytest.raises(ValueError):
            sp.exp_symmetric_integral(1.0, 1.0, 0, 0.0)


class TestWeightedSumBoundedness:
    @pytest.mark.parametrize("s", [-0.5, -0.1, 0.0, 0.1, 0.5])
    def test_difference_quotients_bounded(self, s):
        # the s-derivative of the weighted sum stays bounded near zero
        h = 1e-3
        w_plus = sp.weighted_divisor_integral_sum(1.0, 1.0, s + h).value
        w_minus = sp.weighted_divisor_integral_sum(1.0, 1.0, s - h).value
        quotient = (w_plus - w_minus) / (2.0 * h)
        assert abs(quotient) < 1.0

    def test_quotient_stable_under_h_refinement(self):
        qs = []
        for h in (1e-2, 1e-3):
            w_plus = sp.weighted_divisor_integral_sum(1.0, 2.0, h).value
            w_minus = sp.weighted_divisor_integral_sum(1.0, 2.0, -h).value
            qs.append((w_plus - w_minus) / (2.0 * h))
        assert qs[0] == pytest.approx(qs[1], abs=1e-3)

    def test_matches_divisor_series_at_zero(self):
        got = sp.weighted_divisor_integral_sum(1.0, 1.0, 0.0).value
        want = sp.divisor_weighted_sum(2.0 * math.pi).value
        assert got == pytest.approx(want, abs=1e-12)


class TestRiemannZeta:
    @pytest.mark.parametrize(
        "s", [-4.5, -3.0, -1.9, -1.0, -0.5, 0.0, 0.5, 1.5, 2.0, 3.0, 4.0, 9.0, 20.0]
    )
    def test_against_mpmath(self, s):
        assert sp.riemann_zeta(s) == pytest.approx(float(mpmath.zeta(s)), abs=2e-12)

    def test_classical_points(self):
        assert sp.riemann_zeta(2.0) == pytest.approx(math.pi**2 / 6.0, rel=1e-15)
        assert sp.riemann_zeta(4.0) == pytest.approx(math.pi**4 / 90.0, rel=1e-15)
        assert sp.riemann_zeta(-1.0) == pytest.approx(-1.0 / 12.0, rel=1e-13)
        assert sp.riemann_zeta(0.0) == pytest.approx(-0.5, rel=1e-14)

    def test_pole_rejected(self):
        with pytest.raises(ValueError):
            sp.riemann_zeta(1.0)

    def test_rgamma(self):
        assert sp.rgamma(3.0) == pytest.approx(0.5, rel=1e-15)
        assert sp.rgamma(0.0) == 0.0
        assert sp.rgamma(-2.0) == 0.0
        assert sp.rgamma(-0.5) == pytest.approx(1.0 / float(mpmath.gamma(-0.5)), rel=1e-13)

    def test_exact_constants(self):
        assert sp.ZETA_AT_0 == -0.5
        assert sp.ZETA_PRIME_AT_0 == pytest.approx(-math.log(2.0 * math.pi) / 2.0)
        assert sp.ZETA_AT_MINUS_1 == pytest.approx(-1.0 / 12.0)
        assert sp.GAMMA_AT_MINUS_HALF == pytest.approx(-2.0 * math.sqrt(math.pi))


class TestSeriesValueContract:
    def test_refining_tolerance_moves_less_than_reported_bound(self):
        cases = [
            lambda tol: sp.theta3(0.7, tol),
            lambda tol: sp.theta2(0.7, tol),
            lambda tol: sp.dedekind_eta(0.4, tol),
            lambda tol: sp.abs_eta_hexagonal(tol),
            lambda tol: sp.divisor_weighted_sum(1.0, tol=tol),
            lambda tol: sp.divisor_weighted_sum(2.0, alternating=True, tol=tol),
            lambda tol: sp.bessel_k(0.3, 1.5, tol),
            lambda tol: sp.exp_symmetric_integral(1.0, 2.0, 1, 0.2, tol),
        ]
        for make in cases:
            coarse = make(1e-8)
            fine = make(1e-9)
            assert coarse.tail_bound <= 1e-8
            assert coarse.tail_bound >= 0.0
            assert coarse.terms_used >= 1
            assert abs(fine.value - coarse.value) <= coarse.tail_bound
