"""Epstein/spectral zeta functions and regularized determinants."""

import math

import pytest

from polyspec import shapes as sh
from polyspec import special as sp
from polyspec import zeta as zt

CATALAN = 0.9159655941772190150546035149324

FOUR_SHAPES = (
    sh.Rectangle(1.0, 2.0),
    sh.EquilateralTriangle(1.0),
    sh.IsoscelesRightTriangle(1.0),
    sh.HemiEquilateralTriangle(1.0),
)


def brute_epstein(a, b, c, s, box=300):
    total = 0.0
    for m in range(-box, box + 1):
        for n in range(-box, box + 1):
            if m == 0 and n == 0:
                continue
            total += (a * m * m + b * m * n + c * n * n) ** (-s)
    return total


class TestQuadraticForm:
    def test_validation(self):
        with pytest.raises(ValueError):
            zt.QuadraticForm(1.0, 3.0, 1.0)  # indefinite
        with pytest.raises(ValueError):
            zt.QuadraticForm(-1.0, 0.0, 1.0)

    def test_min_eigenvalue(self):
        q = zt.QuadraticForm(1.0, 0.0, 4.0)
        assert q.min_eigenvalue == pytest.approx(1.0)
        q = zt.QuadraticForm(1.0, -3.0, 3.0)
        assert q.min_eigenvalue == pytest.approx(2.0 - math.hypot(1.0, 1.5))

    def test_call(self):
        q = zt.QuadraticForm(1.0, -3.0, 3.0)
        assert q(2, 1) == pytest.approx(4 - 6 + 3)


class TestEpstein:
    def test_square_lattice_s2_classical(self):
        # sum' (m^2+n^2)^{-2} = 4 zeta(2) beta(2)
        got = zt.epstein_zeta(zt.QuadraticForm(1, 0, 1), 2.0)
        want = 4.0 * (math.pi**2 / 6.0) * CATALAN
        assert got.value == pytest.approx(want, abs=1e-12)
        assert got.error_bound < 1e-12

    def test_square_lattice_s3_classical(self):
        got = zt.epstein_zeta(zt.QuadraticForm(1, 0, 1), 3.0)
        want = 4.0 * sp.riemann_zeta(3.0) * math.pi**3 / 32.0
        assert got.value == pytest.approx(want, abs=1e-12)

    @pytest.mark.parametrize("s", [1.5, 2.0, 3.0, 5.0])
    @pytest.mark.parametrize("form", [(1, 0, 1), (1, -3, 3), (0.5, 0.2, 2.0)])
    def test_direct_agrees_within_bounds(self, s, form):
        q = zt.QuadraticForm(*form)
        cs = zt.epstein_zeta(q, s)
        direct = zt.epstein_zeta(q, s, method="direct", box=250)
        assert abs(cs.value - direct.value) <= cs.error_bound + direct.error_bound

    def test_negative_s_region(self):
        # the decomposition continues below s = 0; Z(0) = -1 classically
        got = zt.epstein_zeta(zt.QuadraticForm(1, 0, 1), 1e-9)
        assert got.value == pytest.approx(-1.0, abs=1e-6)
        got = zt.epstein_zeta(zt.QuadraticForm(1, -3, 3), -0.25)
        assert math.isfinite(got.value)

    def test_pole_and_range_guards(self):
        q = zt.QuadraticForm(1, 0, 1)
        with pytest.raises(zt.PoleError):
            zt.epstein_zeta(q, 1.0)
        with pytest.raises(zt.PoleError):
            zt.epstein_zeta(q, 1.0005)
        with pytest.raises(ValueError):
            zt.epstein_zeta(q, -2.5)
        with pytest.raises(ValueError):
            zt.epstein_zeta(q, 0.5)
        with pytest.raises(zt.PoleError):
            zt.epstein_zeta(q, 0.9995, method="direct", box=10)
        with pytest.raises(ValueError):
            zt.epstein_zeta(q, 2.0, method="nonsense")

    def test_triangle_form_components_match_displayed_expansion(self):
        # the three pieces of the decomposition for m^2 - 3mn + 3n^2 at s=2:
        # 2 zeta(4); 2^{2s} sqrt(pi) zeta(3) Gamma(3/2) / (Gamma(2) 3^{3/2});
        # and the alternating Bessel/divisor series with its stated prefactor.
        s = 2.0
        z, g, bessel, _ = zt.chowla_selberg_components(
            zt.QuadraticForm(1, -3, 3), s, tol=1e-14
        )
        assert z == pytest.approx(2.0 * sp.riemann_zeta(4.0), rel=1e-14)
        want_g = (
            2.0 ** (2 * s)
            * math.sqrt(math.pi)
            * sp.riemann_zeta(2 * s - 1)
            * math.gamma(s - 0.5)
            / (math.gamma(s) * 3.0 ** (s - 0.5))
        )
        assert g == pytest.approx(want_g, rel=1e-14)
        prefactor = (
            4.0 * math.pi**s * 2.0 ** (s - 0.5)
            / (math.gamma(s) * 3.0 ** (s / 2.0 - 0.25))
        )
        series = sum(
            float(n) ** (s - 0.5)
            * sp.divisor_power_sum(n, 1.0 - 2.0 * s)
            * (-1) ** n
            * sp.exp_symmetric_integral(math.sqrt(3.0), 2.0, n, s, tol=1e-16).value
            for n in range(1, 12)
        )
        assert bessel == pytest.approx(prefactor * series, abs=1e-13)

    def test_brute_force_small_box(self):
        q = zt.QuadraticForm(1, -3, 3)
        got = zt.epstein_zeta(q, 3.0).value
        brute = brute_epstein(1, -3, 3, 3.0, box=300)
        assert got == pytest.approx(brute, abs=1e-7)  # box tail ~ 1/box^4


class TestSpectralZeta:
    def test_rectangle_direct_sum_oracle(self):
        # quadrant sum plus integral tail estimate; cells of side 1 centred
        # on the lattice points make the midpoint-rule error ~ M^{-4}
        from scipy.integrate import quad

        s = 2.0
        big_m = 400
        acc = 0.0
        for m in range(1, big_m + 1):
            for n in range(1, big_m + 1):
                acc += (m * m + n * n) ** (-s)
        edge = big_m + 0.5

        def inner(x, lo):
            # int_lo^inf (x^2+y^2)^{-2} dy in closed form
            u = lo / x
            return (math.pi / 2.0 - math.atan(u) - u / (1.0 + u * u)) / (
                2.0 * x**3
            )

        strip, _ = quad(lambda x: inner(x, 0.5), edge, math.inf, epsabs=1e-14)
        corner, _ = quad(lambda x: inner(x, edge), edge, math.inf, epsabs=1e-14)
        oracle = (acc + 2.0 * strip - corner) * math.pi ** (-4)
        got = zt.spectral_zeta(sh.Rectangle(1.0, 1.0), s)
        assert got.value == pytest.approx(oracle, abs=1e-10)

    def test_equilateral_direct_sum_oracle(self):
        s = 2.0
        big_m = 299
        acc = 0.0
        for m in range(1, big_m + 1):
            for n in range(1, big_m + 1):
                acc += (16.0 * math.pi**2 / 9.0 * (m * m + m * n + n * n)) ** (-s)
        # m^2+mn+n^2 >= m^2+n^2 for positive indices
        tail_bound = (
            2.0 * (9.0 / (16.0 * math.pi**2)) ** 2 * math.pi / 8.0 * big_m**-2
        )
        got = zt.spectral_zeta(sh.EquilateralTriangle(1.0), s)
        assert abs(got.value - acc) <= tail_bound
        assert got.value > acc

    @pytest.mark.parametrize("shape", FOUR_SHAPES)
    @pytest.mark.parametrize("s", [1.5, 2.0, 3.0, 5.0])
    def test_formula_vs_direct_within_bounds(self, shape, s):
        formula = zt.spectral_zeta(shape, s, cross_check=False)
        direct = zt.spectral_zeta_direct(shape, s, max_terms=60_000)
        assert abs(formula.value - direct.value) <= (
            formula.error_bound + direct.error_bound
        )

    @pytest.mark.parametrize("s", [2.0, 3.0])
    def test_iso_right_relation(self, s):
        z_square = zt.spectral_zeta(sh.Rectangle(1.0, 1.0), s).value
        z_iso = zt.spectral_zeta(sh.IsoscelesRightTriangle(1.0), s).value
        want = 0.5 * z_square - 0.5 * (1.0 / (2.0 * math.pi**2)) ** s * sp.riemann_zeta(2 * s)
        assert z_iso == pytest.approx(want, abs=1e-10)

    @pytest.mark.parametrize("s", [2.0, 3.0])
    def test_hemi_relation(self, s):
        z_tri = zt.spectral_zeta(sh.EquilateralTriangle(1.0), s).value
        z_hemi = zt.spectral_zeta(sh.HemiEquilateralTriangle(1.0), s).value
        want = 0.5 * z_tri - 0.5 * (3.0 / (16.0 * math.pi**2)) ** s * sp.riemann_zeta(2 * s)
        assert z_hemi == pytest.approx(want, abs=1e-10)

    def test_pole_rejected(self):
        with pytest.raises(zt.PoleError):
            zt.spectral_zeta(sh.Rectangle(1, 1), 1.0)

    def test_unsupported_shapes(self):
        with pytest.raises(zt.UnsupportedShapeError):
            zt.spectral_zeta(sh.Box((1.0, 2.0)), 2.0)
        with pytest.raises(zt.UnsupportedShapeError):
            zt.spectral_zeta(sh.regular_ngon(5), 2.0)

    def test_direct_requires_s_above_one(self):
        with pytest.raises(zt.PoleError):
            zt.spectral_zeta_direct(sh.Rectangle(1, 1), 0.9)


class TestZetaPrimeZero:
    def test_unit_square_classical_oracle(self):
        # 0.5 log(8 pi^(3/2) / Gamma(1/4)^2), the classical eta(i) value
        want = 0.5 * math.log(8.0 * math.pi**1.5 / math.gamma(0.25) ** 2)
        series_form, eta_form = zt.zeta_prime_zero(sh.Rectangle(1.0, 1.0))
        assert series_form.value == pytest.approx(want, abs=1e-13)
        assert eta_form.value == pytest.approx(want, abs=1e-13)

    def test_methods_recorded(self):
        series_form, eta_form = zt.zeta_prime_zero(sh.EquilateralTriangle(1.0))
        assert series_form.method == "closed-form-divisor-series"
        assert eta_form.method == "closed-form-eta"

    @pytest.mark.parametrize("shape", FOUR_SHAPES)
    def test_forms_agree(self, shape):
        s1, s2 = zt.zeta_prime_zero(shape)
        assert abs(s1.value - s2.value) <= 1e-12 * abs(s1.value)

    def test_parameter_grid(self):
        for p in (0.5, 1.0, 2.0):
            for q in (0.5, 1.0, 2.0):
                s1, s2 = zt.zeta_prime_zero(sh.Rectangle(p, q))
                assert abs(s1.value - s2.value) <= 1e-12 * max(1.0, abs(s1.value))
            for shape in (
                sh.EquilateralTriangle(p),
                sh.IsoscelesRightTriangle(p),
                sh.HemiEquilateralTriangle(p),
            ):
                s1, s2 = zt.zeta_prime_zero(shape)
                assert abs(s1.value - s2.value) <= 1e-12 * max(1.0, abs(s1.value))

    def test_rectangle_swap_symmetry(self):
        # the spectrum is symmetric in a <-> b, so zeta'(0) must be too,
        # even though the closed form is written asymmetrically
        a = zt.zeta_prime_zero(sh.Rectangle(0.5, 2.0))[0].value
        b = zt.zeta_prime_zero(sh.Rectangle(2.0, 0.5))[0].value
        assert a == pytest.approx(b, abs=1e-13)

    def test_hemi_reduction_to_equilateral(self):
        tri = zt.zeta_prime_zero(sh.EquilateralTriangle(1.0))[0].value
        hemi = zt.zeta_prime_zero(sh.HemiEquilateralTriangle(1.0))[0].value
        want = 0.5 * tri + 0.25 * math.log(3.0) + 0.5 * math.log(0.5)
        assert hemi == pytest.approx(want, abs=1e-13)

    def test_iso_right_series_value(self):
        got = zt.zeta_prime_zero(sh.IsoscelesRightTriangle(1.0))[0].value
        want = (
            math.log(4.0) / 4.0
            + math.pi / 24.0
            + 0.5 * sp.divisor_weighted_sum(2.0 * math.pi).value
        )
        assert got == pytest.approx(want, rel=1e-14)

    def test_hexagonal_eta_cross_check(self):
        # 2/3 log(3/(2 |eta(z)|)) equals the divisor-series form at side 1
        tri = zt.zeta_prime_zero(sh.EquilateralTriangle(1.0))
        eta = sp.abs_eta_hexagonal()
        want = 2.0 / 3.0 * math.log(1.5 / eta.value)
        assert tri[0].value == pytest.approx(want, abs=1e-12)

    def test_unsupported(self):
        with pytest.raises(zt.UnsupportedShapeError):
            zt.zeta_prime_zero(sh.Box((1.0,)))


class TestDeterminant:
    def test_unit_square(self):
        want = math.exp(-0.5 * math.log(8.0 * math.pi**1.5 / math.gamma(0.25) ** 2))
        assert zt.determinant(sh.Rectangle(1.0, 1.0)) == pytest.approx(want, rel=1e-12)

    def test_scaling_consistency(self):
        # zeta_c(s) = c^{2s} zeta(s) gives zeta_c'(0) = 2 log(c) zeta(0) + zeta'(0),
        # and zeta(0) equals the corner constant 1/4 for a rectangle
        base = zt.zeta_prime_zero(sh.Rectangle(1.0, 1.0))[0].value
        scaled = zt.zeta_prime_zero(sh.Rectangle(2.0, 2.0))[0].value
        assert scaled - base == pytest.approx(2.0 * math.log(2.0) * 0.25, abs=1e-13)
        det_ratio = zt.determinant(sh.Rectangle(2.0, 2.0)) / zt.determinant(
            sh.Rectangle(1.0, 1.0)
        )
        assert det_ratio == pytest.approx(
            math.exp(-0.5 * math.log(2.0)), rel=1e-12
        )
