"""Spectral zeta functions and zeta-regularized determinants.

The Epstein zeta function of a positive definite binary quadratic form is
evaluated through its decomposition into two Riemann-zeta pieces plus an
exponentially convergent Bessel-K series; the spectral zeta functions of
the four integrable families reduce to such forms plus elementary
corrections.  The determinant routines evaluate both closed expressions
for the derivative at zero (a divisor series and a Dedekind-eta form) and
insist that they agree within their error budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import special
from .shapes import (
    Box,
    ConvexPolygon,
    EquilateralTriangle,
    HemiEquilateralTriangle,
    IsoscelesRightTriangle,
    Rectangle,
    ShapeSpec,
    summarize,
)
from .spectrum import (
    BoundaryCondition,
    EigenvalueList,
    UnsupportedShapeError,
    enumerate_eigenvalues,
)

__all__ = [
    "QuadraticForm",
    "ZetaResult",
    "PoleError",
    "epstein_zeta",
    "chowla_selberg_components",
    "spectral_zeta",
    "spectral_zeta_direct",
    "zeta_prime_zero",
    "determinant",
]


class PoleError(ValueError):
    """Evaluation requested at (or too close to) a pole."""


@dataclass(frozen=True)
class QuadraticForm:
    """Q(m, n) = a m^2 + b m n + c n^2, positive definite."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not (self.a > 0.0 and 4.0 * self.a * self.c - self.b * self.b > 0.0):
            raise ValueError("quadratic form must be positive definite")

    @property
    def discriminant(self) -> float:
        return 4.0 * self.a * self.c - self.b * self.b

    @property
    def min_eigenvalue(self) -> float:
        h = 0.5 * (self.a + self.c)
        d = math.hypot(0.5 * (self.a - self.c), 0.5 * self.b)
        return h - d

    def __call__(self, m: float, n: float) -> float:
        return self.a * m * m + self.b * m * n + self.c * n * n


@dataclass(frozen=True)
class ZetaResult:
    value: float
    error_bound: float
    method: str
    s: float


def _guard_s(s: float) -> None:
    if abs(s - 1.0) < 1e-3:
        raise PoleError("Epstein zeta has a simple pole at s = 1")
    if s <= -2.0:
        raise ValueError(f"supported range is s > -2, got {s}")
    for bad in (0.5, -0.5, -1.5):
        if abs(s - bad) < 1e-3:
            raise ValueError(
                f"s = {s} is too close to {bad}, where individual terms of the "
                "decomposition have cancelling singularities"
            )


def chowla_selberg_components(
    form: QuadraticForm, s: float, tol: float = 1e-13
) -> tuple[float, float, float, float]:
    """(zeta term, gamma term, Bessel series, error bound), before the
    overall a^{-s} factor.

    Writing Q = a|m + n tau|^2 with tau = u + iv, the lattice sum over
    nonzero pairs decomposes as
        2 zeta(2s) + 2 sqrt(pi) zeta(2s-1) Gamma(s-1/2) v^{1-2s} / Gamma(s)
        + (8 pi^s v^{1/2-s}/Gamma(s)) * sum_{n>=1} n^{s-1/2}
          sigma_{1-2s}(n) cos(2 pi n u) K_{s-1/2}(2 pi n v).
    """
    _guard_s(s)
    u = form.b / (2.0 * form.a)
    v = math.sqrt(form.discriminant) / (2.0 * form.a)
    rg = special.rgamma(s)

    zeta_term = 2.0 * special.riemann_zeta(2.0 * s)
    gamma_term = (
        2.0
        * math.sqrt(math.pi)
        * special.riemann_zeta(2.0 * s - 1.0)
        * math.gamma(s - 0.5)
        * v ** (1.0 - 2.0 * s)
        * rg
    )

    prefactor = 8.0 * math.pi**s * v ** (0.5 - s) * rg
    nu = abs(s - 0.5)
    two_pi_v = 2.0 * math.pi * v
    # sigma_{1-2s}(n) <= 2 n^{1/2 + max(0, 1-2s)}, so coefficients grow at
    # most like n^beta; K_nu(n x) <= K_nu(x) e^{-(n-1)x} gives a geometric
    # tail once e^{-x} (n+1)^beta/n^beta < 1.
    beta = s + max(0.0, 1.0 - 2.0 * s)
    k_first = special.bessel_k(nu, two_pi_v, tol=1e-15)
    k_first_mag = k_first.value + k_first.tail_bound

    series = 0.0
    quad_err = 0.0
    n = 0
    while True:
        n += 1
        weight = float(n) ** (s - 0.5) * special.divisor_power_sum(
            n, 1.0 - 2.0 * s
        ) * math.cos(2.0 * math.pi * n * u)
        k_tol = tol * 2.0**-n / (8.0 * max(1.0, abs(prefactor)) * max(1.0, abs(weight)))
        k = special.bessel_k(nu, two_pi_v * n, tol=max(k_tol, 1e-17))
        series += weight * k.value
        quad_err += abs(weight) * k.tail_bound
        m = n + 1
        ratio = math.exp(-two_pi_v) * ((m + 1) / m) ** max(beta, 0.0)
        if ratio < 1.0:
            tail = (
                2.0
                * float(m) ** max(beta, 0.0)
                * k_first_mag
                * math.exp(-two_pi_v * (m - 1))
                / (1.0 - ratio)
            )
            if abs(prefactor) * tail <= tol / 2.0:
                break
        if n > 10000:
            raise RuntimeError("Bessel series failed to converge")
    bessel = prefactor * series
    err = abs(prefactor) * (tail + quad_err) + 1e-15 * (
        abs(zeta_term) + abs(gamma_term) + abs(bessel)
    )
    return zeta_term, gamma_term, bessel, err


def _epstein_direct(
    form: QuadraticForm, s: float, box: int
) -> tuple[float, float]:
    """Lattice sum over |m|, |n| <= box plus an integral-comparison tail
    bound through the form's minimal eigenvalue (requires s > 1)."""
    if s <= 1.0:
        raise ValueError("direct Epstein summation needs s > 1")
    total = 0.0
    ns = np.arange(-box, box + 1, dtype=float)
    for m in range(-box, box + 1):
        q = form.a * m * m + form.b * m * ns + form.c * ns * ns
        if m == 0:
            q[box] = np.inf  # drop the origin
        total += float(np.sum(q ** (-s)))
    # Off-box points have max(|m|,|n|) = k > box; there are 8k of them per
    # shell and each has Q >= lambda_min k^2.
    lam_min = form.min_eigenvalue
    tail = 8.0 * lam_min ** (-s) * (
        box ** (2.0 - 2.0 * s) / (2.0 * s - 2.0) + float(box) ** (1.0 - 2.0 * s)
    )
    return total, tail


def epstein_zeta(
    form: QuadraticForm,
    s: float,
    tol: float = 1e-12,
    method: str = "chowla-selberg",
    box: int = 400,
) -> ZetaResult:
    """Epstein zeta: sum of Q(m,n)^{-s} over nonzero integer pairs.

    ``method="chowla-selberg"`` works for any real s in (-2, inf) away
    from s = 1 (and the cancellation points +-1/2, -3/2); "direct" does a
    box-truncated lattice sum with a rigorous tail bound, for s > 1.
    """
    if method == "chowla-selberg":
        z, g, bessel, err = chowla_selberg_components(form, s, tol=tol)
        scale = form.a ** (-s)
        return ZetaResult(
            value=scale * (z + g + bessel),
            error_bound=scale * err,
            method="chowla-selberg",
            s=s,
        )
    if method == "direct":
        _guard_s(s)
        total, tail = _epstein_direct(form, s, box)
        return ZetaResult(value=total, error_bound=tail, method="direct-sum", s=s)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Spectral zeta functions (Dirichlet spectra)
# ---------------------------------------------------------------------------


def _spectral_zeta_formula(shape: ShapeSpec, s: float, tol: float) -> ZetaResult:
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        form = QuadraticForm(1.0 / (a * a), 0.0, 1.0 / (b * b))
        lattice = epstein_zeta(form, s, tol=tol)
        zeta2s = special.riemann_zeta(2.0 * s)
        value = (
            math.pi ** (-2.0 * s)
            * (lattice.value - 2.0 * zeta2s * (a ** (2.0 * s) + b ** (2.0 * s)))
            / 4.0
        )
        err = math.pi ** (-2.0 * s) * lattice.error_bound / 4.0 + 1e-15 * abs(value)
        return ZetaResult(value, err, "chowla-selberg", s)
    if isinstance(shape, EquilateralTriangle):
        ell = shape.side
        form = QuadraticForm(1.0, -3.0, 3.0)
        lattice = epstein_zeta(form, s, tol=tol)
        scale = (9.0 * ell * ell / (16.0 * math.pi**2)) ** s / 6.0
        value = scale * (lattice.value - 6.0 * special.riemann_zeta(2.0 * s))
        err = scale * lattice.error_bound + 1e-15 * abs(value)
        return ZetaResult(value, err, "chowla-selberg", s)
    if isinstance(shape, IsoscelesRightTriangle):
        a = shape.leg
        square = _spectral_zeta_formula(Rectangle(a, a), s, tol)
        corr = (
            0.5
            * (a * a / (2.0 * math.pi**2)) ** s
            * special.riemann_zeta(2.0 * s)
        )
        value = 0.5 * square.value - corr
        return ZetaResult(
            value, 0.5 * square.error_bound + 1e-15 * abs(value), "chowla-selberg", s
        )
    if isinstance(shape, HemiEquilateralTriangle):
        ell = shape.hypotenuse
        tri = _spectral_zeta_formula(EquilateralTriangle(ell), s, tol)
        corr = (
            0.5
            * (3.0 * ell * ell / (16.0 * math.pi**2)) ** s
            * special.riemann_zeta(2.0 * s)
        )
        value = 0.5 * tri.value - corr
        return ZetaResult(
            value, 0.5 * tri.error_bound + 1e-15 * abs(value), "chowla-selberg", s
        )
    raise UnsupportedShapeError(
        f"spectral zeta has closed forms only for the integrable kinds, got {shape!r}"
    )


def spectral_zeta_direct(
    shape: ShapeSpec,
    s: float,
    tol: float = 1e-12,
    max_terms: int = 400_000,
    eigenvalues: Optional[EigenvalueList] = None,
) -> ZetaResult:
    """Direct sum over the enumerated Dirichlet spectrum, s > 1.

    The tail is bounded through N(u) <= area*u/(4 pi), which holds for
    every plane-tiling domain with the Dirichlet condition (Polya), so
    sum_{lambda > L} lambda^{-s} <= s*C*L^{1-s}/(s-1) with C = area/4 pi.
    The cutoff is capped, so the reported bound may exceed ``tol``; it is
    always honest.
    """
    if s <= 1.0:
        raise PoleError("direct spectral sums converge only for s > 1")
    area = summarize(shape).area
    weyl_c = area / (4.0 * math.pi)

    def tail_at(lam: float) -> float:
        return s * weyl_c * lam ** (1.0 - s) / (s - 1.0)

    if eigenvalues is None:
        lam = (s * weyl_c / ((s - 1.0) * tol)) ** (1.0 / (s - 1.0))
        lam = min(lam, max_terms / weyl_c)
        lam = max(lam, 200.0)
        eigenvalues = enumerate_eigenvalues(shape, BoundaryCondition.DIRICHLET, lam)
    total = sum(mult * value ** (-s) for value, mult in eigenvalues.entries)
    return ZetaResult(
        value=total,
        error_bound=tail_at(eigenvalues.cutoff),
        method="direct-sum",
        s=s,
    )


def spectral_zeta(
    shape: ShapeSpec,
    s: float,
    tol: float = 1e-12,
    cross_check: bool = True,
    eigenvalues: Optional[EigenvalueList] = None,
) -> ZetaResult:
    """Spectral zeta function of the Dirichlet spectrum.

    Evaluates the closed lattice-form expression; for s > 1 also runs the
    direct eigenvalue sum and demands agreement within the combined error
    bounds before returning.
    """
    if isinstance(shape, (Box, ConvexPolygon)):
        raise UnsupportedShapeError("spectral zeta supports the four planar kinds")
    result = _spectral_zeta_formula(shape, s, tol)
    if cross_check and s > 1.0:
        direct = spectral_zeta_direct(shape, s, tol=tol, eigenvalues=eigenvalues)
        gap = abs(result.value - direct.value)
        budget = result.error_bound + direct.error_bound + 1e-13 * abs(result.value)
        if gap > budget:
            raise ArithmeticError(
                f"zeta evaluations disagree for {shape!r} at s={s}: "
                f"|{result.value} - {direct.value}| = {gap} > {budget}"
            )
    return result


# ---------------------------------------------------------------------------
# Determinants: the two closed forms of zeta'(0)
# ---------------------------------------------------------------------------


def zeta_prime_zero(
    shape: ShapeSpec, tol: float = 1e-14
) -> tuple[ZetaResult, ZetaResult]:
    """Both closed expressions for the derivative of the spectral zeta
    function at s = 0 (Dirichlet): a divisor series and a Dedekind-eta
    form.  Raises if the two disagree beyond their combined bounds."""
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        base = 0.5 * math.log(2.0 * b) + math.pi * a / (12.0 * b)
        series = special.divisor_weighted_sum(2.0 * math.pi * a / b, tol=tol)
        v1 = base + series.value
        e1 = series.tail_bound

        eta = special.dedekind_eta(a / b, tol=tol)
        v2 = 0.5 * math.log(2.0 * b) - math.log(eta.value)
        e2 = eta.tail_bound / eta.value
    elif isinstance(shape, EquilateralTriangle):
        ell = shape.side
        base = (
            2.0 / 3.0 * math.log(1.5 * ell)
            + math.pi * math.sqrt(3.0) / 36.0
        )
        series = special.divisor_weighted_sum(
            math.pi * math.sqrt(3.0), alternating=True, tol=tol
        )
        v1 = base + 2.0 / 3.0 * series.value
        e1 = 2.0 / 3.0 * series.tail_bound

        eta = special.abs_eta_hexagonal(tol=tol)
        v2 = 2.0 / 3.0 * math.log(1.5 * ell / eta.value)
        e2 = 2.0 / 3.0 * eta.tail_bound / eta.value
    elif isinstance(shape, IsoscelesRightTriangle):
        a = shape.leg
        base = 0.25 * math.log(4.0 * a**3) + math.pi / 24.0
        series = special.divisor_weighted_sum(2.0 * math.pi, tol=tol)
        v1 = base + 0.5 * series.value
        e1 = 0.5 * series.tail_bound

        eta = special.dedekind_eta(1.0, tol=tol)
        v2 = 0.25 * math.log(4.0 * a**3) - 0.5 * math.log(eta.value)
        e2 = 0.5 * eta.tail_bound / eta.value
    elif isinstance(shape, HemiEquilateralTriangle):
        ell = shape.hypotenuse
        base = (
            5.0 / 6.0 * math.log(0.5 * ell)
            + 7.0 / 12.0 * math.log(3.0)
            + math.pi * math.sqrt(3.0) / 72.0
        )
        series = special.divisor_weighted_sum(
            math.pi * math.sqrt(3.0), alternating=True, tol=tol
        )
        v1 = base + series.value / 3.0
        e1 = series.tail_bound / 3.0

        eta = special.abs_eta_hexagonal(tol=tol)
        v2 = (
            math.log(1.5 * ell / eta.value) / 3.0
            + 0.25 * math.log(3.0)
            + 0.5 * math.log(0.5 * ell)
        )
        e2 = eta.tail_bound / (3.0 * eta.value)
    else:
        raise UnsupportedShapeError(
            "determinants have closed forms only for the integrable kinds"
        )

    scale = max(1.0, abs(v1), abs(v2))
    if abs(v1 - v2) > e1 + e2 + 64.0 * 2.3e-16 * scale:
        raise ArithmeticError(
            f"the two zeta'(0) expressions disagree for {shape!r}: {v1} vs {v2}"
        )
    first = ZetaResult(v1, e1, "closed-form-divisor-series", 0.0)
    second = ZetaResult(v2, e2, "closed-form-eta", 0.0)
    return first, second


def determinant(shape: ShapeSpec, tol: float = 1e-14) -> float:
    """Zeta-regularized determinant e^{-zeta'(0)} from the mean of the two
    agreeing closed forms."""
    first, second = zeta_prime_zero(shape, tol=tol)
    return math.exp(-0.5 * (first.value + second.value))
