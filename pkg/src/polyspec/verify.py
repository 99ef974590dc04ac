"""One-shot verification suite: every acceptance check, pass/fail.

Each check compares implementation output against an independent oracle
(brute-force lattice sums, classical closed forms, exact rationals) or an
internal consistency identity, at a fixed tolerance.  The CLI `verify`
subcommand and the acceptance test module both run these.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import quad

from . import convergence, heat, shapes, special, spectrum, zeta
from .shapes import (
    ConvexPolygon,
    EquilateralTriangle,
    HemiEquilateralTriangle,
    IsoscelesRightTriangle,
    Rectangle,
)
from .spectrum import BoundaryCondition

__all__ = ["CheckResult", "VerificationReport", "run_suite", "CHECKS"]

_BC_BOTH = (BoundaryCondition.DIRICHLET, BoundaryCondition.NEUMANN)
_RNG_SEED = 20240815


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    expected: float
    tolerance: float
    detail: str = ""
    seconds: float = 0.0


@dataclass(frozen=True)
class VerificationReport:
    results: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            out.append(
                f"{status} {r.name}: measured={r.measured:.3e} "
                f"expected={r.expected:.3e} tol={r.tolerance:.1e} "
                f"({r.seconds:.2f}s){' ' + r.detail if r.detail else ''}"
            )
        return out


def _four_shapes():
    return (
        Rectangle(1.0, 2.0),
        EquilateralTriangle(1.0),
        IsoscelesRightTriangle(1.0),
        HemiEquilateralTriangle(1.0),
    )


# --- 1 -------------------------------------------------------------------


def check_zeta_prime_dual_agreement() -> CheckResult:
    """Both closed forms of zeta'(0) agree to 1e-12 relative, over a
    parameter grid for every shape (all nine side pairs for rectangles)."""
    grid = (0.5, 1.0, 2.0)
    worst = 0.0
    for a in grid:
        for b in grid:
            s1, s2 = zeta.zeta_prime_zero(Rectangle(a, b))
            worst = max(worst, abs(s1.value - s2.value) / abs(s1.value))
    for p in grid:
        for shape in (
            EquilateralTriangle(p),
            IsoscelesRightTriangle(p),
            HemiEquilateralTriangle(p),
        ):
            s1, s2 = zeta.zeta_prime_zero(shape)
            worst = max(worst, abs(s1.value - s2.value) / abs(s1.value))
    return CheckResult(
        "zeta-prime-dual-agreement", worst <= 1e-12, worst, 0.0, 1e-12
    )


# --- 2 -------------------------------------------------------------------


def check_unit_square_determinant() -> CheckResult:
    """zeta'(0) of the unit square against the classical eta(i) value
    0.5*log(8 pi^{3/2} / Gamma(1/4)^2)."""
    oracle = 0.5 * math.log(8.0 * math.pi**1.5 / math.gamma(0.25) ** 2)
    value = zeta.zeta_prime_zero(Rectangle(1.0, 1.0))[0].value
    diff = abs(value - oracle)
    return CheckResult("unit-square-determinant", diff <= 1e-10, diff, 0.0, 1e-10)


# --- 3 -------------------------------------------------------------------


def _epstein_bruteforce(form: zeta.QuadraticForm, s: float, box: int) -> float:
    """Box lattice sum plus the exterior integral as a tail estimate.

    With the midpoint-cell alignment (cells of side 1 centred on lattice
    points) the integral over |x| or |y| > box + 1/2 approximates the
    omitted sum with error of order the integrated Laplacian, far below
    1e-12 for box = 2000 and s >= 2.
    """
    total = 0.0
    ns = np.arange(-box, box + 1, dtype=float)
    for m in range(-box, box + 1):
        q = form.a * m * m + form.b * m * ns + form.c * ns * ns
        if m == 0:
            q[box] = np.inf
        total += float(np.sum(q ** (-s)))

    b_edge = box + 0.5
    # Q(-x, -y) = Q(x, y): the x < -B strip equals the x > B strip and
    # likewise in y, so two regions cover all four.
    # x-strip (x > B, all y): the inner integral is complete,
    # int (c y^2 + K)^{-s} dy = K^{1/2-s} c^{-1/2} sqrt(pi) G(s-1/2)/G(s)
    # with K = x^2 D/(4c), leaving an elementary x integral.
    disc = form.discriminant
    c1 = (
        form.c**-0.5
        * (disc / (4.0 * form.c)) ** (0.5 - s)
        * math.sqrt(math.pi)
        * math.gamma(s - 0.5)
        / math.gamma(s)
    )
    strip_x = c1 * b_edge ** (2.0 - 2.0 * s) / (2.0 * s - 2.0)

    # y-strip (|x| <= B, y > B), rescaled by B so the geometry is O(1).
    def inner(eta: float) -> float:
        val, _ = quad(
            lambda xi: (
                form.a * xi * xi + form.b * xi * eta + form.c * eta * eta
            )
            ** (-s),
            -1.0,
            1.0,
            epsabs=0.0,
            epsrel=1e-12,
            limit=200,
        )
        return val

    outer, _ = quad(inner, 1.0, np.inf, epsabs=1e-15, epsrel=1e-12, limit=200)
    strip_y = b_edge ** (2.0 - 2.0 * s) * outer
    return total + 2.0 * strip_x + 2.0 * strip_y


def check_chowla_selberg_vs_bruteforce() -> CheckResult:
    """Chowla-Selberg evaluation against the |m|,|n| <= 2000 lattice sum
    with integral tail, for the square and triangular forms at s = 2, 3."""
    worst = 0.0
    for form in (zeta.QuadraticForm(1, 0, 1), zeta.QuadraticForm(1, -3, 3)):
        for s in (2.0, 3.0):
            cs = zeta.epstein_zeta(form, s, tol=1e-13).value
            brute = _epstein_bruteforce(form, s, box=2000)
            worst = max(worst, abs(cs - brute))
    return CheckResult(
        "chowla-selberg-vs-bruteforce", worst <= 1e-10, worst, 0.0, 1e-10
    )


# --- 4 -------------------------------------------------------------------


def check_heat_tri_method() -> CheckResult:
    """Theta form, transformed series, and direct eigenvalue sums agree
    pairwise to 1e-12 on t in {0.05, 0.1, 0.5, 1}."""
    worst = 0.0
    for shape in (*_four_shapes(), Rectangle(1.0, 1.0)):
        for bc in _BC_BOTH:
            for t in (0.05, 0.1, 0.5, 1.0):
                v1 = heat.heat_trace(shape, bc, t, method="theta").value
                v2 = heat.heat_trace(shape, bc, t, method="transformed").value
                v3 = heat.heat_trace(shape, bc, t, method="eigsum").value
                worst = max(
                    worst, abs(v1 - v2), abs(v1 - v3), abs(v2 - v3)
                )
    return CheckResult("heat-tri-method", worst <= 1e-12, worst, 0.0, 1e-12)


# --- 5 -------------------------------------------------------------------


def check_constant_coefficients() -> CheckResult:
    """Constant heat-trace coefficients as exact rationals."""
    expected = {
        Rectangle(1.0, 1.0): Fraction(1, 4),
        Rectangle(1.0, 2.0): Fraction(1, 4),
        EquilateralTriangle(1.0): Fraction(1, 3),
        IsoscelesRightTriangle(1.0): Fraction(3, 8),
        HemiEquilateralTriangle(1.0): Fraction(5, 12),
    }
    bad = []
    for shape, frac in expected.items():
        for bc in _BC_BOTH:
            exp = heat.expansion(shape, bc, order=1)
            if exp.constant_term != frac:
                bad.append(f"{shape}: {exp.constant_term} != {frac}")
            const_terms = [
                term for term in exp.terms
                if term.exp_rate == 0.0 and term.t_power == 0.0
            ]
            if len(const_terms) != 1 or const_terms[0].coeff != float(frac):
                bad.append(f"{shape}: float constant term mismatch")
    return CheckResult(
        "constant-coefficients-exact",
        not bad,
        float(len(bad)),
        0.0,
        0.0,
        detail="; ".join(bad),
    )


# --- 6 -------------------------------------------------------------------


def check_sharp_remainder_rates() -> CheckResult:
    """fit_sharp_rate recovers (L/2)^2 within 5 percent on the fixed grid,
    all four shapes, both boundary conditions."""
    grid = (0.1, 0.05, 0.02, 0.01)
    targets = {
        Rectangle(1.0, 2.0): 1.0,
        EquilateralTriangle(1.0): 9.0 / 16.0,
        IsoscelesRightTriangle(1.0): 0.5,
        HemiEquilateralTriangle(1.0): 3.0 / 16.0,
    }
    worst = 0.0
    for shape, target in targets.items():
        for bc in _BC_BOTH:
            fit = heat.fit_sharp_rate(shape, bc, grid)
            worst = max(worst, abs(fit.c_hat - target) / target)
    return CheckResult("sharp-remainder-rates", worst <= 0.05, worst, 0.0, 0.05)


# --- 7 -------------------------------------------------------------------


def check_orbit_bijection() -> CheckResult:
    """Pairs (m, n <= 30) match canonical orbits one-to-one, and the two
    eigenvalue parametrizations produce identical multiplicity lists."""
    report = spectrum.verify_orbit_bijection(30)
    lam = 500.0 * 16.0 * math.pi**2 / 9.0
    tri = EquilateralTriangle(1.0)
    natural = spectrum.enumerate_eigenvalues(
        tri, BoundaryCondition.DIRICHLET, lam
    )
    orbits = spectrum.enumerate_eigenvalues(
        tri, BoundaryCondition.DIRICHLET, lam, parametrization="orbits"
    )
    same = natural.entries == orbits.entries
    passed = report.ok and same
    detail = "" if passed else (
        f"mismatched values: {report.mismatched_values[:5]}, lists equal: {same}"
    )
    return CheckResult(
        "orbit-bijection",
        passed,
        float(len(report.mismatched_values)),
        0.0,
        0.0,
        detail=detail,
    )


# --- 8 -------------------------------------------------------------------


def _first_canonical_orbits(count: int) -> list[tuple[int, int]]:
    reps: dict[tuple[int, int], int] = {}
    bound = 40
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) == (0, 0):
                continue
            res = spectrum.orbit_of(m, n)
            if isinstance(res, spectrum.OrbitRep):
                reps[res.rep] = res.form_value
    ordered = sorted(reps.items(), key=lambda kv: (kv[1], kv[0]))
    return [rep for rep, _ in ordered[:count]]


def check_eigenfunction_residuals() -> CheckResult:
    """Twenty admissible orbits: boundary values below 1e-10 over 300
    samples, Helmholtz residual below 1e-8."""
    worst_boundary = 0.0
    worst_pde = 0.0
    for m, n in _first_canonical_orbits(20):
        res = spectrum.eigenfunction_boundary_residual(m, n, samples=100)
        worst_boundary = max(worst_boundary, res.boundary_max)
        worst_pde = max(worst_pde, res.pde_max)
    passed = worst_boundary < 1e-10 and worst_pde < 1e-8
    return CheckResult(
        "eigenfunction-residuals",
        passed,
        worst_boundary,
        0.0,
        1e-10,
        detail=f"max Helmholtz residual {worst_pde:.2e} (tol 1e-8)",
    )


# --- 9 -------------------------------------------------------------------


def check_divisor_log_product() -> CheckResult:
    """-sum log(1-q^n) equals the divisor-weighted series, three nomes."""
    worst = 0.0
    for q in (math.exp(-2.0 * math.pi), math.exp(-math.pi * math.sqrt(3.0)), 0.3):
        x = -math.log(q)
        series = special.divisor_weighted_sum(x, tol=1e-16).value
        log_product = 0.0
        n = 1
        while q**n > 1e-19:
            log_product -= math.log(1.0 - q**n)
            n += 1
        worst = max(worst, abs(series - log_product))
    return CheckResult("divisor-log-product", worst <= 1e-12, worst, 0.0, 1e-12)


# --- 10 ------------------------------------------------------------------


def check_symmetric_integral() -> CheckResult:
    """Quadrature of the x + 1/x integral against its s = 0 closed form
    sqrt(b/(a n)) e^{-2 pi a n / b}."""
    worst = 0.0
    for a in (1.0, 2.0):
        for b in (1.0, 2.0):
            for n in (1, 2, 3):
                got = special.exp_symmetric_integral(a, b, n, 0.0, tol=1e-13)
                want = math.sqrt(b / (a * n)) * math.exp(-2.0 * math.pi * a * n / b)
                worst = max(worst, abs(got.value - want))
    return CheckResult(
        "symmetric-integral-closed-form", worst <= 1e-10, worst, 0.0, 1e-10
    )


# --- 11 ------------------------------------------------------------------


def check_inter_shape_relations() -> CheckResult:
    """Halving relations between the spectral zetas at s = 2, 3."""
    worst = 0.0
    for s in (2.0, 3.0):
        z_square = zeta.spectral_zeta(Rectangle(1.0, 1.0), s).value
        z_iso = zeta.spectral_zeta(IsoscelesRightTriangle(1.0), s).value
        rel = 0.5 * z_square - 0.5 * (1.0 / (2.0 * math.pi**2)) ** s * (
            special.riemann_zeta(2.0 * s)
        )
        worst = max(worst, abs(z_iso - rel))
        z_tri = zeta.spectral_zeta(EquilateralTriangle(1.0), s).value
        z_hemi = zeta.spectral_zeta(HemiEquilateralTriangle(1.0), s).value
        rel = 0.5 * z_tri - 0.5 * (3.0 / (16.0 * math.pi**2)) ** s * (
            special.riemann_zeta(2.0 * s)
        )
        worst = max(worst, abs(z_hemi - rel))
    return CheckResult(
        "inter-shape-zeta-relations", worst <= 1e-10, worst, 0.0, 1e-10
    )


# --- 12 ------------------------------------------------------------------


def _random_convex_polygon(rng: random.Random) -> ConvexPolygon:
    while True:
        pts = [
            (rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))
            for _ in range(rng.randint(5, 14))
        ]
        hull = _convex_hull(pts)
        if len(hull) >= 3:
            try:
                return ConvexPolygon(tuple(hull))
            except ValueError:
                continue


def _convex_hull(points: Sequence[tuple[float, float]]):
    pts = sorted(set(points))
    if len(pts) < 3:
        return []

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def build(seq):
        out: list[tuple[float, float]] = []
        for p in seq:
            while len(out) >= 2 and cross(out[-2], out[-1], p) <= 1e-9:
                out.pop()
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    return lower[:-1] + upper[:-1]


def check_ngon_dichotomy() -> CheckResult:
    """Regular n-gons: exact corner gap 1/(6(n-2)), monotone convergence
    of the first two coefficients below 1e-3 at n = 200; random convex
    polygons respect the same corner-constant lower bound."""
    rows = convergence.polygon_to_disk_experiment(range(3, 201), radius=1.0)
    problems = []
    for row in rows:
        if row.corner_gap != Fraction(1, 6 * (row.n - 2)):
            problems.append(f"gap at n={row.n}")
    for prev, cur in zip(rows, rows[1:]):
        if not cur.area_term_error < prev.area_term_error:
            problems.append(f"area error not decreasing at n={cur.n}")
        if not cur.perimeter_term_error < prev.perimeter_term_error:
            problems.append(f"perimeter error not decreasing at n={cur.n}")
    final = rows[-1]
    if not (final.area_term_error < 1e-3 and final.perimeter_term_error < 1e-3):
        problems.append("final coefficient errors not below 1e-3")

    rng = random.Random(_RNG_SEED)
    for _ in range(50):
        poly = _random_convex_polygon(rng)
        report = convergence.disk_to_polygon_gap(poly)
        if report.gap < float(report.lower_bound) - 1e-12:
            problems.append(f"random polygon below bound: {report}")
    return CheckResult(
        "ngon-dichotomy",
        not problems,
        float(len(problems)),
        0.0,
        0.0,
        detail="; ".join(problems[:3]),
    )


# --- 13 ------------------------------------------------------------------


def check_torus_poisson() -> CheckResult:
    """Both sides of the lattice trace identity, three lattices."""
    lattices = (
        np.eye(2),
        np.array([[1.0, 0.0], [0.5, math.sqrt(3.0) / 2.0]]),
        np.array([[2.0, 0.3], [0.0, 1.1]]),
    )
    worst = 0.0
    for basis in lattices:
        for t in (0.05, 0.5):
            trace = heat.torus_heat_trace(basis, t, tol=1e-14)
            worst = max(worst, trace.mismatch)
    return CheckResult("torus-poisson-identity", worst <= 1e-12, worst, 0.0, 1e-12)


# --- 14 ------------------------------------------------------------------


def check_weyl_sanity() -> CheckResult:
    """N(lambda) 4 pi/(lambda area) inside [0.9, 1.1] once N >= 5000."""
    lo, hi = 2.0, 0.0
    for shape in _four_shapes():
        area = shapes.summarize(shape).area
        lam = 5000.0 * 4.0 * math.pi / area * 1.1
        for bc in _BC_BOTH:
            ev = spectrum.enumerate_eigenvalues(shape, bc, lam)
            if ev.total_count < 5000:
                return CheckResult(
                    "weyl-sanity", False, float(ev.total_count), 5000.0, 0.0,
                    detail=f"undersized enumeration for {shape}",
                )
            ratio = spectrum.weyl_ratio(ev, lam)
            lo = min(lo, ratio)
            hi = max(hi, ratio)
    passed = 0.9 <= lo and hi <= 1.1
    return CheckResult(
        "weyl-sanity", passed, hi if hi - 1.0 > 1.0 - lo else lo, 1.0, 0.1
    )


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "zeta-prime-dual-agreement": check_zeta_prime_dual_agreement,
    "unit-square-determinant": check_unit_square_determinant,
    "chowla-selberg-vs-bruteforce": check_chowla_selberg_vs_bruteforce,
    "heat-tri-method": check_heat_tri_method,
    "constant-coefficients-exact": check_constant_coefficients,
    "sharp-remainder-rates": check_sharp_remainder_rates,
    "orbit-bijection": check_orbit_bijection,
    "eigenfunction-residuals": check_eigenfunction_residuals,
    "divisor-log-product": check_divisor_log_product,
    "symmetric-integral-closed-form": check_symmetric_integral,
    "inter-shape-zeta-relations": check_inter_shape_relations,
    "ngon-dichotomy": check_ngon_dichotomy,
    "torus-poisson-identity": check_torus_poisson,
    "weyl-sanity": check_weyl_sanity,
}


def run_suite(names: Optional[Sequence[str]] = None) -> VerificationReport:
    """Run the named checks (all of them by default) and time each."""
    selected = list(CHECKS) if not names else list(names)
    results = []
    for name in selected:
        if name not in CHECKS:
            raise ValueError(f"unknown check {name!r}; known: {', '.join(CHECKS)}")
        start = time.perf_counter()
        result = CHECKS[name]()
        elapsed = time.perf_counter() - start
        results.append(
            CheckResult(
                name=result.name,
                passed=result.passed,
                measured=result.measured,
                expected=result.expected,
                tolerance=result.tolerance,
                detail=result.detail,
                seconds=elapsed,
            )
        )
    return VerificationReport(tuple(results))
