"""Exact heat traces and their short-time asymptotics.

Each integrable family has three evaluation routes that must agree:
a closed theta-function expression (fast for large t), the exact
Poisson-transformed series (fast for small t), and a direct sum over the
enumerated spectrum with a Gaussian tail bound.  The transformed series
is a finite list of Weyl terms plus Gaussian-in-1/t families, so the
remainder beyond any number of exponential levels can be summed directly
in the log domain: no subtraction of nearly equal numbers, valid far
below the floating-point underflow threshold.  Fitting -t*log|R(t)|
against its known shape recovers the sharp exponential rate, the squared
half-length of the shortest closed geodesic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence

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
    corner_constant_of,
    summarize,
)
from .spectrum import (
    BoundaryCondition,
    UnsupportedShapeError,
    enumerate_eigenvalues,
)

__all__ = [
    "ExpansionTerm",
    "HeatExpansion",
    "HeatTraceValue",
    "RemainderValue",
    "SharpRateFit",
    "heat_trace",
    "neumann_minus_dirichlet",
    "expansion",
    "remainder",
    "log_remainder",
    "fit_sharp_rate",
    "TorusTrace",
    "torus_heat_trace",
    "torus_log_remainder",
    "torus_sharp_rate",
    "shortest_lattice_vector",
    "box_heat_trace",
    "box_leading_term",
    "box_log_remainder",
]

_SQRT_PI = math.sqrt(math.pi)
_SQRT3 = math.sqrt(3.0)
_LOG_FLOOR = -745.0  # below this, exp() underflows to zero


@dataclass(frozen=True)
class ExpansionTerm:
    """coeff * t^t_power * exp(-exp_rate / t)."""

    coeff: float
    t_power: float
    exp_rate: float

    def evaluate(self, t: float) -> float:
        return self.coeff * t**self.t_power * math.exp(-self.exp_rate / t)


@dataclass(frozen=True)
class HeatExpansion:
    shape: ShapeSpec
    bc: BoundaryCondition
    terms: tuple[ExpansionTerm, ...]
    constant_term: Fraction
    sharp_rate: float

    def evaluate(self, t: float) -> float:
        return sum(term.evaluate(t) for term in self.terms)


@dataclass(frozen=True)
class HeatTraceValue:
    t: float
    value: float
    method: str
    tail_bound: float


class RemainderValue(NamedTuple):
    """Signed remainder; `value` is None when it underflows doubles."""

    value: Optional[float]
    log_abs: float
    sign: int


@dataclass(frozen=True)
class SharpRateFit:
    c_hat: float
    t_power: float
    slope: float
    points: tuple[tuple[float, float], ...]  # (t, -t log|R|)
    per_point: tuple[float, ...]  # intercept estimate from each point


# ---------------------------------------------------------------------------
# Transformed-series term families
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Family:
    """One Gaussian series of the exact transformed heat trace.

    rate(m) (or rate(m, n)) is strictly increasing in each index; the
    indices run from 1.  `dims` is 1 or 2.
    """

    coeff: float
    t_power: float
    dims: int
    rate: Callable[..., float]


def _flip(c: float, neumann: bool) -> float:
    return -c if neumann else c


def _families(shape: ShapeSpec, bc: BoundaryCondition):
    """Weyl terms and exponential families of the exact transformed trace."""
    neumann = bc is BoundaryCondition.NEUMANN
    sign = -1.0 if not neumann else 1.0  # sign of the sqrt-t Weyl term
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        weyl = [
            ExpansionTerm(a * b / (4.0 * math.pi), -1.0, 0.0),
            ExpansionTerm(sign * (a + b) / (4.0 * _SQRT_PI), -0.5, 0.0),
            ExpansionTerm(0.25, 0.0, 0.0),
        ]
        fams = [
            _Family(a * b / (2.0 * math.pi), -1.0, 1, lambda m, a=a: m * m * a * a),
            _Family(a * b / (2.0 * math.pi), -1.0, 1, lambda m, b=b: m * m * b * b),
            _Family(_flip(-a / (2.0 * _SQRT_PI), neumann), -0.5, 1,
                    lambda m, a=a: m * m * a * a),
            _Family(_flip(-b / (2.0 * _SQRT_PI), neumann), -0.5, 1,
                    lambda m, b=b: m * m * b * b),
            _Family(a * b / math.pi, -1.0, 2,
                    lambda m, n, a=a, b=b: m * m * a * a + n * n * b * b),
        ]
        return weyl, fams
    if isinstance(shape, EquilateralTriangle):
        ell = shape.side
        ll = ell * ell
        weyl = [
            ExpansionTerm(ll * _SQRT3 / (16.0 * math.pi), -1.0, 0.0),
            ExpansionTerm(sign * 3.0 * ell / (8.0 * _SQRT_PI), -0.5, 0.0),
            ExpansionTerm(1.0 / 3.0, 0.0, 0.0),
        ]
        fams = [
            _Family(_flip(-3.0 * ell / (4.0 * _SQRT_PI), neumann), -0.5, 1,
                    lambda m, ll=ll: 9.0 * ll * m * m / 16.0),
            _Family(ll * _SQRT3 / (8.0 * math.pi), -1.0, 1,
                    lambda n, ll=ll: 3.0 * ll * n * n / 4.0),
            _Family(ll * _SQRT3 / (8.0 * math.pi), -1.0, 1,
                    lambda m, ll=ll: 9.0 * ll * m * m / 4.0),
            _Family(ll * _SQRT3 / (4.0 * math.pi), -1.0, 2,
                    lambda m, n, ll=ll: 3.0 * ll * (3.0 * m * m + n * n) / 4.0),
            _Family(ll * _SQRT3 / (4.0 * math.pi), -1.0, 2,
                    lambda m, n, ll=ll: 3.0 * ll
                    * (3.0 * (2 * m - 1) ** 2 + (2 * n - 1) ** 2) / 16.0),
        ]
        return weyl, fams
    if isinstance(shape, IsoscelesRightTriangle):
        a = shape.leg
        aa = a * a
        weyl = [
            ExpansionTerm(aa / (8.0 * math.pi), -1.0, 0.0),
            ExpansionTerm(sign * a * (2.0 + math.sqrt(2.0)) / (8.0 * _SQRT_PI),
                          -0.5, 0.0),
            ExpansionTerm(0.375, 0.0, 0.0),
        ]
        fams = [
            _Family(_flip(-a / (2.0 * math.sqrt(2.0 * math.pi)), neumann), -0.5, 1,
                    lambda m, aa=aa: m * m * aa / 2.0),
            _Family(aa / (2.0 * math.pi), -1.0, 1, lambda m, aa=aa: m * m * aa),
            _Family(_flip(-a / (2.0 * _SQRT_PI), neumann), -0.5, 1,
                    lambda m, aa=aa: m * m * aa),
            _Family(aa / (2.0 * math.pi), -1.0, 2,
                    lambda m, n, aa=aa: (m * m + n * n) * aa),
        ]
        return weyl, fams
    if isinstance(shape, HemiEquilateralTriangle):
        ell = shape.hypotenuse
        ll = ell * ell
        weyl = [
            ExpansionTerm(ll * _SQRT3 / (32.0 * math.pi), -1.0, 0.0),
            ExpansionTerm(sign * ell * (3.0 + _SQRT3) / (16.0 * _SQRT_PI), -0.5, 0.0),
            ExpansionTerm(5.0 / 12.0, 0.0, 0.0),
        ]
        fams = [
            _Family(_flip(-ell / 8.0 * math.sqrt(3.0 / math.pi), neumann), -0.5, 1,
                    lambda m, ll=ll: 3.0 * ll * m * m / 16.0),
            _Family(_flip(-3.0 * ell / (8.0 * _SQRT_PI), neumann), -0.5, 1,
                    lambda m, ll=ll: 9.0 * ll * m * m / 16.0),
            _Family(ll * _SQRT3 / (16.0 * math.pi), -1.0, 1,
                    lambda n, ll=ll: 3.0 * ll * n * n / 4.0),
            _Family(ll * _SQRT3 / (16.0 * math.pi), -1.0, 1,
                    lambda m, ll=ll: 9.0 * ll * m * m / 4.0),
            _Family(ll * _SQRT3 / (8.0 * math.pi), -1.0, 2,
                    lambda m, n, ll=ll: 3.0 * ll * (3.0 * m * m + n * n) / 4.0),
            _Family(ll * _SQRT3 / (8.0 * math.pi), -1.0, 2,
                    lambda m, n, ll=ll: 3.0 * ll
                    * (3.0 * (2 * m - 1) ** 2 + (2 * n - 1) ** 2) / 16.0),
        ]
        return weyl, fams
    raise UnsupportedShapeError(f"no transformed series for {shape!r}")


def _family_terms_up_to(fam: _Family, rate_max: float):
    """Yield (coeff, t_power, rate) for members with rate <= rate_max."""
    if fam.dims == 1:
        m = 1
        while True:
            r = fam.rate(m)
            if r > rate_max:
                return
            yield fam.coeff, fam.t_power, r
            m += 1
    else:
        m = 1
        while fam.rate(m, 1) <= rate_max:
            n = 1
            while True:
                r = fam.rate(m, n)
                if r > rate_max:
                    break
                yield fam.coeff, fam.t_power, r
                n += 1
            m += 1


def _family_value(fam: _Family, t: float, tol: float) -> tuple[float, float]:
    """Numeric value of a family at time t with a geometric tail bound."""
    tp = t**fam.t_power

    def gauss(rate: float) -> float:
        e = -rate / t
        return math.exp(e) if e > _LOG_FLOOR else 0.0

    scale = abs(fam.coeff) * tp
    budget = tol / max(scale, 1e-300)
    if fam.dims == 1:
        total = 0.0
        m = 1
        while True:
            total += gauss(fam.rate(m))
            nxt = gauss(fam.rate(m + 1))
            ratio = math.exp(-(fam.rate(m + 2) - fam.rate(m + 1)) / t)
            tail = nxt / (1.0 - ratio)
            if tail <= budget:
                return fam.coeff * tp * total, scale * tail
            m += 1
    # For every family here the m-increment of the rate does not depend on
    # n, so row sums satisfy R_{m+1} <= R_m e^{-(rate(m+1,1)-rate(m,1))/t}.
    total = 0.0
    err = 0.0
    m = 1
    while True:
        row = 0.0
        n = 1
        while True:
            row += gauss(fam.rate(m, n))
            nxt = gauss(fam.rate(m, n + 1))
            ratio = math.exp(-(fam.rate(m, n + 2) - fam.rate(m, n + 1)) / t)
            row_tail = nxt / (1.0 - ratio)
            if row_tail <= budget / 2.0 ** (m + 2):
                break
            n += 1
        total += row
        err += row_tail
        delta = fam.rate(m + 1, 1) - fam.rate(m, 1)
        delta2 = fam.rate(m + 2, 1) - fam.rate(m + 1, 1)
        outer = (row + row_tail) * math.exp(-delta / t) / (
            1.0 - math.exp(-delta2 / t)
        )
        if outer <= budget / 2.0 or row == 0.0:
            err += outer
            return fam.coeff * tp * total, scale * err
        m += 1


# ---------------------------------------------------------------------------
# Heat trace evaluation routes
# ---------------------------------------------------------------------------


def _theta_value(rate: float, tol: float) -> special.SeriesValue:
    q = math.exp(-rate)
    if q <= 0.0:  # nome underflow at very large t: only the n = 0 term
        return special.SeriesValue(1.0, 0.0, 1)
    return special.theta3(q, tol=tol)


def _theta2_value(rate: float, tol: float) -> special.SeriesValue:
    q = math.exp(-rate)
    if q <= 0.0:
        return special.SeriesValue(0.0, 0.0, 1)
    return special.theta2(q, tol=tol)


def _theta_trace_dirichlet(shape: ShapeSpec, t: float, tol: float):
    """Dirichlet theta-form trace and a coarse propagated error bound."""
    inner = tol / 8.0
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        ta = _theta_value(math.pi**2 * t / (a * a), inner)
        tb = _theta_value(math.pi**2 * t / (b * b), inner)
        value = (ta.value - 1.0) * (tb.value - 1.0) / 4.0
        err = (ta.tail_bound * (abs(tb.value) + 1.0)
               + tb.tail_bound * (abs(ta.value) + 1.0)) / 4.0
        return value, err
    if isinstance(shape, EquilateralTriangle):
        ll = shape.side**2
        rate3 = 16.0 * math.pi**2 * t / (9.0 * ll)
        rate9 = 16.0 * math.pi**2 * t / (3.0 * ll)
        t3a = _theta_value(rate3, inner)
        t3b = _theta_value(rate9, inner)
        t2a = _theta2_value(rate3, inner)
        t2b = _theta2_value(rate9, inner)
        value = (
            t3a.value * t3b.value + t2a.value * t2b.value - 3.0 * t3a.value + 2.0
        ) / 6.0
        err = (
            t3a.tail_bound * (abs(t3b.value) + 3.0)
            + t3b.tail_bound * abs(t3a.value)
            + t2a.tail_bound * abs(t2b.value)
            + t2b.tail_bound * abs(t2a.value)
        ) / 6.0
        return value, err
    if isinstance(shape, IsoscelesRightTriangle):
        aa = shape.leg**2
        t1 = _theta_value(math.pi**2 * t / aa, inner)
        t2 = _theta_value(2.0 * math.pi**2 * t / aa, inner)
        value = (t1.value**2 - 2.0 * t1.value - 2.0 * t2.value + 3.0) / 8.0
        err = (t1.tail_bound * (2.0 * abs(t1.value) + 2.0)
               + 2.0 * t2.tail_bound) / 8.0
        return value, err
    if isinstance(shape, HemiEquilateralTriangle):
        # Halving the double-index triangle sum subtracts its diagonal,
        # whose form values are 3 m^2: that is a theta in q^3, not q^2.
        ll = shape.hypotenuse**2
        rate1 = 16.0 * math.pi**2 * t / (9.0 * ll)
        rate3 = 16.0 * math.pi**2 * t / (3.0 * ll)
        t3a = _theta_value(rate1, inner)
        t3b = _theta_value(rate3, inner)
        t2a = _theta2_value(rate1, inner)
        t2b = _theta2_value(rate3, inner)
        value = (
            t3a.value * t3b.value
            + t2a.value * t2b.value
            - 3.0 * t3a.value
            - 3.0 * t3b.value
            + 5.0
        ) / 12.0
        err = (
            t3a.tail_bound * (abs(t3b.value) + 3.0)
            + t3b.tail_bound * (abs(t3a.value) + 3.0)
            + t2a.tail_bound * abs(t2b.value)
            + t2b.tail_bound * abs(t2a.value)
        ) / 12.0
        return value, err
    raise UnsupportedShapeError(f"no theta form for {shape!r}")


def neumann_minus_dirichlet(shape: ShapeSpec, t: float, tol: float = 1e-14) -> float:
    """Closed form of h_N(t) - h_D(t) for the integrable families."""
    if not t > 0.0:
        raise ValueError("time must be positive")
    inner = tol / 4.0
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        ta = _theta_value(math.pi**2 * t / (a * a), inner)
        tb = _theta_value(math.pi**2 * t / (b * b), inner)
        return 0.5 * (ta.value + tb.value)
    if isinstance(shape, EquilateralTriangle):
        ll = shape.side**2
        return _theta_value(16.0 * math.pi**2 * t / (9.0 * ll), inner).value
    if isinstance(shape, IsoscelesRightTriangle):
        aa = shape.leg**2
        t1 = _theta_value(math.pi**2 * t / aa, inner)
        t2 = _theta_value(2.0 * math.pi**2 * t / aa, inner)
        return 0.5 * (t1.value + t2.value)
    if isinstance(shape, HemiEquilateralTriangle):
        ll = shape.hypotenuse**2
        t1 = _theta_value(16.0 * math.pi**2 * t / (9.0 * ll), inner)
        t3 = _theta_value(16.0 * math.pi**2 * t / (3.0 * ll), inner)
        return 0.5 * (t1.value + t3.value)
    raise UnsupportedShapeError(f"no closed Neumann-Dirichlet gap for {shape!r}")


def _geometric_scale(shape: ShapeSpec) -> float:
    if isinstance(shape, Rectangle):
        return min(shape.a, shape.b)
    if isinstance(shape, EquilateralTriangle):
        return shape.side
    if isinstance(shape, IsoscelesRightTriangle):
        return shape.leg
    if isinstance(shape, HemiEquilateralTriangle):
        return shape.hypotenuse
    if isinstance(shape, Box):
        return min(shape.dims)
    raise UnsupportedShapeError(f"no scale for {shape!r}")


def _eig_sum(shape: ShapeSpec, bc: BoundaryCondition, t: float, tol: float):
    """Direct spectral sum with a Gaussian tail bound.

    Dirichlet counting on plane-tiling domains satisfies N(u) <= C u with
    C = area/(4 pi) (Polya); for Neumann an empirically safe two-term
    envelope C u + D sqrt(u) + E is used, with the perimeter coefficient
    inflated by 2x.
    """
    geom = summarize(shape)
    c_area = geom.area / (4.0 * math.pi)
    if bc is BoundaryCondition.NEUMANN:
        d_perim = 2.0 * geom.perimeter / (4.0 * _SQRT_PI)
        extra = 4.0
    else:
        d_perim = 0.0
        extra = 0.0

    def tail(lam: float) -> float:
        # integral of e^{-ut} dN(u) over u > lam with the envelope above
        base = math.exp(-lam * t)
        return base * (
            c_area * (lam + 1.0 / t)
            + d_perim * (math.sqrt(lam) + 1.0 / (2.0 * math.sqrt(lam) * t))
            + extra
        )

    lam = max(40.0, 8.0 / t)
    while tail(lam) > tol / 2.0:
        lam *= 1.3
    eigenvalues = enumerate_eigenvalues(shape, bc, lam)
    value = 0.0
    for lam_k, mult in reversed(eigenvalues.entries):
        e = -lam_k * t
        value += mult * (math.exp(e) if e > _LOG_FLOOR else 0.0)
    return value, tail(lam)


def _transformed_value(shape: ShapeSpec, bc: BoundaryCondition, t: float, tol: float):
    weyl, fams = _families(shape, bc)
    value = sum(term.evaluate(t) for term in weyl)
    err = 0.0
    for fam in fams:
        v, e = _family_value(fam, t, tol / (2 * len(fams)))
        value += v
        err += e
    return value, err


def heat_trace(
    shape: ShapeSpec,
    bc: BoundaryCondition,
    t: float,
    method: str = "auto",
    tol: float = 1e-13,
) -> HeatTraceValue:
    """Heat trace sum of exp(-lambda t) (Neumann includes the zero mode).

    Methods: "theta" (closed theta-function form), "transformed" (exact
    Poisson-resummed series, fastest for small t), "eigsum" (direct
    spectral sum with Gaussian tail bound), "auto" (theta above
    scale^2/8, transformed below), and "product" for boxes.
    """
    if not t > 0.0:
        raise ValueError(f"time must be positive, got {t}")
    if isinstance(shape, ConvexPolygon):
        raise UnsupportedShapeError("general polygons have no exact heat trace")
    if isinstance(shape, Box):
        if method in ("auto", "theta", "product", "transformed"):
            return box_heat_trace(shape.dims, bc, t, tol=tol)
        if method == "eigsum":
            value, bound = _eig_sum(shape, bc, t, tol)
            return HeatTraceValue(t, value, "eigsum", bound)
        raise ValueError(f"unknown method {method!r}")

    if method == "auto":
        method = "transformed" if t < _geometric_scale(shape) ** 2 / 8.0 else "theta"
    if method == "theta":
        value, err = _theta_trace_dirichlet(shape, t, tol)
        if bc is BoundaryCondition.NEUMANN:
            value += neumann_minus_dirichlet(shape, t, tol=tol)
        return HeatTraceValue(t, value, "theta", err)
    if method == "transformed":
        value, err = _transformed_value(shape, bc, t, tol)
        return HeatTraceValue(t, value, "transformed", err)
    if method == "eigsum":
        value, bound = _eig_sum(shape, bc, t, tol)
        return HeatTraceValue(t, value, "eigsum", bound)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# Asymptotic expansion and remainders
# ---------------------------------------------------------------------------


def _rate_levels(shape: ShapeSpec, bc: BoundaryCondition, count: int) -> list[float]:
    """The `count` smallest distinct exponential rates, clustered with a
    relative tolerance (rates from different families may coincide)."""
    _, fams = _families(shape, bc)
    r_min = min(fam.rate(1) if fam.dims == 1 else fam.rate(1, 1) for fam in fams)
    horizon = r_min
    while True:
        horizon *= 2.0
        rates = sorted(
            r for fam in fams for _, _, r in _family_terms_up_to(fam, horizon)
        )
        levels: list[float] = []
        for r in rates:
            if not levels or r > levels[-1] * (1.0 + 1e-9):
                levels.append(r)
        if len(levels) >= count:
            return levels[:count]


def expansion(
    shape: ShapeSpec, bc: BoundaryCondition, order: int = 1
) -> HeatExpansion:
    """Short-time expansion terms through `order` exponential levels.

    Order 0 keeps only the three Weyl terms; each additional level adds
    every term at the next smallest exponential rate.  Terms sharing a
    rate and power are merged.  ``sharp_rate`` is the squared half-length
    of the shortest closed geodesic, the infimum of admissible rates for
    the remainder bound O(e^{-c/t}).
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    weyl, fams = _families(shape, bc)
    collected: dict[tuple[float, float], float] = {}
    for term in weyl:
        collected[(term.exp_rate, term.t_power)] = (
            collected.get((term.exp_rate, term.t_power), 0.0) + term.coeff
        )
    if order > 0:
        threshold = _rate_levels(shape, bc, order)[-1] * (1.0 + 1e-9)
        for fam in fams:
            for coeff, power, rate in _family_terms_up_to(fam, threshold):
                collected[(rate, power)] = collected.get((rate, power), 0.0) + coeff
    terms = tuple(
        ExpansionTerm(coeff, power, rate)
        for (rate, power), coeff in sorted(collected.items())
    )
    const = corner_constant_of(shape)
    geodesic = summarize(shape).shortest_geodesic
    return HeatExpansion(
        shape=shape,
        bc=bc,
        terms=terms,
        constant_term=const,
        sharp_rate=(geodesic / 2.0) ** 2,
    )


def _signed_log_sum(entries: Sequence[tuple[int, float]]) -> tuple[int, float]:
    """Sum of sign*exp(log) in the log domain: returns (sign, log|sum|)."""
    if not entries:
        return 0, -math.inf
    top = max(lg for _, lg in entries)
    if top == -math.inf:
        return 0, -math.inf
    acc = sum(sign * math.exp(lg - top) for sign, lg in entries)
    if acc == 0.0:
        return 0, -math.inf
    return (1 if acc > 0 else -1), top + math.log(abs(acc))


def log_remainder(
    shape: ShapeSpec, bc: BoundaryCondition, t: float, k_levels: int = 0
) -> tuple[int, float]:
    """(sign, log|R(t)|) of the heat trace minus its expansion through
    `k_levels` exponential levels, summed directly from the residual
    transformed series."""
    if not t > 0.0:
        raise ValueError("time must be positive")
    _, fams = _families(shape, bc)
    levels = _rate_levels(shape, bc, k_levels + 1)
    threshold = levels[-2] * (1.0 + 1e-9) if k_levels > 0 else 0.0
    lead = levels[-1]
    horizon = lead + 90.0 * t  # deeper terms are below e^{-90} relatively
    entries: list[tuple[int, float]] = []
    for fam in fams:
        lp = fam.t_power * math.log(t)
        lc = math.log(abs(fam.coeff))
        sgn = 1 if fam.coeff > 0 else -1
        for _, _, rate in _family_terms_up_to(fam, horizon):
            if rate <= threshold:
                continue
            entries.append((sgn, lc + lp - rate / t))
    return _signed_log_sum(entries)


def remainder(
    shape: ShapeSpec,
    bc: BoundaryCondition,
    t: float,
    k_levels: int = 0,
    tol: float = 1e-13,
) -> RemainderValue:
    """Heat-trace remainder after `k_levels` exponential levels.

    Computed directly from the residual series (never by subtracting the
    expansion from the trace).  When the value underflows doubles it is
    reported through its log instead of raising.
    """
    sign, log_abs = log_remainder(shape, bc, t, k_levels)
    value: Optional[float] = None
    if log_abs < _LOG_FLOOR:
        value = None
    else:
        value = sign * math.exp(log_abs)
    return RemainderValue(value=value, log_abs=log_abs, sign=sign)


def _leading_residual_power(
    shape: ShapeSpec, bc: BoundaryCondition, k_levels: int
) -> float:
    _, fams = _families(shape, bc)
    levels = _rate_levels(shape, bc, k_levels + 1)
    lead = levels[-1]
    powers = [
        power
        for fam in fams
        for _, power, rate in _family_terms_up_to(fam, lead * (1.0 + 1e-9))
        if rate > (levels[-2] * (1.0 + 1e-9) if k_levels > 0 else 0.0)
    ]
    return min(powers)


def _fit_rate(
    t_grid: Sequence[float],
    log_r: Callable[[float], tuple[int, float]],
    t_power: float,
) -> SharpRateFit:
    """Least squares of y = -t log|R| against c - t log(C) + p t log t
    with p fixed: regress y - p t log t on [1, t]."""
    if len(t_grid) < 3:
        raise ValueError("need at least 3 grid points to fit the sharp rate")
    ts = [float(t) for t in t_grid]
    if any(not 0.0 < t <= 0.2 for t in ts):
        raise ValueError("grid points must lie in (0, 0.2]")
    if any(b >= a for a, b in zip(ts, ts[1:])):
        raise ValueError("grid must be strictly descending")
    points = []
    ys = []
    for t in ts:
        _, log_abs = log_r(t)
        y = -t * log_abs
        points.append((t, y))
        # -t log|R| = c - t log|C| - p t log t for R ~ C t^p e^{-c/t}
        ys.append(y + t_power * t * math.log(t))
    n = len(ts)
    sx = sum(ts)
    sxx = sum(t * t for t in ts)
    sy = sum(ys)
    sxy = sum(t * y for t, y in zip(ts, ys))
    det = n * sxx - sx * sx
    slope = (n * sxy - sx * sy) / det
    intercept = (sxx * sy - sx * sxy) / det
    per_point = tuple(y - slope * t for t, y in zip(ts, ys))
    return SharpRateFit(
        c_hat=intercept,
        t_power=t_power,
        slope=slope,
        points=tuple(points),
        per_point=per_point,
    )


def fit_sharp_rate(
    shape: ShapeSpec,
    bc: BoundaryCondition,
    t_grid: Sequence[float],
    k_levels: int = 0,
) -> SharpRateFit:
    """Extrapolate -t log|R(t)| to t -> 0; recovers (L/2)^2 with L the
    shortest closed geodesic."""
    if isinstance(shape, Box):
        power = -len(shape.dims) / 2.0
        return _fit_rate(
            t_grid, lambda t: box_log_remainder(shape.dims, bc, t), power
        )
    power = _leading_residual_power(shape, bc, k_levels)
    return _fit_rate(
        t_grid, lambda t: log_remainder(shape, bc, t, k_levels), power
    )


# ---------------------------------------------------------------------------
# Flat tori
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TorusTrace:
    t: float
    eigen_side: float
    geometric_side: float
    tail_bound: float

    @property
    def value(self) -> float:
        return self.eigen_side

    @property
    def mismatch(self) -> float:
        return abs(self.eigen_side - self.geometric_side)


def _lattice_matrix(basis) -> np.ndarray:
    mat = np.asarray(basis, dtype=float)
    if mat.shape != (2, 2):
        raise ValueError("lattice basis must be a 2x2 matrix (rows = generators)")
    if abs(float(np.linalg.det(mat))) < 1e-14:
        raise ValueError("lattice basis is singular")
    return mat


def _gauss_lattice_sum(mat: np.ndarray, c: float, tol: float) -> tuple[float, float]:
    """sum over all lattice points gamma = (i, j) @ mat of e^{-c |gamma|^2},
    with a covering-radius tail bound."""
    sigma_min = float(np.linalg.svd(mat, compute_uv=False)[-1])
    det = abs(float(np.linalg.det(mat)))
    rho = 0.5 * (np.linalg.norm(mat[0]) + np.linalg.norm(mat[1]))

    def tail(radius: float) -> float:
        u = radius - 2.0 * rho
        if u <= 0.0:
            return math.inf
        return (2.0 * math.pi / det) * (
            math.exp(-c * u * u) / (2.0 * c)
            + rho * math.sqrt(math.pi / (4.0 * c)) * math.erfc(math.sqrt(c) * u)
        )

    radius = max(4.0 * rho, math.sqrt(1.0 / c))
    while tail(radius) > tol:
        radius *= 1.25
    span = int(math.ceil(radius / sigma_min)) + 1
    idx = np.arange(-span, span + 1)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    pts = np.stack([ii, jj], axis=-1).reshape(-1, 2) @ mat
    norms = np.einsum("ij,ij->i", pts, pts)
    return float(np.sum(np.exp(-c * norms))), tail(radius)


def shortest_lattice_vector(basis) -> tuple[float, int]:
    """(length, multiplicity) of the shortest nonzero lattice vectors."""
    mat = _lattice_matrix(basis)
    sigma_min = float(np.linalg.svd(mat, compute_uv=False)[-1])
    reach = max(np.linalg.norm(mat[0]), np.linalg.norm(mat[1]))
    span = int(math.ceil(reach / sigma_min)) + 2
    idx = np.arange(-span, span + 1)
    ii, jj = np.meshgrid(idx, idx, indexing="ij")
    pts = np.stack([ii, jj], axis=-1).reshape(-1, 2) @ mat
    norms = np.einsum("ij,ij->i", pts, pts)
    norms = norms[norms > 1e-20]
    best = float(np.min(norms))
    count = int(np.sum(norms <= best * (1.0 + 1e-12)))
    return math.sqrt(best), count


def torus_heat_trace(basis, t: float, tol: float = 1e-13) -> TorusTrace:
    """Both sides of the flat-torus trace identity.

    The spectrum of R^2/Gamma is 4 pi^2 |gamma*|^2 over the dual lattice,
    so the eigenvalue side is a Gaussian sum over Gamma*; the geometric
    side is vol/(4 pi t) times the Gaussian sum over Gamma itself.
    """
    if not t > 0.0:
        raise ValueError("time must be positive")
    mat = _lattice_matrix(basis)
    dual = np.linalg.inv(mat).T
    vol = abs(float(np.linalg.det(mat)))
    eigen, tail_e = _gauss_lattice_sum(dual, 4.0 * math.pi**2 * t, tol / 2.0)
    geom_sum, tail_g = _gauss_lattice_sum(mat, 1.0 / (4.0 * t), tol / 2.0)
    scale = vol / (4.0 * math.pi * t)
    return TorusTrace(
        t=t,
        eigen_side=eigen,
        geometric_side=scale * geom_sum,
        tail_bound=tail_e + scale * tail_g,
    )


def torus_log_remainder(basis, t: float, k_levels: int = 0) -> tuple[int, float]:
    """(sign, log) of the trace minus vol/(4 pi t) times the first
    1 + k_levels lattice shells (level 0 keeps just the leading term)."""
    if not t > 0.0:
        raise ValueError("time must be positive")
    mat = _lattice_matrix(basis)
    vol = abs(float(np.linalg.det(mat)))
    sigma_min = float(np.linalg.svd(mat, compute_uv=False)[-1])

    span = 4
    while True:
        idx = np.arange(-span, span + 1)
        ii, jj = np.meshgrid(idx, idx, indexing="ij")
        pts = np.stack([ii, jj], axis=-1).reshape(-1, 2) @ mat
        norms = np.sort(np.einsum("ij,ij->i", pts, pts))
        norms = norms[norms > 1e-20]
        complete_cap = (span * sigma_min) ** 2  # all shells below are present
        shells: list[tuple[float, int]] = []
        for v in norms:
            if v > complete_cap:
                break
            if shells and v <= shells[-1][0] * (1.0 + 1e-12):
                shells[-1] = (shells[-1][0], shells[-1][1] + 1)
            else:
                shells.append((float(v), 1))
        if len(shells) > k_levels:
            first_kept = shells[k_levels][0]
            horizon = first_kept + 360.0 * t  # e^{-90} relative cutoff
            if horizon <= complete_cap:
                break
        span *= 2
    log_scale = math.log(vol / (4.0 * math.pi * t))
    entries = [
        (1, log_scale - v / (4.0 * t) + math.log(mult))
        for v, mult in shells
        if v >= first_kept * (1.0 - 1e-12) and v <= horizon
    ]
    return _signed_log_sum(entries)


def torus_sharp_rate(basis, t_grid: Sequence[float]) -> SharpRateFit:
    """Fit the torus remainder rate; expected |gamma_1|^2 / 4."""
    return _fit_rate(t_grid, lambda t: torus_log_remainder(basis, t), -1.0)


# ---------------------------------------------------------------------------
# Euclidean boxes
# ---------------------------------------------------------------------------


def _dim_sum(length: float, t: float) -> tuple[float, float]:
    """sum_{m>=1} e^{-pi^2 m^2 t / length^2} with geometric tail bound."""
    rate = math.pi**2 * t / (length * length)
    total = 0.0
    m = 1
    while True:
        e = -rate * m * m
        total += math.exp(e) if e > _LOG_FLOOR else 0.0
        nxt = -rate * (m + 1) * (m + 1)
        tail = (math.exp(nxt) if nxt > _LOG_FLOOR else 0.0) / (
            1.0 - math.exp(-rate * (2 * m + 3))
        )
        if tail <= 1e-17 * max(total, 1.0):
            return total, tail
        m += 1


def box_heat_trace(
    dims: Sequence[float], bc: BoundaryCondition, t: float, tol: float = 1e-13
) -> HeatTraceValue:
    """Exact product-form heat trace of an n-dimensional box."""
    box = Box(tuple(dims))
    if not t > 0.0:
        raise ValueError("time must be positive")
    neumann = bc is BoundaryCondition.NEUMANN
    partials = []
    for d in box.dims:
        s, e = _dim_sum(d, t)
        partials.append((s + 1.0 if neumann else s, e))
    value = math.prod(s for s, _ in partials)
    err = sum(
        e * math.prod(abs(s) for k, (s, _) in enumerate(partials) if k != j)
        for j, (_, e) in enumerate(partials)
    )
    return HeatTraceValue(t, value, "product", err)


def box_leading_term(dims: Sequence[float], bc: BoundaryCondition, t: float) -> float:
    """(1/2^n) prod_j (a_j / sqrt(pi t) -+ 1): the full Weyl part."""
    box = Box(tuple(dims))
    sign = 1.0 if bc is BoundaryCondition.NEUMANN else -1.0
    return math.prod(
        0.5 * (d / math.sqrt(math.pi * t) + sign) for d in box.dims
    )


def box_log_remainder(
    dims: Sequence[float], bc: BoundaryCondition, t: float
) -> tuple[int, float]:
    """(sign, log) of the box trace minus its Weyl product, from the
    expansion of the product over nonempty subsets of resummed tails."""
    box = Box(tuple(dims))
    if not t > 0.0:
        raise ValueError("time must be positive")
    sign_w = 1.0 if bc is BoundaryCondition.NEUMANN else -1.0
    n = len(box.dims)
    logs_c = [math.log(0.5 * d / math.sqrt(math.pi * t)) for d in box.dims]
    # log of T_j = sum_{m>=1} e^{-m^2 a_j^2/t}, factored about the m=1 term
    logs_t = []
    for d in box.dims:
        base = -d * d / t
        corr = 0.0
        m = 2
        while True:
            e = -(m * m - 1) * d * d / t
            if e < -50.0:
                break
            corr += math.exp(e)
            m += 1
        logs_t.append(base + math.log1p(corr))
    # c_j -+ 1/2 as linear values (positive whenever t <= a_j^2/pi)
    edge_factors = [math.exp(lc) + 0.5 * sign_w for lc in logs_c]
    entries: list[tuple[int, float]] = []
    for mask in range(1, 1 << n):
        log_term = 0.0
        sgn = 1
        for j in range(n):
            if mask & (1 << j):
                log_term += math.log(2.0) + logs_c[j] + logs_t[j]
            else:
                v = edge_factors[j]
                if v == 0.0:
                    sgn = 0
                    break
                if v < 0.0:
                    sgn = -sgn
                log_term += math.log(abs(v))
        if sgn != 0:
            entries.append((sgn, log_term))
    return _signed_log_sum(entries)
