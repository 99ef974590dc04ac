"""Heat-coefficient convergence experiments for polygon/disk sequences.

Convex polygons converging to a disk carry all three leading heat
coefficients to the disk limit, but smooth domains converging to a
polygon cannot: the t^0 coefficient of any convex n-gon exceeds 1/6 by
at least 1/(6(n-2)), while every smooth convex domain has exactly 1/6.
These routines tabulate both directions of that dichotomy with exact
rational corner constants wherever the angles are known exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .shapes import (
    ConvexPolygon,
    ShapeSpec,
    INTEGRABLE_KINDS,
    corner_constant_of,
    hausdorff_distance_convex,
    regular_ngon,
    summarize,
)

__all__ = [
    "HeatCoefficients",
    "coefficients_smooth_disk",
    "coefficients_polygon",
    "regular_ngon_corner_constant",
    "NgonLimitRow",
    "polygon_to_disk_experiment",
    "rounded_polygon_geometry",
    "GapReport",
    "disk_to_polygon_gap",
]


@dataclass(frozen=True)
class HeatCoefficients:
    """Leading heat-trace coefficients a_{-1}, a_{-1/2}, a_0[, a_{1/2}].

    The trace behaves like a_{-1}/t + a_{-1/2}/sqrt(t) + a_0 (+ a_{1/2}
    sqrt(t) for smooth boundaries) as t -> 0, Dirichlet condition.
    """

    area_term: float
    perimeter_term: float
    corner_term: Union[Fraction, float]
    curvature_term: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.area_term > 0.0:
            raise ValueError("a_{-1} = area/4pi must be positive")
        if not self.perimeter_term < 0.0:
            raise ValueError("a_{-1/2} must be negative for Dirichlet")


def coefficients_smooth_disk(radius: float) -> HeatCoefficients:
    """Coefficients of the disk: curvature k = 1/r, so the sqrt(t) term is
    (1/256 sqrt(pi)) * 2 pi / r; the t^0 term is 1/6 for any smooth
    convex domain."""
    if not radius > 0.0:
        raise ValueError(f"radius must be positive, got {radius}")
    area = math.pi * radius * radius
    perimeter = 2.0 * math.pi * radius
    return HeatCoefficients(
        area_term=area / (4.0 * math.pi),
        perimeter_term=-perimeter / (8.0 * math.sqrt(math.pi)),
        corner_term=Fraction(1, 6),
        curvature_term=(2.0 * math.pi / radius) / (256.0 * math.sqrt(math.pi)),
    )


def coefficients_polygon(shape: ShapeSpec) -> HeatCoefficients:
    """Coefficients of a convex polygon; no sqrt(t) term (straight edges)."""
    if not isinstance(shape, (*INTEGRABLE_KINDS, ConvexPolygon)):
        raise ValueError(f"expected a polygonal shape, got {shape!r}")
    geom = summarize(shape)
    return HeatCoefficients(
        area_term=geom.area / (4.0 * math.pi),
        perimeter_term=-geom.perimeter / (8.0 * math.sqrt(math.pi)),
        corner_term=corner_constant_of(shape),
        curvature_term=None,
    )


def regular_ngon_corner_constant(n: int) -> Fraction:
    """Exact corner constant of the regular n-gon: 1/6 + 1/(6(n-2))."""
    if n < 3:
        raise ValueError("need n >= 3")
    return Fraction(1, 6) + Fraction(1, 6 * (n - 2))


@dataclass(frozen=True)
class NgonLimitRow:
    n: int
    hausdorff: float
    area_term: float
    perimeter_term: float
    corner_term: Fraction
    area_term_error: float
    perimeter_term_error: float
    corner_gap: Fraction


def polygon_to_disk_experiment(
    n_list: Sequence[int], radius: float = 1.0
) -> list[NgonLimitRow]:
    """Regular n-gons inscribed in a disk: tabulate Hausdorff distance and
    per-coefficient errors against the disk values.

    The corner constant of the regular n-gon is exactly
    1/6 + 1/(6(n-2)), so its gap to the smooth value never closes even
    though the area and perimeter coefficients converge.
    """
    disk = coefficients_smooth_disk(radius)
    rows = []
    for n in n_list:
        poly = regular_ngon(n, radius)
        coeffs = coefficients_polygon(poly)
        exact_corner = regular_ngon_corner_constant(n)
        if abs(float(exact_corner) - float(coeffs.corner_term)) > 1e-9:
            raise AssertionError(
                f"n-gon corner constant mismatch at n={n}: "
                f"{coeffs.corner_term} vs {exact_corner}"
            )
        rows.append(
            NgonLimitRow(
                n=n,
                hausdorff=hausdorff_distance_convex(poly, radius),
                area_term=coeffs.area_term,
                perimeter_term=coeffs.perimeter_term,
                corner_term=exact_corner,
                area_term_error=abs(coeffs.area_term - disk.area_term),
                perimeter_term_error=abs(
                    coeffs.perimeter_term - disk.perimeter_term
                ),
                corner_gap=exact_corner - Fraction(1, 6),
            )
        )
    return rows


def rounded_polygon_geometry(
    shape: ShapeSpec, corner_radius: float
) -> tuple[float, float]:
    """(area, perimeter) of the polygon with every corner replaced by a
    tangent circular arc of the given radius.

    Each corner with interior angle g loses a kite of area rho^2/tan(g/2)
    and gains a sector rho^2 (pi - g)/2; the perimeter loses 2 rho/tan(g/2)
    of straight edge and gains an arc of length rho (pi - g).  The result
    is smooth and convex, with unchanged coefficients a_{-1}, a_{-1/2} in
    the limit rho -> 0 while its t^0 coefficient is exactly 1/6.
    """
    if not corner_radius >= 0.0:
        raise ValueError("corner radius must be nonnegative")
    geom = summarize(shape)
    if not geom.angles:
        raise ValueError("shape has no corners to round")
    rho = corner_radius
    area = geom.area
    perimeter = geom.perimeter
    for g in geom.angles:
        cut = rho / math.tan(g / 2.0)
        area -= rho * cut - rho * rho * (math.pi - g) / 2.0
        perimeter -= 2.0 * cut - rho * (math.pi - g)
    if area <= 0.0 or perimeter <= 0.0:
        raise ValueError("corner radius too large for this polygon")
    return area, perimeter


@dataclass(frozen=True)
class GapReport:
    sides: int
    corner_term: Union[Fraction, float]
    gap: float
    lower_bound: Fraction
    approximants: tuple[tuple[float, float, float], ...]
    # rows (rho, area deficit, perimeter deficit) of smooth approximants


def disk_to_polygon_gap(
    shape: ShapeSpec, corner_radii: Sequence[float] = (0.1, 0.03, 0.01, 0.003)
) -> GapReport:
    """The non-convergence direction: smooth approximants (corner-rounded
    polygons) match area and perimeter arbitrarily well, but their t^0
    coefficient is pinned at 1/6 while the polygon's exceeds it by at
    least 1/(6(n-2))."""
    coeffs = coefficients_polygon(shape)
    geom = summarize(shape)
    n = len(geom.angles)
    bound = Fraction(1, 6 * (n - 2))
    gap = float(coeffs.corner_term) - 1.0 / 6.0
    if gap < float(bound) - 1e-12:
        raise AssertionError(
            f"corner-constant gap {gap} fell below the convexity bound {bound}"
        )
    rows = []
    for rho in corner_radii:
        area, perimeter = rounded_polygon_geometry(shape, rho)
        rows.append((rho, geom.area - area, geom.perimeter - perimeter))
    return GapReport(
        sides=n,
        corner_term=coeffs.corner_term,
        gap=gap,
        lower_bound=bound,
        approximants=tuple(rows),
    )
