"""Geometry layer: integrable polygon families, boxes, convex polygons.

The four families whose interior angles are all of the form pi/k (and
which therefore admit closed-form Laplace spectra) get exact area,
perimeter, angle, and shortest-closed-geodesic data.  General convex
polygons carry enough geometry for the heat-coefficient experiments:
angles, the corner constant, and Hausdorff distances to a disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

__all__ = [
    "Rectangle",
    "EquilateralTriangle",
    "IsoscelesRightTriangle",
    "HemiEquilateralTriangle",
    "Box",
    "ConvexPolygon",
    "ShapeSpec",
    "PlanarShape",
    "GeometrySummary",
    "summarize",
    "angle_fractions",
    "corner_constant",
    "corner_constant_exact",
    "corner_constant_of",
    "regular_ngon",
    "hausdorff_distance_convex",
    "load_polygon_csv",
    "parse_polygon_csv",
]

_CONVEXITY_RTOL = 1e-10


def _require_positive(name: str, value: float) -> None:
    if not value > 0.0:
        raise ValueError(f"{name} must be positive, got {value}")


@dataclass(frozen=True)
class Rectangle:
    a: float
    b: float

    def __post_init__(self) -> None:
        _require_positive("side a", self.a)
        _require_positive("side b", self.b)


@dataclass(frozen=True)
class EquilateralTriangle:
    side: float

    def __post_init__(self) -> None:
        _require_positive("side", self.side)


@dataclass(frozen=True)
class IsoscelesRightTriangle:
    leg: float

    def __post_init__(self) -> None:
        _require_positive("leg", self.leg)


@dataclass(frozen=True)
class HemiEquilateralTriangle:
    """30-60-90 triangle with hypotenuse `hypotenuse`, legs /2 and sqrt(3)/2."""

    hypotenuse: float

    def __post_init__(self) -> None:
        _require_positive("hypotenuse", self.hypotenuse)


@dataclass(frozen=True)
class Box:
    dims: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.dims) == 0:
            raise ValueError("box needs at least one dimension")
        object.__setattr__(self, "dims", tuple(float(d) for d in self.dims))
        for d in self.dims:
            _require_positive("box dimension", d)


@dataclass(frozen=True)
class ConvexPolygon:
    """Strictly convex polygon, vertices in counterclockwise order."""

    vertices: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        n = len(verts)
        if n < 3:
            raise ValueError("polygon needs at least 3 vertices")
        for i in range(n):
            x0, y0 = verts[i]
            x1, y1 = verts[(i + 1) % n]
            x2, y2 = verts[(i + 2) % n]
            ex0, ey0 = x1 - x0, y1 - y0
            ex1, ey1 = x2 - x1, y2 - y1
            cross = ex0 * ey1 - ey0 * ex1
            scale = math.hypot(ex0, ey0) * math.hypot(ex1, ey1)
            if scale == 0.0:
                raise ValueError("polygon has a repeated vertex")
            if cross <= _CONVEXITY_RTOL * scale:
                raise ValueError(
                    "vertices must be strictly convex and counterclockwise"
                )


PlanarShape = Union[
    Rectangle, EquilateralTriangle, IsoscelesRightTriangle, HemiEquilateralTriangle
]
ShapeSpec = Union[PlanarShape, Box, ConvexPolygon]

INTEGRABLE_KINDS = (
    Rectangle,
    EquilateralTriangle,
    IsoscelesRightTriangle,
    HemiEquilateralTriangle,
)


@dataclass(frozen=True)
class GeometrySummary:
    area: float
    perimeter: float
    angles: tuple[float, ...]
    shortest_geodesic: Optional[float]


def _polygon_area(verts: Sequence[tuple[float, float]]) -> float:
    total = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * total


def _polygon_perimeter(verts: Sequence[tuple[float, float]]) -> float:
    n = len(verts)
    return sum(
        math.dist(verts[i], verts[(i + 1) % n]) for i in range(n)
    )


def _polygon_angles(verts: Sequence[tuple[float, float]]) -> tuple[float, ...]:
    n = len(verts)
    angles = []
    for i in range(n):
        xp, yp = verts[(i - 1) % n]
        x0, y0 = verts[i]
        xn, yn = verts[(i + 1) % n]
        ux, uy = xp - x0, yp - y0
        vx, vy = xn - x0, yn - y0
        dot = ux * vx + uy * vy
        cross = ux * vy - uy * vx
        ang = math.atan2(abs(cross), dot)
        angles.append(ang)
    return tuple(angles)


def summarize(shape: ShapeSpec) -> GeometrySummary:
    """Exact area, perimeter, interior angles, shortest closed geodesic.

    Geodesic lengths: a rectangle's shortest closed billiard path runs
    perpendicular between the two longer sides (length 2*min side); an
    equilateral triangle's connects the three edge midpoints (3l/2); in
    the right triangles it doubles the altitude onto the hypotenuse.
    """
    if isinstance(shape, Rectangle):
        a, b = shape.a, shape.b
        return GeometrySummary(
            area=a * b,
            perimeter=2.0 * (a + b),
            angles=(math.pi / 2.0,) * 4,
            shortest_geodesic=2.0 * min(a, b),
        )
    if isinstance(shape, EquilateralTriangle):
        s = shape.side
        return GeometrySummary(
            area=math.sqrt(3.0) / 4.0 * s * s,
            perimeter=3.0 * s,
            angles=(math.pi / 3.0,) * 3,
            shortest_geodesic=1.5 * s,
        )
    if isinstance(shape, IsoscelesRightTriangle):
        a = shape.leg
        return GeometrySummary(
            area=0.5 * a * a,
            perimeter=(2.0 + math.sqrt(2.0)) * a,
            angles=(math.pi / 2.0, math.pi / 4.0, math.pi / 4.0),
            shortest_geodesic=a * math.sqrt(2.0),
        )
    if isinstance(shape, HemiEquilateralTriangle):
        h = shape.hypotenuse
        return GeometrySummary(
            area=math.sqrt(3.0) / 8.0 * h * h,
            perimeter=(3.0 + math.sqrt(3.0)) / 2.0 * h,
            angles=(math.pi / 2.0, math.pi / 3.0, math.pi / 6.0),
            shortest_geodesic=math.sqrt(3.0) / 2.0 * h,
        )
    if isinstance(shape, Box):
        dims = shape.dims
        volume = math.prod(dims)
        # Surface area of the n-box; for n = 2 this is the perimeter.
        surface = sum(2.0 * volume / d for d in dims)
        return GeometrySummary(
            area=volume,
            perimeter=surface,
            angles=(),
            shortest_geodesic=2.0 * min(dims),
        )
    if isinstance(shape, ConvexPolygon):
        return GeometrySummary(
            area=_polygon_area(shape.vertices),
            perimeter=_polygon_perimeter(shape.vertices),
            angles=_polygon_angles(shape.vertices),
            shortest_geodesic=None,
        )
    raise TypeError(f"unsupported shape {shape!r}")


def angle_fractions(shape: ShapeSpec) -> tuple[Fraction, ...]:
    """Interior angles as exact fractions of pi, for the named families."""
    if isinstance(shape, Rectangle):
        return (Fraction(1, 2),) * 4
    if isinstance(shape, EquilateralTriangle):
        return (Fraction(1, 3),) * 3
    if isinstance(shape, IsoscelesRightTriangle):
        return (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))
    if isinstance(shape, HemiEquilateralTriangle):
        return (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))
    raise TypeError("exact angle fractions exist only for the integrable kinds")


def corner_constant(angles: Sequence[float]) -> float:
    """sum of (pi^2 - g^2)/(24 pi g) over the interior angles g.

    This is the t^0 coefficient of the heat trace of a convex polygon.
    """
    total = 0.0
    for g in angles:
        if not 0.0 < g < math.pi:
            raise ValueError(f"interior angle must lie in (0, pi), got {g}")
        total += (math.pi**2 - g * g) / (24.0 * math.pi * g)
    return total


def corner_constant_exact(angle_fracs: Sequence[Fraction]) -> Fraction:
    """Exact corner constant for angles pi*p/q: sum of (q^2-p^2)/(24 p q)."""
    total = Fraction(0)
    for frac in angle_fracs:
        if not 0 < frac < 1:
            raise ValueError(f"angle fraction must lie in (0, 1), got {frac}")
        p, q = frac.numerator, frac.denominator
        total += Fraction(q * q - p * p, 24 * p * q)
    return total


def corner_constant_of(shape: ShapeSpec) -> Union[Fraction, float]:
    """Corner constant of a shape: exact for the named kinds and regular
    n-gons, floating point for general convex polygons."""
    if isinstance(shape, INTEGRABLE_KINDS):
        return corner_constant_exact(angle_fractions(shape))
    if isinstance(shape, ConvexPolygon):
        return corner_constant(_polygon_angles(shape.vertices))
    raise TypeError(f"no corner constant for {shape!r}")


def regular_ngon(n: int, circumradius: float = 1.0) -> ConvexPolygon:
    """Regular n-gon inscribed in the circle of given radius, first vertex
    on the positive x-axis."""
    if n < 3:
        raise ValueError(f"polygon needs n >= 3 sides, got {n}")
    _require_positive("circumradius", circumradius)
    verts = tuple(
        (
            circumradius * math.cos(2.0 * math.pi * k / n),
            circumradius * math.sin(2.0 * math.pi * k / n),
        )
        for k in range(n)
    )
    return ConvexPolygon(verts)


def hausdorff_distance_convex(poly: ConvexPolygon, disk_radius: float) -> float:
    """Hausdorff distance between a convex polygon and the closed disk of
    the given radius centered at the origin.

    The polygon-to-disk direction is attained at a vertex: d(p, disk) =
    max(0, |p| - r) is convex along edges.  The disk-to-polygon direction
    is attained at a circle point r*u: either u is an outward edge normal
    whose foot lies on that edge (clearance r - h_e), or the closest
    polygon point is a vertex (checked on the adjacent normal directions).
    """
    if not isinstance(poly, ConvexPolygon):
        raise ValueError("hausdorff_distance_convex expects a ConvexPolygon")
    _require_positive("disk radius", disk_radius)
    r = disk_radius
    verts = poly.vertices
    n = len(verts)

    d_poly_to_disk = max(max(0.0, math.hypot(x, y) - r) for x, y in verts)

    d_disk_to_poly = 0.0
    for i in range(n):
        p0 = verts[i]
        p1 = verts[(i + 1) % n]
        ex, ey = p1[0] - p0[0], p1[1] - p0[1]
        elen = math.hypot(ex, ey)
        ux, uy = ey / elen, -ex / elen  # outward normal for ccw orientation
        h = ux * p0[0] + uy * p0[1]  # support distance of the edge line
        if h < r:
            # Circle point r*u; its foot on the edge line is (r-h) away.
            foot_t = ((r * ux - p0[0]) * ex + (r * uy - p0[1]) * ey) / (elen * elen)
            if 0.0 <= foot_t <= 1.0:
                d_disk_to_poly = max(d_disk_to_poly, r - h)
            else:
                vx, vy = p1 if foot_t > 1.0 else p0
                d_disk_to_poly = max(
                    d_disk_to_poly, math.hypot(r * ux - vx, r * uy - vy)
                )
    return max(d_poly_to_disk, d_disk_to_poly)


def parse_polygon_csv(text: str) -> ConvexPolygon:
    """Parse `x,y` lines (counterclockwise) into a ConvexPolygon."""
    verts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x,y', got {raw!r}")
        verts.append((float(parts[0]), float(parts[1])))
    return ConvexPolygon(tuple(verts))


def load_polygon_csv(path: Union[str, Path]) -> ConvexPolygon:
    """Read a polygon vertex file: one `x,y` pair per line, ccw order."""
    return parse_polygon_csv(Path(path).read_text())
