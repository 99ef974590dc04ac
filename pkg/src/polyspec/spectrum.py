"""Exact Laplace eigenvalue enumeration for the integrable families.

Every family's eigenvalues are an exact positive prefactor times an
integer quadratic-form value, so equal eigenvalues are merged on integer
keys rather than floats: multiplicities can never split through rounding.
The equilateral triangle gets both parametrizations: the lattice one with
its four admissibility conditions and six-pair orbits, and the plain
double-index one, together with machinery to check they agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

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

__all__ = [
    "BoundaryCondition",
    "UnsupportedShapeError",
    "EigenvalueList",
    "OrbitRep",
    "OrbitRejection",
    "orbit_of",
    "orbit_pairs",
    "enumerate_eigenvalues",
    "counting_function",
    "weyl_ratio",
    "equilateral_mode",
    "equilateral_mode_eigenvalue",
    "eigenfunction_boundary_residual",
    "ModeResidual",
    "verify_orbit_bijection",
    "OrbitBijectionReport",
    "eigenvalues_to_csv",
    "MAX_INDEX_PAIRS",
]

MAX_INDEX_PAIRS = 10**7

_SQRT3 = math.sqrt(3.0)


class UnsupportedShapeError(ValueError):
    """Raised when an operation has no closed form for the given shape."""


class BoundaryCondition(enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"

    @classmethod
    def from_string(cls, text: str) -> "BoundaryCondition":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(
                f"boundary condition must be 'dirichlet' or 'neumann', got {text!r}"
            ) from None


@dataclass(frozen=True)
class EigenvalueList:
    """Sorted eigenvalues with multiplicities up to a cutoff."""

    entries: tuple[tuple[float, int], ...]
    cutoff: float
    shape: ShapeSpec
    bc: BoundaryCondition
    parametrization: str
    note: str = ""

    @property
    def total_count(self) -> int:
        return sum(mult for _, mult in self.entries)

    def count_up_to(self, lam: float) -> int:
        if lam > self.cutoff:
            raise ValueError(
                f"lambda = {lam} exceeds the enumeration cutoff {self.cutoff}"
            )
        return sum(mult for value, mult in self.entries if value <= lam)


def counting_function(eigenvalues: EigenvalueList, lam: float) -> int:
    """N(lam): number of eigenvalues <= lam counted with multiplicity."""
    return eigenvalues.count_up_to(lam)


def weyl_ratio(eigenvalues: EigenvalueList, lam: float) -> float:
    """N(lam) * 4 pi / (lam * area); tends to 1 for planar domains."""
    area = summarize(eigenvalues.shape).area
    return counting_function(eigenvalues, lam) * 4.0 * math.pi / (lam * area)


# ---------------------------------------------------------------------------
# Orbits of the equilateral-triangle lattice parametrization
# ---------------------------------------------------------------------------


def orbit_pairs(m: int, n: int) -> tuple[tuple[int, int], ...]:
    """The six index pairs generated by (m, n); signs alternate +,-,+,-,+,-."""
    return ((-n, m - n), (-n, -m), (n - m, -m), (n - m, n), (m, n), (m, m - n))


def _violated_condition(m: int, n: int) -> Optional[str]:
    if (m + n) % 3 != 0:
        return "A: m + n not divisible by 3"
    if m == 2 * n:
        return "B: m = 2n"
    if n == 2 * m:
        return "C: n = 2m"
    if m == -n:
        return "D: m = -n"
    return None


@dataclass(frozen=True)
class OrbitRep:
    """Canonical six-pair orbit of an admissible index pair."""

    rep: tuple[int, int]
    orbit: tuple[tuple[int, int], ...]
    form_value: int  # m^2 - mn + n^2, shared by all six pairs

    def eigenvalue(self, side: float = 1.0) -> float:
        return 16.0 * math.pi**2 / (27.0 * side * side) * self.form_value


@dataclass(frozen=True)
class OrbitRejection:
    pair: tuple[int, int]
    condition: str


def orbit_of(m: int, n: int) -> Union[OrbitRep, OrbitRejection]:
    """Canonical orbit of (m, n), or a rejection naming the failed condition."""
    if (m, n) == (0, 0):
        raise ValueError("(0, 0) is not an admissible index pair")
    violated = _violated_condition(m, n)
    if violated is not None:
        return OrbitRejection(pair=(m, n), condition=violated)
    rep = min(orbit_pairs(m, n))
    return OrbitRep(
        rep=rep,
        orbit=orbit_pairs(*rep),
        form_value=m * m - m * n + n * n,
    )


# ---------------------------------------------------------------------------
# Enumeration
# ---------------------------------------------------------------------------


def _square_ratio_as_fraction(
    x: float, y: float, max_den: int = 128
) -> Optional[tuple[int, int]]:
    """(p, q) with q*x^2 == p*y^2 exactly in floats, if such small integers
    exist; used to build exact integer eigenvalue keys."""
    xx = x * x
    yy = y * y
    for q in range(1, max_den + 1):
        t = q * xx
        p = round(t / yy)
        if p >= 1 and p * yy == t:
            g = math.gcd(p, q)
            return p // g, q // g
    return None


def _box_key_plan(dims: tuple[float, ...]):
    """Integer key weights for sum_j m_j^2 / a_j^2 when the squared sides
    are commensurable; otherwise None (distinct index tuples are then
    provably distinct eigenvalues for incommensurable sides)."""
    ratios = []
    for d in dims:
        pq = _square_ratio_as_fraction(d, dims[0])
        if pq is None:
            return None
        ratios.append(pq)
    big_p = math.lcm(*(p for p, _ in ratios))
    weights = tuple(q * (big_p // p) for p, q in ratios)
    prefactor = math.pi**2 / (dims[0] * dims[0] * big_p)
    return weights, prefactor


def _check_pair_budget(count: float) -> None:
    if count > MAX_INDEX_PAIRS:
        raise ValueError(
            f"cutoff implies ~{count:.3g} index pairs; the limit is {MAX_INDEX_PAIRS}"
        )


def _enumerate_box(
    dims: tuple[float, ...], dirichlet: bool, lam_max: float
) -> list[tuple[float, int]]:
    lo = 1 if dirichlet else 0
    budget = 1.0
    for d in dims:
        budget *= d * math.sqrt(lam_max) / math.pi + 1.0
    _check_pair_budget(budget)

    plan = _box_key_plan(dims)
    if plan is not None:
        weights, prefactor = plan
        key_cap = int(lam_max / prefactor * (1.0 + 1e-12)) + 1
        counts: dict[int, int] = {}

        def rec(j: int, partial: int) -> None:
            if j == len(dims):
                counts[partial] = counts.get(partial, 0) + 1
                return
            w = weights[j]
            m = lo
            while partial + w * m * m <= key_cap:
                rec(j + 1, partial + w * m * m)
                m += 1

        rec(0, 0)
        merged = [
            (prefactor * key, mult)
            for key, mult in counts.items()
            if prefactor * key <= lam_max
        ]
        merged.sort()
        return merged

    inv = [math.pi**2 / (d * d) for d in dims]
    counts_t: dict[tuple[int, ...], int] = {}

    def rec_t(j: int, partial: float, idx: tuple[int, ...]) -> None:
        if j == len(dims):
            counts_t[idx] = counts_t.get(idx, 0) + 1
            return
        m = lo
        while partial + inv[j] * m * m <= lam_max:
            rec_t(j + 1, partial + inv[j] * m * m, idx + (m,))
            m += 1

    rec_t(0, 0.0, ())
    merged = [
        (sum(inv[j] * idx[j] * idx[j] for j in range(len(dims))), mult)
        for idx, mult in counts_t.items()
    ]
    merged.sort()
    return merged


def _enumerate_quadratic(
    prefactor: float,
    lam_max: float,
    *,
    cross_term: bool,
    lower: int,
    strict_wedge: bool,
) -> list[tuple[float, int]]:
    """Merge eigenvalues prefactor * (m^2 [+ mn] + n^2) over an index wedge.

    strict_wedge restricts to m > n (>=lower); otherwise the full square
    m, n >= lower is used.
    """
    key_cap = int(lam_max / prefactor * (1.0 + 1e-12)) + 1
    mmax = math.isqrt(max(key_cap, 0)) + 1
    _check_pair_budget(float(mmax + 1) ** 2)
    counts: dict[int, int] = {}
    for m in range(lower, mmax + 1):
        n = lower
        while not (strict_wedge and n >= m):
            key = m * m + n * n + (m * n if cross_term else 0)
            if key > key_cap:
                break
            counts[key] = counts.get(key, 0) + 1
            n += 1
    merged = [
        (prefactor * key, mult)
        for key, mult in counts.items()
        if prefactor * key <= lam_max
    ]
    merged.sort()
    return merged


def _enumerate_equilateral_orbits(
    side: float, lam_max: float
) -> list[tuple[float, int]]:
    prefactor = 16.0 * math.pi**2 / (9.0 * side * side)
    key_cap = int(lam_max / prefactor * (1.0 + 1e-12)) + 1  # cap on F/3
    form_cap = 3 * key_cap
    # m^2 - mn + n^2 >= 3 max(m,n)^2 / 4 bounds the search box.
    bound = math.isqrt(4 * form_cap // 3) + 2
    _check_pair_budget(float(2 * bound + 1) ** 2)
    seen: set[tuple[int, int]] = set()
    counts: dict[int, int] = {}
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) == (0, 0):
                continue
            form = m * m - m * n + n * n
            if form > form_cap:
                continue
            if _violated_condition(m, n) is not None:
                continue
            rep = min(orbit_pairs(m, n))
            if rep in seen:
                continue
            seen.add(rep)
            key = form // 3  # condition A forces divisibility by 3
            counts[key] = counts.get(key, 0) + 1
    merged = [
        (prefactor * key, mult)
        for key, mult in counts.items()
        if prefactor * key <= lam_max
    ]
    merged.sort()
    return merged


_NEUMANN_MERGE_NOTE = (
    "Neumann multiplicities merge on the same integer quadratic form as the "
    "Dirichlet case over the index range m, n >= 0 (assumption flagged: no "
    "independent multiplicity structure is available for this range)."
)


def enumerate_eigenvalues(
    shape: ShapeSpec,
    bc: BoundaryCondition,
    lam_max: float,
    parametrization: str = "natural",
) -> EigenvalueList:
    """All eigenvalues <= lam_max, merged multiplicities, sorted.

    For the equilateral triangle, ``parametrization="orbits"`` enumerates
    one eigenvalue per canonical admissible orbit of the signed lattice
    parametrization (Dirichlet only); ``"natural"`` uses the plain
    positive double-index form.  Both must agree value for value.
    """
    if not lam_max > 0.0:
        raise ValueError(f"cutoff must be positive, got {lam_max}")
    if isinstance(shape, ConvexPolygon):
        raise UnsupportedShapeError(
            "general convex polygons have no closed-form spectrum"
        )
    dirichlet = bc is BoundaryCondition.DIRICHLET
    note = ""

    if parametrization == "orbits":
        if not isinstance(shape, EquilateralTriangle):
            raise ValueError("orbit parametrization applies to the equilateral triangle")
        if not dirichlet:
            raise ValueError("orbit parametrization is Dirichlet-only")
        entries = _enumerate_equilateral_orbits(shape.side, lam_max)
    elif parametrization != "natural":
        raise ValueError(f"unknown parametrization {parametrization!r}")
    elif isinstance(shape, Rectangle):
        entries = _enumerate_box((shape.a, shape.b), dirichlet, lam_max)
    elif isinstance(shape, Box):
        entries = _enumerate_box(shape.dims, dirichlet, lam_max)
    elif isinstance(shape, EquilateralTriangle):
        pref = 16.0 * math.pi**2 / (9.0 * shape.side * shape.side)
        entries = _enumerate_quadratic(
            pref, lam_max, cross_term=True, lower=1 if dirichlet else 0,
            strict_wedge=False,
        )
        if not dirichlet:
            note = _NEUMANN_MERGE_NOTE
    elif isinstance(shape, IsoscelesRightTriangle):
        pref = math.pi**2 / (shape.leg * shape.leg)
        if dirichlet:
            entries = _enumerate_quadratic(
                pref, lam_max, cross_term=False, lower=1, strict_wedge=True
            )
        else:
            entries = _enumerate_wedge_with_diagonal(
                pref, lam_max, cross_term=False
            )
    elif isinstance(shape, HemiEquilateralTriangle):
        pref = 16.0 * math.pi**2 / (9.0 * shape.hypotenuse * shape.hypotenuse)
        if dirichlet:
            entries = _enumerate_quadratic(
                pref, lam_max, cross_term=True, lower=1, strict_wedge=True
            )
        else:
            entries = _enumerate_wedge_with_diagonal(
                pref, lam_max, cross_term=True
            )
    else:
        raise UnsupportedShapeError(f"unsupported shape {shape!r}")

    return EigenvalueList(
        entries=tuple(entries),
        cutoff=lam_max,
        shape=shape,
        bc=bc,
        parametrization=parametrization,
        note=note,
    )


def _enumerate_wedge_with_diagonal(
    prefactor: float, lam_max: float, *, cross_term: bool
) -> list[tuple[float, int]]:
    """Neumann wedge m >= n >= 0 for the triangles halved along a diagonal."""
    key_cap = int(lam_max / prefactor * (1.0 + 1e-12)) + 1
    mmax = math.isqrt(max(key_cap, 0)) + 1
    _check_pair_budget(float(mmax + 1) ** 2)
    counts: dict[int, int] = {}
    for m in range(0, mmax + 1):
        for n in range(0, m + 1):
            key = m * m + n * n + (m * n if cross_term else 0)
            if key > key_cap:
                break
            counts[key] = counts.get(key, 0) + 1
    merged = [
        (prefactor * key, mult)
        for key, mult in counts.items()
        if prefactor * key <= lam_max
    ]
    merged.sort()
    return merged


# ---------------------------------------------------------------------------
# Eigenfunctions of the equilateral triangle (unit side, vertices (0,0),
# (1,0), (1/2, sqrt(3)/2); interior 0 < y < x sqrt(3), y < sqrt(3)(1-x))
# ---------------------------------------------------------------------------


def equilateral_mode(m: int, n: int, x: float, y: float) -> complex:
    """Six-exponential eigenfunction candidate f_{m,n} at a point.

    Defined for any (m, n) != (0, 0); it vanishes identically when one of
    the admissibility conditions B, C, D fails, and fails the boundary
    condition on the slanted side when A fails.
    """
    total = 0.0 + 0.0j
    for j, (mu, nu) in enumerate(orbit_pairs(m, n)):
        phase = 2.0 * math.pi / 3.0 * (nu * x + (2 * mu - nu) * y / _SQRT3)
        term = complex(math.cos(phase), math.sin(phase))
        total += term if j % 2 == 0 else -term
    return total


def equilateral_mode_eigenvalue(m: int, n: int, side: float = 1.0) -> float:
    return 16.0 * math.pi**2 / (27.0 * side * side) * (m * m - m * n + n * n)


class ModeResidual(NamedTuple):
    boundary_max: float
    pde_max: float
    eigenvalue: float


def _unit_triangle_boundary_points(samples: int):
    for k in range(samples + 1):
        t = k / samples
        yield (t, 0.0)
        yield (0.5 * t, 0.5 * t * _SQRT3)
        yield (0.5 + 0.5 * t, _SQRT3 * (0.5 - 0.5 * t))


def _unit_triangle_interior_points(count: int):
    # Deterministic low-discrepancy barycentric combinations.
    pts = []
    g = (math.sqrt(5.0) - 1.0) / 2.0
    for k in range(1, count + 1):
        u = (0.5 + k * g) % 1.0
        v = (0.25 + k * g * g) % 1.0
        # fold into the simplex u + v < 1, keep clear of the boundary
        if u + v >= 1.0:
            u, v = 1.0 - u, 1.0 - v
        u = 0.05 + 0.9 * u
        v = 0.05 + 0.9 * v * (1.0 - u)
        x = u + 0.5 * v
        y = _SQRT3 / 2.0 * v
        pts.append((x, y))
    return pts


def eigenfunction_boundary_residual(
    m: int, n: int, samples: int = 100
) -> ModeResidual:
    """Max |f_{m,n}| over sampled boundary points of the unit triangle,
    plus the Helmholtz residual at interior sample points.

    The Laplacian is applied per plane-wave term from that term's own
    wavevector, so the residual measures how far the six wavevector norms
    stray from the common eigenvalue (an exact identity in exact
    arithmetic; rounding level in floats).
    """
    violated = _violated_condition(m, n)
    if violated is not None:
        raise ValueError(f"({m}, {n}) violates condition {violated}")
    if samples < 1:
        raise ValueError("need at least one sample per side")
    lam = equilateral_mode_eigenvalue(m, n)

    boundary_max = 0.0
    for x, y in _unit_triangle_boundary_points(samples):
        boundary_max = max(boundary_max, abs(equilateral_mode(m, n, x, y)))

    pde_max = 0.0
    pairs = orbit_pairs(m, n)
    for x, y in _unit_triangle_interior_points(min(samples, 40)):
        residual = 0.0 + 0.0j
        for j, (mu, nu) in enumerate(pairs):
            kx = 2.0 * math.pi / 3.0 * nu
            ky = 2.0 * math.pi / 3.0 * (2 * mu - nu) / _SQRT3
            ksq = kx * kx + ky * ky
            phase = kx * x + ky * y
            term = complex(math.cos(phase), math.sin(phase))
            if j % 2 == 1:
                term = -term
            residual += (lam - ksq) * term
        pde_max = max(pde_max, abs(residual))
    return ModeResidual(boundary_max=boundary_max, pde_max=pde_max, eigenvalue=lam)


# ---------------------------------------------------------------------------
# Orbit bijection verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitBijectionReport:
    bound: int
    value_cap: int
    box_pairs: int
    box_pairs_with_orbit: int
    values_checked: int
    mismatched_values: tuple[int, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return (
            not self.mismatched_values
            and self.box_pairs_with_orbit == self.box_pairs
        )


def verify_orbit_bijection(bound: int) -> OrbitBijectionReport:
    """Check that positive index pairs correspond one-to-one to canonical
    admissible orbits with triple the quadratic-form value.

    Pairs (m, n >= 1) are counted per value of m^2+mn+n^2 up to the cap
    3*bound^2; orbits are counted per value of (M^2-MN+N^2)/3.  The two
    counting functions must agree at every value, and every pair in the
    [1, bound]^2 box must have at least one orbit partner.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    value_cap = 3 * bound * bound

    pair_counts: dict[int, int] = {}
    m = 1
    while m * m + m + 1 <= value_cap:
        n = 1
        while True:
            v = m * m + m * n + n * n
            if v > value_cap:
                break
            pair_counts[v] = pair_counts.get(v, 0) + 1
            n += 1
        m += 1

    orbit_counts: dict[int, int] = {}
    form_cap = 3 * value_cap
    box = math.isqrt(4 * form_cap // 3) + 2
    seen: set[tuple[int, int]] = set()
    for mm in range(-box, box + 1):
        for nn in range(-box, box + 1):
            if (mm, nn) == (0, 0):
                continue
            form = mm * mm - mm * nn + nn * nn
            if form > form_cap:
                continue
            if _violated_condition(mm, nn) is not None:
                continue
            rep = min(orbit_pairs(mm, nn))
            if rep in seen:
                continue
            seen.add(rep)
            key = form // 3
            orbit_counts[key] = orbit_counts.get(key, 0) + 1

    values = set(range(1, value_cap + 1))
    mismatches = tuple(
        sorted(
            v
            for v in values
            if pair_counts.get(v, 0) != orbit_counts.get(v, 0)
        )
    )

    box_ok = 0
    for mm in range(1, bound + 1):
        for nn in range(1, bound + 1):
            v = mm * mm + mm * nn + nn * nn
            if orbit_counts.get(v, 0) >= 1:
                box_ok += 1

    return OrbitBijectionReport(
        bound=bound,
        value_cap=value_cap,
        box_pairs=bound * bound,
        box_pairs_with_orbit=box_ok,
        values_checked=value_cap,
        mismatched_values=mismatches,
    )


def eigenvalues_to_csv(eigenvalues: EigenvalueList) -> str:
    """CSV export: `value,multiplicity` rows, 17 significant digits."""
    lines = ["value,multiplicity"]
    for value, mult in eigenvalues.entries:
        lines.append(f"{value:.17g},{mult}")
    return "\n".join(lines) + "\n"
