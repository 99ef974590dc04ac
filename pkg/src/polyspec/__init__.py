"""Spectral invariants of integrable polygons.

Exact Laplace spectra, spectral zeta functions, zeta-regularized
determinants, heat traces with sharp exponential remainder rates, and the
heat-coefficient convergence experiments for polygon/disk sequences.
"""

from .shapes import (
    Box,
    ConvexPolygon,
    EquilateralTriangle,
    GeometrySummary,
    HemiEquilateralTriangle,
    IsoscelesRightTriangle,
    Rectangle,
    corner_constant,
    corner_constant_exact,
    corner_constant_of,
    hausdorff_distance_convex,
    load_polygon_csv,
    regular_ngon,
    summarize,
)
from .special import SeriesValue, bessel_k, dedekind_eta, theta2, theta3
from .spectrum import (
    BoundaryCondition,
    EigenvalueList,
    OrbitRejection,
    OrbitRep,
    UnsupportedShapeError,
    counting_function,
    eigenfunction_boundary_residual,
    enumerate_eigenvalues,
    orbit_of,
    verify_orbit_bijection,
)
from .zeta import (
    PoleError,
    QuadraticForm,
    ZetaResult,
    determinant,
    epstein_zeta,
    spectral_zeta,
    zeta_prime_zero,
)
from .heat import (
    HeatExpansion,
    HeatTraceValue,
    box_heat_trace,
    expansion,
    fit_sharp_rate,
    heat_trace,
    remainder,
    torus_heat_trace,
)
from .convergence import (
    HeatCoefficients,
    coefficients_polygon,
    coefficients_smooth_disk,
    disk_to_polygon_gap,
    polygon_to_disk_experiment,
)
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "Box",
    "BoundaryCondition",
    "ConvexPolygon",
    "EigenvalueList",
    "EquilateralTriangle",
    "GeometrySummary",
    "HeatCoefficients",
    "HeatExpansion",
    "HeatTraceValue",
    "HemiEquilateralTriangle",
    "IsoscelesRightTriangle",
    "OrbitRejection",
    "OrbitRep",
    "PoleError",
    "QuadraticForm",
    "Rectangle",
    "SeriesValue",
    "UnsupportedShapeError",
    "ZetaResult",
    "bessel_k",
    "box_heat_trace",
    "coefficients_polygon",
    "coefficients_smooth_disk",
    "corner_constant",
    "corner_constant_exact",
    "corner_constant_of",
    "counting_function",
    "dedekind_eta",
    "determinant",
    "disk_to_polygon_gap",
    "eigenfunction_boundary_residual",
    "enumerate_eigenvalues",
    "epstein_zeta",
    "expansion",
    "fit_sharp_rate",
    "hausdorff_distance_convex",
    "heat_trace",
    "load_polygon_csv",
    "orbit_of",
    "polygon_to_disk_experiment",
    "regular_ngon",
    "remainder",
    "run_suite",
    "spectral_zeta",
    "summarize",
    "theta2",
    "theta3",
    "torus_heat_trace",
    "verify_orbit_bijection",
    "zeta_prime_zero",
]
