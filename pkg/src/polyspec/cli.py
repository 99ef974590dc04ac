"""Command-line front end.

Subcommands: eigs, zeta, det, heat, remainder-fit, ngon-limit, torus,
verify.  Output is deterministic CSV or JSON (fixed field order, shortest
round-trip float representation, LF line endings), so identical
invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - 3.10 fallback
    import tomli as tomllib

from . import convergence, heat, verify, zeta
from .shapes import (
    Box,
    EquilateralTriangle,
    HemiEquilateralTriangle,
    IsoscelesRightTriangle,
    Rectangle,
    ShapeSpec,
)
from .spectrum import (
    BoundaryCondition,
    enumerate_eigenvalues,
    eigenvalues_to_csv,
)

__all__ = ["main", "RunConfig"]

_ENV_THREADS = "POLYSPEC_THREADS"


@dataclass
class RunConfig:
    tolerance: float = 1e-12
    output_format: str = "csv"
    output_path: Optional[str] = None
    thread_count: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.tolerance > 0.0:
            raise ValueError("tolerance must be positive")
        if self.output_format not in ("csv", "json"):
            raise ValueError("format must be csv or json")
        if self.thread_count is not None and self.thread_count < 1:
            raise ValueError("thread count must be >= 1")


def _fmt(x) -> str:
    """Shortest round-trip decimal form, at most 17 significant digits."""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _emit_csv(columns: Sequence[str], rows: Sequence[Sequence]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _emit_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as handle:
            handle.write(text)


def _add_shape_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--shape",
        required=True,
        choices=["rect", "square", "equilateral", "isoright", "hemi", "box"],
    )
    parser.add_argument("--a", type=float, help="rectangle side / square side")
    parser.add_argument("--b", type=float, help="rectangle second side")
    parser.add_argument("--side", type=float, help="equilateral side length")
    parser.add_argument("--leg", type=float, help="isosceles right leg length")
    parser.add_argument("--hyp", type=float, help="hemi-equilateral hypotenuse")
    parser.add_argument("--dims", type=str, help="box dimensions, e.g. 1,2,3")


def _build_shape(args: argparse.Namespace) -> ShapeSpec:
    kind = args.shape
    if kind == "rect":
        if args.a is None or args.b is None:
            raise SystemExit2("rect needs --a and --b")
        return Rectangle(args.a, args.b)
    if kind == "square":
        if args.a is None:
            raise SystemExit2("square needs --a")
        return Rectangle(args.a, args.a)
    if kind == "equilateral":
        if args.side is None:
            raise SystemExit2("equilateral needs --side")
        return EquilateralTriangle(args.side)
    if kind == "isoright":
        if args.leg is None:
            raise SystemExit2("isoright needs --leg")
        return IsoscelesRightTriangle(args.leg)
    if kind == "hemi":
        if args.hyp is None:
            raise SystemExit2("hemi needs --hyp")
        return HemiEquilateralTriangle(args.hyp)
    if kind == "box":
        if not args.dims:
            raise SystemExit2("box needs --dims")
        return Box(tuple(float(d) for d in args.dims.split(",")))
    raise SystemExit2(f"unknown shape {kind}")


class SystemExit2(Exception):
    """Usage error: maps to exit code 2."""


def _parse_t_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise SystemExit2("t-grid must be start:stop:count")
    start, stop = float(parts[0]), float(parts[1])
    count = int(parts[2])
    if count < 1 or start <= 0.0 or stop <= 0.0:
        raise SystemExit2("t-grid needs positive endpoints and count >= 1")
    if count == 1:
        return [start]
    step = (stop - start) / (count - 1)
    return [start + k * step for k in range(count)]


def _parse_n_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(part) for part in text.split(",")]


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    data = tomllib.loads(Path(path).read_text())
    allowed = {"tolerance", "format", "out", "threads"}
    unknown = set(data) - allowed
    if unknown:
        raise SystemExit2(f"unknown config keys: {sorted(unknown)}")
    return data


def _make_config(args: argparse.Namespace) -> RunConfig:
    config = _load_config(getattr(args, "config", None))
    tolerance = args.tol if args.tol is not None else config.get("tolerance", 1e-12)
    fmt = args.format if args.format is not None else config.get("format", "csv")
    out = args.out if args.out is not None else config.get("out")
    threads = args.threads if args.threads is not None else config.get("threads")
    if threads is None and os.environ.get(_ENV_THREADS):
        threads = int(os.environ[_ENV_THREADS])
    try:
        return RunConfig(
            tolerance=float(tolerance),
            output_format=str(fmt),
            output_path=out,
            thread_count=int(threads) if threads is not None else None,
        )
    except ValueError as exc:
        raise SystemExit2(str(exc)) from exc


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def _cmd_eigs(args: argparse.Namespace, config: RunConfig) -> int:
    shape = _build_shape(args)
    bc = BoundaryCondition.from_string(args.bc)
    ev = enumerate_eigenvalues(
        shape, bc, args.lambda_max, parametrization=args.parametrization
    )
    if config.output_format == "csv":
        emit(eigenvalues_to_csv(ev), config.output_path)
    else:
        payload = {
            "shape": repr(shape),
            "bc": bc.value,
            "cutoff": ev.cutoff,
            "parametrization": ev.parametrization,
            "entries": [[value, mult] for value, mult in ev.entries],
        }
        if ev.note:
            payload["note"] = ev.note
        emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_zeta(args: argparse.Namespace, config: RunConfig) -> int:
    shape = _build_shape(args)
    result = zeta.spectral_zeta(shape, args.s, tol=config.tolerance)
    payload = {
        "shape": repr(shape),
        "s": args.s,
        "value": result.value,
        "error_bound": result.error_bound,
        "method": result.method,
    }
    emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_det(args: argparse.Namespace, config: RunConfig) -> int:
    shape = _build_shape(args)
    series_form, eta_form = zeta.zeta_prime_zero(shape, tol=config.tolerance)
    payload = {
        "shape": repr(shape),
        "zeta_prime_zero_divisor_series": series_form.value,
        "zeta_prime_zero_eta": eta_form.value,
        "difference": abs(series_form.value - eta_form.value),
        "determinant": math.exp(-0.5 * (series_form.value + eta_form.value)),
    }
    emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_heat(args: argparse.Namespace, config: RunConfig) -> int:
    shape = _build_shape(args)
    bc = BoundaryCondition.from_string(args.bc)
    rows = []
    for t in _parse_t_grid(args.t_grid):
        value = heat.heat_trace(shape, bc, t, method=args.method, tol=config.tolerance)
        rows.append((t, value.value, value.method, value.tail_bound))
    if config.output_format == "csv":
        emit(_emit_csv(["t", "value", "method", "tail_bound"], rows), config.output_path)
    else:
        payload = [
            {"t": t, "value": v, "method": m, "tail_bound": b}
            for t, v, m, b in rows
        ]
        emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_remainder_fit(args: argparse.Namespace, config: RunConfig) -> int:
    shape = _build_shape(args)
    bc = BoundaryCondition.from_string(args.bc)
    grid = _parse_t_grid(args.t_grid)
    fit = heat.fit_sharp_rate(shape, bc, grid, k_levels=args.k_levels)
    rows = [
        (t, y, est)
        for (t, y), est in zip(fit.points, fit.per_point)
    ]
    text = _emit_csv(["t", "minus_t_log_R", "c_hat"], rows)
    summary = {
        "c_hat": fit.c_hat,
        "t_power": fit.t_power,
        "slope": fit.slope,
        "sharp_rate_expected": None,
    }
    geodesic = None
    try:
        from .shapes import summarize

        geodesic = summarize(shape).shortest_geodesic
    except Exception:
        pass
    if geodesic is not None:
        summary["sharp_rate_expected"] = (geodesic / 2.0) ** 2
    emit(text + json.dumps(summary) + "\n", config.output_path)
    return 0


def _cmd_ngon_limit(args: argparse.Namespace, config: RunConfig) -> int:
    rows = convergence.polygon_to_disk_experiment(
        _parse_n_range(args.n), radius=args.radius
    )
    table = [
        (
            row.n,
            row.hausdorff,
            row.area_term,
            row.perimeter_term,
            float(row.corner_term),
            float(row.corner_gap),
        )
        for row in rows
    ]
    if config.output_format == "csv":
        emit(
            _emit_csv(["n", "hausdorff", "a_m1", "a_mhalf", "a_0", "gap"], table),
            config.output_path,
        )
    else:
        payload = [
            {
                "n": n,
                "hausdorff": h,
                "a_m1": a,
                "a_mhalf": p,
                "a_0": c,
                "gap": g,
            }
            for n, h, a, p, c, g in table
        ]
        emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_torus(args: argparse.Namespace, config: RunConfig) -> int:
    entries = [float(v) for v in args.basis.split(",")]
    if len(entries) != 4:
        raise SystemExit2("basis must be four comma-separated numbers")
    basis = [[entries[0], entries[1]], [entries[2], entries[3]]]
    trace = heat.torus_heat_trace(basis, args.t, tol=config.tolerance)
    length, mult = heat.shortest_lattice_vector(basis)
    payload = {
        "basis": basis,
        "t": args.t,
        "eigenvalue_side": trace.eigen_side,
        "geometric_side": trace.geometric_side,
        "mismatch": trace.mismatch,
        "tail_bound": trace.tail_bound,
        "shortest_vector_length": length,
        "shortest_vector_multiplicity": mult,
    }
    emit(_emit_json(payload), config.output_path)
    return 0


def _cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    names = None if args.suite == "all" else args.suite.split(",")
    report = verify.run_suite(names)
    emit("\n".join(report.lines()) + "\n", config.output_path)
    return 0 if report.all_passed else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyspec",
        description="Spectral invariants of integrable polygons: exact "
        "eigenvalues, zeta determinants, heat traces, and their asymptotics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--tol", type=float, default=None, help="error budget")
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--out", type=str, default=None, help="output file")
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--config", type=str, default=None, help="TOML config file")

    p = sub.add_parser("eigs", help="enumerate eigenvalues up to a cutoff")
    _add_shape_arguments(p)
    p.add_argument("--bc", required=True, help="dirichlet or neumann")
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument(
        "--parametrization", choices=["natural", "orbits"], default="natural"
    )
    common(p)
    p.set_defaults(func=_cmd_eigs)

    p = sub.add_parser("zeta", help="spectral zeta function at real s")
    _add_shape_arguments(p)
    p.add_argument("--s", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("det", help="zeta-regularized determinant")
    _add_shape_arguments(p)
    common(p)
    p.set_defaults(func=_cmd_det)

    p = sub.add_parser("heat", help="heat trace over a t grid")
    _add_shape_arguments(p)
    p.add_argument("--bc", required=True)
    p.add_argument("--t-grid", required=True, help="start:stop:count")
    p.add_argument(
        "--method",
        choices=["auto", "theta", "eigsum", "transformed"],
        default="auto",
    )
    common(p)
    p.set_defaults(func=_cmd_heat)

    p = sub.add_parser(
        "remainder-fit", help="fit the sharp exponential remainder rate"
    )
    _add_shape_arguments(p)
    p.add_argument("--bc", required=True)
    p.add_argument("--t-grid", required=True, help="start:stop:count, descending")
    p.add_argument("--k-levels", type=int, default=0)
    common(p)
    p.set_defaults(func=_cmd_remainder_fit)

    p = sub.add_parser("ngon-limit", help="regular n-gon to disk experiment")
    p.add_argument("--n", required=True, help="range like 3..200 or list 3,4,5")
    p.add_argument("--radius", type=float, default=1.0)
    common(p)
    p.set_defaults(func=_cmd_ngon_limit)

    p = sub.add_parser("torus", help="flat torus heat trace identity")
    p.add_argument("--basis", required=True, help="b11,b12,b21,b22 (rows)")
    p.add_argument("--t", type=float, required=True)
    common(p)
    p.set_defaults(func=_cmd_torus)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--suite", default="all", help="'all' or comma-separated names")
    common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _make_config(args)
        return args.func(args, config)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
