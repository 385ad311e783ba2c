"""Command-line entry point: ``point``, ``sweep``, ``figures`` and ``validate``.

Lengths are given in um (separations) and nm (plasma wavelengths), the
temperature in K. Exit codes: 0 success, 1 failed validation checks,
2 usage or domain error, 3 convergence failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .config import DEFAULT_CONFIG, QuadratureConfig
from .errors import CasimirError, ConvergenceError, ReportError, UnsupportedInputError
from .factors import correction_report
from .thermal import force_matsubara, force_poisson, force_vacuum
from .units import (
    MICRON,
    NANOMETER,
    PRESETS,
    CavityGeometry,
    Mirror,
    ideal_energy,
    material_preset,
    plasma_mirror,
    thermal_state,
)

OUTPUT_DIR_ENV = "CASIMIR_PLASMA_OUTPUT_DIR"

EXIT_OK, EXIT_CHECKS_FAILED, EXIT_USAGE, EXIT_CONVERGENCE, EXIT_IO = 0, 1, 2, 3, 4

MATERIAL_CHOICES = (*PRESETS, "Perfect")


def _positive(kind):
    def parse(text):
        try:
            value = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
        if not (value > 0 and math.isfinite(value)):
            raise argparse.ArgumentTypeError(f"must be a finite number > 0, got {text}")
        return value
    return parse


def _non_negative(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (value >= 0 and math.isfinite(value)):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-tol", type=_positive(float), default=DEFAULT_CONFIG.rel_tol,
                        help="relative quadrature tolerance (default %(default)g)")
    common.add_argument("--temperature-k", type=_non_negative, default=300.0,
                        help="temperature in K (default %(default)g)")

    parser = argparse.ArgumentParser(
        prog="casimir-plasma",
        description="Casimir force and free energy between plasma-model mirrors at finite temperature.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    point = sub.add_parser("point", parents=[common], help="all correction factors at one separation")
    point.add_argument("--l-um", type=_positive(float), required=True, help="plate separation in um")
    group = point.add_mutually_exclusive_group()
    group.add_argument("--material", choices=MATERIAL_CHOICES, help="preset mirror (default Al)")
    group.add_argument("--lambda-p-nm", type=_positive(float), help="custom plasma wavelength in nm")
    point.add_argument("--representation", choices=("matsubara", "poisson", "both"), default="matsubara",
                       help="series used for the thermal force (default %(default)s)")

    sweep = sub.add_parser("sweep", parents=[common], help="log-spaced sweep written as CSV or SVG")
    sweep.add_argument("--lmin-um", type=_positive(float), default=0.1)
    sweep.add_argument("--lmax-um", type=_positive(float), default=10.0)
    sweep.add_argument("--points-per-decade", type=_positive(int), default=50)
    sweep.add_argument("--material", action="append", choices=MATERIAL_CHOICES,
                       help="preset mirror; repeatable (default Al and CuAu)")
    sweep.add_argument("--lambda-p-nm", action="append", type=_positive(float),
                       help="custom plasma wavelength in nm; repeatable")
    sweep.add_argument("--output", help=f"output file (default sweep.<format> in ${OUTPUT_DIR_ENV} or .)")
    sweep.add_argument("--format", choices=("csv", "svg"),
                       help="output format (default from the file suffix, else csv)")
    sweep.add_argument("--quantity", default="components",
                       help="SVG quantity group or column (eta_F, eta_E, components, delta, Delta, ...)")
    sweep.add_argument("--workers", type=_positive(int), default=1, help="parallel processes")

    figures = sub.add_parser("figures", parents=[common], help="data and plots for the four figures")
    figures.add_argument("--out", help=f"output directory (default ${OUTPUT_DIR_ENV} or ./figures)")
    figures.add_argument("--points-per-decade", type=_positive(int), default=50)
    figures.add_argument("--workers", type=_positive(int), default=1)

    sub.add_parser("validate", parents=[common], help="run the self-validation checks")
    return parser


def _config(args) -> QuadratureConfig:
    tol = args.rel_tol
    if tol == DEFAULT_CONFIG.rel_tol:
        return DEFAULT_CONFIG
    return DEFAULT_CONFIG.replace(
        rel_tol=tol,
        poisson_rel_tol=tol,
        energy_rel_tol=tol,
        matsubara_rel_tol=min(DEFAULT_CONFIG.matsubara_rel_tol, 0.1 * tol),
    )


def _point_mirror(args) -> Mirror:
    if args.lambda_p_nm is not None:
        return plasma_mirror(args.lambda_p_nm * NANOMETER)
    return material_preset(args.material or "Al")


def _sweep_mirrors(args) -> tuple[Mirror, ...]:
    mirrors = [material_preset(m) for m in (args.material or [])]
    mirrors += [plasma_mirror(lp * NANOMETER) for lp in (args.lambda_p_nm or [])]
    return tuple(mirrors) or (material_preset("Al"), material_preset("CuAu"))


def _default_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def _check_writable(directory: Path) -> None:
    """Fail before any computation if ``directory`` cannot receive output files."""
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ReportError(f"cannot create {directory}: {exc.strerror or exc}") from exc
    if not os.access(directory, os.W_OK):
        raise ReportError(f"{directory} is not writable")


def cmd_point(args, out=None) -> int:
    out = out or sys.stdout
    mirror = _point_mirror(args)
    thermal = thermal_state(args.temperature_k)
    geometry = CavityGeometry(args.l_um * MICRON)
    config = _config(args)

    report = correction_report(geometry.L, mirror, thermal, config, strict=not mirror.is_perfect)
    label = mirror.name if mirror.is_perfect else f"{mirror.name} (lambda_P = {mirror.lambda_P / NANOMETER:g} nm)"
    print(f"mirror          {label}", file=out)
    print(f"L               {args.l_um:g} um", file=out)
    print(f"T               {thermal.T:g} K", file=out)
    if not thermal.is_vacuum:
        print(f"lambda_T        {thermal.lambda_T / MICRON:.6g} um", file=out)

    if thermal.is_vacuum:
        forces = [force_vacuum(geometry, mirror, config)]
    else:
        forces = []
        if args.representation in ("matsubara", "both"):
            forces.append(force_matsubara(geometry, mirror, thermal, config))
        if args.representation in ("poisson", "both"):
            forces.append(force_poisson(geometry, mirror, thermal, config))
    for f in forces:
        name = f"F ({f.representation.value})"
        print(f"{name:<16}{f.force:.10e} N/m^2  (+/- {f.error_estimate:.2e}, {f.terms_used} terms)", file=out)
    if len(forces) == 2:
        a, b = forces
        diff = abs(a.force - b.force)
        inside = diff <= a.error_estimate + b.error_estimate
        print(f"relative diff   {diff / a.force:.3e}  "
              f"({'within' if inside else 'OUTSIDE'} combined error estimates)", file=out)

    print(f"{'E':<16}{report.eta_E * ideal_energy(geometry):.10e} J/m^2", file=out)
    print("dimensionless factors:", file=out)
    for key, value in report.as_dict().items():
        if key == "L":
            continue
        print(f"  {key:<14}{value:.10g}", file=out)
    return EXIT_OK


def cmd_sweep(args, out=None) -> int:
    out = out or sys.stdout
    from .report import QUANTITY_GROUPS, NUMERIC_COLUMNS, SweepSpec, emit_csv, emit_svg, run_sweep

    fmt = args.format
    if args.output is None:
        fmt = fmt or "csv"
        destination = _default_dir() / f"sweep.{fmt}"
    else:
        destination = Path(args.output)
        fmt = fmt or ("svg" if destination.suffix.lower() == ".svg" else "csv")
    if fmt == "svg" and args.quantity not in QUANTITY_GROUPS and args.quantity not in NUMERIC_COLUMNS:
        raise UnsupportedInputError(
            f"unknown quantity {args.quantity!r}; choose a group ({', '.join(QUANTITY_GROUPS)}) or a column"
        )
    spec = SweepSpec(
        L_min=args.lmin_um * MICRON,
        L_max=args.lmax_um * MICRON,
        points_per_decade=args.points_per_decade,
        materials=_sweep_mirrors(args),
        T=args.temperature_k,
    )
    _check_writable(destination.parent)
    table = run_sweep(spec, _config(args), workers=args.workers)
    if fmt == "svg":
        path = emit_svg(table, args.quantity, destination, title=spec.describe())
    else:
        path = emit_csv(table, destination)
    print(f"wrote {path} ({len(table.rows)} rows)", file=out)
    return EXIT_OK


def cmd_figures(args, out=None) -> int:
    out = out or sys.stdout
    from .report import write_figures

    out_dir = Path(args.out) if args.out else _default_dir() / "figures"
    thermal_state(args.temperature_k)
    if args.temperature_k == 0.0:
        raise UnsupportedInputError("figures need T > 0")
    _check_writable(out_dir)
    for path in write_figures(out_dir, T=args.temperature_k, points_per_decade=args.points_per_decade,
                              config=_config(args), workers=args.workers):
        print(f"wrote {path}", file=out)
    return EXIT_OK


def cmd_validate(args, out=None) -> int:
    out = out or sys.stdout
    from .validation import run_all

    results = run_all(_config(args), progress=lambda r: print(r.line(), file=out, flush=True))
    failed = [r for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} of {len(results)} checks failed: "
              + ", ".join(str(r.criterion) for r in failed), file=out)
        return EXIT_CHECKS_FAILED
    print(f"all {len(results)} checks passed", file=out)
    return EXIT_OK


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "figures": cmd_figures, "validate": cmd_validate}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConvergenceError as exc:
        print(f"casimir-plasma: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ReportError, OSError) as exc:
        print(f"casimir-plasma: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (CasimirError, ValueError, LookupError) as exc:
        print(f"casimir-plasma: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
