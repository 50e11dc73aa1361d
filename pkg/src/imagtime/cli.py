"""Command line entry point: ``imagtime solve`` and ``imagtime compare``."""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .grid import build_grid
from .manifest import ManifestError, load_manifest
from .potentials import effective_potential
from .report import compare_reports, format_table, load_report, run_record, write_densities, write_report
from .solver import solve_spectrum

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _solve_point(manifest, run: dict, seed):
    spec = manifest.potential_spec(run["potential"])
    g = run["grid"]
    grid = build_grid(int(g["n_points"]), float(g["r_max"]), float(g.get("offset", 1e-6)))
    spectrum = solve_spectrum(spec, grid, manifest.solver_config(seed))
    density_dir = manifest.output.get("density")
    if density_dir:
        write_densities(manifest.resolve(density_dir), run["label"], grid, effective_potential(spec, grid), spectrum)
    return run_record(run["label"], run["sweep_value"], spec, grid, spectrum)


def cmd_solve(args) -> int:
    try:
        manifest = load_manifest(args.config)
    except ManifestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot read {args.config}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    points = manifest.runs()
    if args.jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_solve_point, manifest, run, args.seed) for run in points]
            records = [f.result() for f in futures]
    else:
        records = [_solve_point(manifest, run, args.seed) for run in points]
    report_path = manifest.resolve(manifest.output["report"])
    report = write_report(report_path, manifest.as_dict(), records)
    if not args.quiet:
        for rec in records:
            print(format_table(rec))
        print(f"report written to {report_path}")
    if not report["all_converged"]:
        bad = [r["label"] for r in records if r["status"] != "converged"]
        print(f"not converged: {', '.join(bad) or 'missing states'}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        a, b = load_report(args.first), load_report(args.second)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    rows, missing, max_delta = compare_reports(a, b, args.field)
    print(f"{'run':<24} {'n':>3} {'first':>20} {'second':>20} {'delta':>12}")
    for label, idx, va, vb, d in rows:
        flag = "" if abs(d) <= args.tol else "  *"
        print(f"{label:<24} {idx:>3} {va:>20.12f} {vb:>20.12f} {d:>12.3e}{flag}")
    for line in missing:
        print(f"missing: {line}")
    print(f"max |delta {args.field}| = {max_delta:.3e} (tol {args.tol:g})")
    if missing:
        return EXIT_USAGE
    return EXIT_OK if max_delta <= args.tol else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="imagtime", description="Radial Schroedinger eigenstates by imaginary-time propagation.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver progress")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run the manifest and write a report")
    solve.add_argument("--config", required=True, type=Path)
    solve.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    solve.add_argument("--seed", type=int, default=None, help="override the solver seed")
    solve.add_argument("--quiet", action="store_true")
    solve.set_defaults(func=cmd_solve)

    compare = sub.add_parser("compare", help="diff two reports")
    compare.add_argument("first", type=Path)
    compare.add_argument("second", type=Path)
    compare.add_argument("--tol", type=float, default=1e-8)
    compare.add_argument("--field", default="energy", choices=("energy", "energy_refined", "kinetic", "potential", "virial_ratio"))
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
