"""Export radial distributions r^2 psi^2 for alpha = 1, lambda = 0.01 and -10 (CSV, one file per state)."""
import argparse
from pathlib import Path

from imagtime import PotentialSpec, SolverConfig, build_grid, effective_potential, solve_spectrum
from imagtime.report import write_densities

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--out", type=Path, default=Path("out/densities"))
p.add_argument("--states", type=int, default=6)
args = p.parse_args()

for lam, n_points, r_max, dt in ((0.01, 10001, 10.0, 0.5), (-10.0, 80001, 20.0, 0.1)):
    spec = PotentialSpec.spiked(lam, 1.0)
    grid = build_grid(n_points, r_max)
    sp = solve_spectrum(spec, grid, SolverConfig(dt=dt, n_states=args.states))
    files = write_densities(args.out, f"lam={lam:g}", grid, effective_potential(spec, grid), sp)
    print(f"lambda = {lam:g}: {sp.status}, energies {', '.join(f'{e:.7f}' for e in sp.energies)}")
    for f in files:
        print(f"  {f}")
