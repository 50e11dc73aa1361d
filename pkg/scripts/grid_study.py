"""Six s-state energies of the charged oscillator on a sequence of grids."""
from _runner import dump, parser, run_all

p = parser(__doc__)
p.add_argument("--lambdas", type=float, nargs="*", default=[-0.001, 10.0])
p.add_argument("--grids", type=int, nargs="*", default=[501, 1001, 2001, 5001])
p.add_argument("--r-max", type=float, default=15.0)
args = p.parse_args()

jobs = [dict(family="spiked_harmonic", params={"lam": lam, "alpha": 1.0}, n_points=n, r_max=args.r_max, dt=0.5, n_states=6)
        for lam in args.lambdas for n in args.grids]
results = run_all(jobs, args.jobs)
for which in ("energy_refined", "energy"):
    print(f"\n{which}")
    print(f"{'lambda':>8} {'n':>2} " + " ".join(f"{'N=' + str(n):>13}" for n in args.grids))
    for i, lam in enumerate(args.lambdas):
        block = results[i * len(args.grids):(i + 1) * len(args.grids)]
        for n in range(6):
            print(f"{lam:>8g} {n:>2} " + " ".join(f"{r['states'][n][which]:>13.8f}" for r in block))
dump(args.json, results)
