"""Ground states of the spiked oscillator for alpha = 4 and 6 across lambda."""
from _runner import dump, parser, run_all

LAMBDAS = [0.001, 0.005, 0.01, 0.05, 0.1, 0.5, 1, 5, 10, 50, 100, 500, 1000]

args = parser(__doc__).parse_args()
jobs = [dict(family="spiked_harmonic", params={"lam": lam, "alpha": a}, n_points=10001, r_max=10.0, dt=0.5, n_states=1)
        for a in (4.0, 6.0) for lam in LAMBDAS]
results = run_all(jobs, args.jobs)
print(f"{'lambda':>8} {'E(alpha=4)':>14} {'E(alpha=6)':>14}   (refined)")
for i, lam in enumerate(LAMBDAS):
    a4 = results[i]["states"][0]["energy_refined"]
    a6 = results[len(LAMBDAS) + i]["states"][0]["energy_refined"]
    print(f"{lam:>8g} {a4:>14.8f} {a6:>14.8f}")
dump(args.json, results)
