"""Six s-states of the charged oscillator (alpha = 1) for positive and negative lambda."""
from _runner import dump, parser, run_all

p = parser(__doc__)
p.add_argument("--lambdas", type=float, nargs="*", default=[-0.001, 0.001, -0.01, 0.01, -0.1, 0.1, -1, 1, -10, 10])
args = p.parse_args()


def job(lam):
    # the deep well at lambda = -10 needs a finer mesh and a step below 2/|E_0|
    if lam <= -5:
        return dict(family="spiked_harmonic", params={"lam": lam, "alpha": 1.0}, n_points=80001, r_max=20.0, dt=0.1, n_states=6)
    return dict(family="spiked_harmonic", params={"lam": lam, "alpha": 1.0}, n_points=10001, r_max=10.0, dt=0.5, n_states=6)


results = run_all([job(lam) for lam in args.lambdas], args.jobs)
print(f"{'lambda':>8} {'n':>2} {'E':>14} {'E_refined':>14} {'<r^-1>':>10} {'<r>':>10}")
for lam, res in zip(args.lambdas, results):
    for n, s in enumerate(res["states"]):
        print(f"{lam:>8g} {n:>2} {s['energy']:>14.8f} {s['energy_refined']:>14.8f} {s['moments']['-1']:>10.6f} {s['moments']['1']:>10.6f}")
dump(args.json, results)
