"""Six lowest s-states of the 3D harmonic oscillator with radial moments."""
from _runner import dump, parser, run_all

args = parser(__doc__).parse_args()
(res,) = run_all([dict(family="isotropic_harmonic", params={}, n_points=10001, r_max=10.0, dt=0.5, n_states=6)], 1)
print(f"{'n':>2} {'E':>14} {'E_refined':>14} {'exact':>6} {'<r^-2>':>10} {'<r^-1>':>10} {'<r^0>':>10} {'<r>':>10} {'<r^2>':>10} {'V/T':>10}")
for n, s in enumerate(res["states"]):
    m = s["moments"]
    print(f"{n:>2} {s['energy']:>14.9f} {s['energy_refined']:>14.9f} {2 * n + 1.5:>6.1f} "
          + " ".join(f"{m[k]:>10.6f}" for k in ("-2", "-1", "0", "1", "2")) + f" {s['virial_ratio']:>10.6f}")
dump(args.json, res)
