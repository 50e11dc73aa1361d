"""Morse levels and the elementary (closed-form) charged-oscillator ground states."""
import math

from _runner import dump, parser, run_all

MORSE = [-18.42893218, -8.2867965, -2.1446609, -0.002525]
ELEMENTARY = [
    ("0", 0.0, 1.5),
    ("2", 2.0, 2.5),
    ("sqrt(20)", math.sqrt(20), 3.5),
    ("sqrt(30+6 sqrt17)", math.sqrt(30 + 6 * math.sqrt(17)), 4.5),
    ("sqrt(70+6 sqrt57)", math.sqrt(70 + 6 * math.sqrt(57)), 5.5),
    ("14.450001026966", 14.450001026966, 6.5),
    ("18.503131410003", 18.503131410003, 7.5),
]

args = parser(__doc__).parse_args()
jobs = [
    dict(family="morse", params={}, n_points=10001, r_max=20.0, dt=0.05, n_states=3),
    dict(family="morse", params={}, n_points=10001, r_max=200.0, dt=0.05, n_states=4),
]
jobs += [dict(family="spiked_harmonic", params={"lam": lam, "alpha": 1.0}, n_points=10001, r_max=10.0, dt=0.5, n_states=1)
         for _, lam, _ in ELEMENTARY]
results = run_all(jobs, args.jobs)

print("Morse oscillator")
print(f"{'n':>2} {'r_max':>6} {'E':>16} {'E_refined':>16} {'reference':>14} {'delta':>10}")
for n in range(4):
    res = results[0] if n < 3 else results[1]
    s = res["states"][n]
    print(f"{n:>2} {res['r_max']:>6.0f} {s['energy']:>16.10f} {s['energy_refined']:>16.10f} {MORSE[n]:>14.8f} {s['energy_refined'] - MORSE[n]:>10.1e}")
print("\nCharged oscillator (alpha = 1), ground states")
print(f"{'lambda':>18} {'E':>14} {'E_refined':>14} {'exact':>6} {'delta':>10}")
for (label, _, exact), res in zip(ELEMENTARY, results[2:]):
    s = res["states"][0]
    print(f"{label:>18} {s['energy']:>14.10f} {s['energy_refined']:>14.10f} {exact:>6.1f} {s['energy_refined'] - exact:>10.1e}")
dump(args.json, results)
