"""Shared helpers for the reproduction scripts."""
from __future__ import annotations

import argparse
import json
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from imagtime import PotentialSpec, SolverConfig, build_grid, solve_spectrum


def parser(description: str) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p.add_argument("--json", type=Path, default=None, help="also dump results here")
    return p


def solve(family: str, params: dict, n_points: int, r_max: float, dt: float, n_states: int) -> dict:
    spec = PotentialSpec(family, params)
    grid = build_grid(n_points, r_max)
    sp = solve_spectrum(spec, grid, SolverConfig(dt=dt, n_states=n_states))
    return {
        "params": params,
        "n_points": n_points,
        "r_max": r_max,
        "status": sp.status,
        "states": [
            {
                "energy": s.energy,
                "energy_refined": s.expectations.energy_refined,
                "moments": {str(k): v for k, v in s.expectations.moments.items()},
                "virial_ratio": s.expectations.virial_ratio,
                "nodes": s.nodes,
                "steps": s.steps_taken,
            }
            for s in sp
        ],
    }


def run_all(jobs: list[dict], n_workers: int) -> list[dict]:
    if n_workers > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            return list(pool.map(_call, jobs))
    return [_call(j) for j in jobs]


def _call(job: dict) -> dict:
    return solve(**job)


def dump(path, payload) -> None:
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2))
