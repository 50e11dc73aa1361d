"""Serialization of solver output: JSON reports, density CSVs, text tables."""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .grid import RadialGrid
from .observables import radial_distribution
from .solver import Spectrum

REPORT_SCHEMA_VERSION = 1


def state_record(result) -> dict:
    ex = result.expectations
    return {
        "index": result.index,
        "energy": result.energy,
        "energy_refined": ex.energy_refined,
        "kinetic": ex.kinetic,
        "potential": ex.potential_exp,
        "moments": {str(k): v for k, v in ex.moments.items()},
        "virial_ratio": ex.virial_ratio,
        "nodes": result.nodes,
        "steps": result.steps_taken,
        "converged": result.converged,
        "last_energy_change": result.diagnostics.get("last_energy_change"),
        "diagnostics": {k: v for k, v in ex.diagnostics.items()},
    }


def run_record(label, sweep_value, spec, grid: RadialGrid, spectrum: Spectrum) -> dict:
    return {
        "label": label,
        "sweep_value": sweep_value,
        "potential": spec.describe(),
        "grid": {"n_points": grid.n_points, "r_max": grid.r_max, "offset": grid.offset},
        "status": spectrum.status,
        "message": spectrum.message,
        "requested_states": spectrum.requested,
        "states": [state_record(s) for s in spectrum],
    }


def write_report(path, manifest_dict: dict, runs: list) -> dict:
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "manifest": manifest_dict,
        "all_converged": all(r["status"] == "converged" and len(r["states"]) == r["requested_states"] for r in runs),
        "runs": runs,
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    # sorted keys and no timestamps keep reruns byte-identical
    path.write_text(json.dumps(report, indent=2, sort_keys=True, allow_nan=True) + "\n")
    return report


def _safe(label: str) -> str:
    return "".join(c if c.isalnum() or c in "-_.=" else "_" for c in label)


def write_densities(directory, label: str, grid: RadialGrid, v_eff, spectrum: Spectrum) -> list:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for result in spectrum:
        rdf = radial_distribution(result.state, grid)
        path = directory / f"{_safe(label)}_state{result.index}.csv"
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["r", "psi", "rdf", "v_eff"])
            for r, psi, p, v in zip(grid.r, result.state.values, rdf[:, 1], v_eff):
                writer.writerow([repr(float(r)), repr(float(psi)), repr(float(p)), repr(float(v))])
        written.append(path)
    return written


def read_density(path) -> np.ndarray:
    return np.loadtxt(path, delimiter=",", skiprows=1)


def format_table(run: dict) -> str:
    head = f"{'n':>3} {'E':>16} {'E_refined':>16} {'<r^-2>':>12} {'<r^-1>':>12} {'<r^0>':>12} {'<r>':>12} {'<r^2>':>12} {'V/T':>10} {'nodes':>5} {'steps':>8}"
    lines = [f"# {run['label']}  {run['potential']}  N={run['grid']['n_points']} r_max={run['grid']['r_max']}  status={run['status']}", head]
    for s in run["states"]:
        m = s["moments"]
        lines.append(
            f"{s['index']:>3} {s['energy']:>16.10f} {s['energy_refined']:>16.10f} "
            + " ".join(f"{m[k]:>12.8f}" for k in ("-2", "-1", "0", "1", "2"))
            + f" {s['virial_ratio']:>10.6f} {s['nodes']:>5} {s['steps']:>8}"
        )
    if run["message"]:
        lines.append(f"# {run['message']}")
    return "\n".join(lines)


def load_report(path) -> dict:
    data = json.loads(Path(path).read_text())
    if data.get("schema_version") != REPORT_SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported report schema_version {data.get('schema_version')!r}")
    return data


def compare_reports(a: dict, b: dict, field: str = "energy"):
    """Align runs by label and states by index.

    Returns (rows, missing, max_delta). ``missing`` lists entries present in
    only one report.
    """
    runs_a = {r["label"]: r for r in a["runs"]}
    runs_b = {r["label"]: r for r in b["runs"]}
    rows, missing = [], []
    for label in list(runs_a) + [l for l in runs_b if l not in runs_a]:
        ra, rb = runs_a.get(label), runs_b.get(label)
        if ra is None or rb is None:
            missing.append(f"run {label!r} only in {'first' if rb is None else 'second'} report")
            continue
        sa = {s["index"]: s for s in ra["states"]}
        sb = {s["index"]: s for s in rb["states"]}
        for idx in sorted(set(sa) | set(sb)):
            if idx not in sa or idx not in sb:
                missing.append(f"run {label!r} state {idx} only in {'first' if idx in sa else 'second'} report")
                continue
            va, vb = sa[idx][field], sb[idx][field]
            rows.append((label, idx, va, vb, vb - va))
    max_delta = max((abs(r[4]) for r in rows), default=0.0)
    return rows, missing, max_delta
