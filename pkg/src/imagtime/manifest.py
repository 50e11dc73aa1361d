"""Run manifests: YAML files describing one solve or a parameter sweep.

Schema (version 1)::

    schema_version: 1
    potential: {family: spiked_harmonic, parameters: {lam: 10, alpha: 1}, ell: 0}
    grid: {n_points: 10001, r_max: 20.0, offset: 1.0e-6}
    solver: {dt: 0.1, tolerance: 1.0e-12, max_steps: 2000000, mix: 0.5,
             n_states: 6, guess: gaussian, energy_check_interval: 10}
    sweep: {parameter: lam, values: [0.001, 0.1, 10]}      # optional
    output: {report: out/report.json, density: out/densities, format: json}

A sweep parameter is either a potential parameter name (``lam``, ``alpha``)
or ``grid.n_points`` / ``grid.r_max``. Relative paths resolve against the
manifest's directory.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .grid import DEFAULT_OFFSET
from .potentials import FAMILIES, PotentialSpec
from .solver import GUESS_KINDS, SolverConfig

SCHEMA_VERSION = 1
TOP_LEVEL = {"schema_version", "potential", "grid", "solver", "sweep", "output"}
SOLVER_KEYS = {
    "dt": "dt",
    "tolerance": "energy_tolerance",
    "max_steps": "max_steps",
    "mix": "mix",
    "n_states": "n_states",
    "guess": "guess_kind",
    "energy_check_interval": "energy_check_interval",
    "max_retries": "max_retries",
    "history_stride": "history_stride",
}
GRID_SWEEPABLE = ("grid.n_points", "grid.r_max")


class ManifestError(ValueError):
    def __init__(self, message: str, source: str = "<manifest>", line: Optional[int] = None, field: str = ""):
        self.source, self.line, self.field = source, line, field
        where = f"{source}:{line}" if line else source
        what = f" [{field}]" if field else ""
        super().__init__(f"{where}{what}: {message}")


@dataclass
class RunManifest:
    potential: dict
    grid: dict
    solver: dict
    output: dict
    sweep: Optional[dict] = None
    base_dir: Path = field(default_factory=Path.cwd)
    source: str = "<manifest>"

    def runs(self) -> list[dict]:
        """Expanded run points: each has a label plus potential/grid blocks."""
        if not self.sweep:
            return [{"label": "run", "sweep_value": None, "potential": self.potential, "grid": self.grid}]
        name = self.sweep["parameter"]
        out = []
        for i, value in enumerate(self.sweep["values"]):
            pot, grid = copy.deepcopy(self.potential), copy.deepcopy(self.grid)
            if name in GRID_SWEEPABLE:
                grid[name.split(".", 1)[1]] = value
            else:
                pot.setdefault("parameters", {})[name] = value
            out.append({"label": f"{name}={value}", "sweep_value": value, "potential": pot, "grid": grid, "index": i})
        return out

    def solver_config(self, seed: Optional[int] = None) -> SolverConfig:
        kwargs = {SOLVER_KEYS[k]: v for k, v in self.solver.items() if k in SOLVER_KEYS}
        if seed is not None:
            kwargs["seed"] = seed
        elif "seed" in self.solver:
            kwargs["seed"] = self.solver["seed"]
        return SolverConfig(**kwargs)

    def potential_spec(self, block: dict) -> PotentialSpec:
        params = dict(block.get("parameters") or {})
        if block["family"] == "tabulated":
            return PotentialSpec.from_file(self.resolve(params["file"]), ell=block.get("ell", 0))
        return PotentialSpec(block["family"], params, block.get("ell", 0))

    def resolve(self, path) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    def as_dict(self) -> dict:
        out = {
            "schema_version": SCHEMA_VERSION,
            "potential": self.potential,
            "grid": self.grid,
            "solver": self.solver,
            "output": self.output,
        }
        if self.sweep:
            out["sweep"] = self.sweep
        return out


def _line_index(node, prefix=(), table=None) -> dict:
    """Map dotted field paths to 1-based source lines."""
    table = {} if table is None else table
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            path = prefix + (str(key.value),)
            table[".".join(path)] = key.start_mark.line + 1
            _line_index(value, path, table)
    elif isinstance(node, yaml.SequenceNode):
        for i, value in enumerate(node.value):
            path = prefix + (str(i),)
            table[".".join(path)] = value.start_mark.line + 1
            _line_index(value, path, table)
    return table


def parse_manifest(text: str, source: str = "<manifest>", base_dir: Optional[Path] = None) -> RunManifest:
    try:
        node = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ManifestError(f"YAML syntax error: {getattr(exc, 'problem', exc)}", source, mark.line + 1 if mark else None) from None
    lines = _line_index(node) if node is not None else {}

    def fail(msg: str, path: str):
        # fall back to the closest enclosing field that has a line
        probe = path
        while probe and probe not in lines:
            probe = probe.rpartition(".")[0]
        raise ManifestError(msg, source, lines.get(probe), path)

    if not isinstance(data, dict):
        fail("manifest must be a mapping", "")
    for key in data:
        if key not in TOP_LEVEL:
            fail(f"unknown top-level key {key!r}", str(key))
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        fail(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})", "schema_version")
    for block in ("potential", "grid", "solver", "output"):
        if not isinstance(data.get(block), dict):
            fail(f"missing or non-mapping '{block}' block", block)

    pot = data["potential"]
    if pot.get("family") not in FAMILIES:
        fail(f"family must be one of {FAMILIES}", "potential.family")
    if not isinstance(pot.get("parameters", {}) or {}, dict):
        fail("parameters must be a mapping", "potential.parameters")
    ell = pot.get("ell", 0)
    if not isinstance(ell, int) or ell < 0:
        fail("ell must be a non-negative integer", "potential.ell")
    if pot["family"] == "tabulated" and "file" not in (pot.get("parameters") or {}):
        fail("tabulated potential needs parameters.file", "potential.parameters")

    grid = dict(data["grid"])
    for key in grid:
        if key not in ("n_points", "r_max", "offset"):
            fail(f"unknown grid key {key!r}", f"grid.{key}")
    if not isinstance(grid.get("n_points"), int) or grid["n_points"] < 3:
        fail("n_points must be an integer >= 3", "grid.n_points")
    for key in ("r_max", "offset"):
        grid.setdefault("offset", DEFAULT_OFFSET)
        value = grid.get(key)
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0:
            fail(f"{key} must be a positive number", f"grid.{key}")

    solver = dict(data["solver"])
    for key in solver:
        if key not in SOLVER_KEYS and key != "seed":
            fail(f"unknown solver key {key!r}", f"solver.{key}")
    if solver.get("guess", "gaussian") not in GUESS_KINDS or solver.get("guess") == "user_supplied":
        fail("guess must be one of gaussian, gaussian_times_power, random", "solver.guess")
    n_states = solver.get("n_states", 1)
    if not isinstance(n_states, int) or n_states < 1:
        fail("n_states must be a positive integer", "solver.n_states")

    sweep = data.get("sweep")
    if sweep is not None:
        if not isinstance(sweep, dict) or "parameter" not in sweep or "values" not in sweep:
            fail("sweep needs 'parameter' and 'values'", "sweep")
        if not isinstance(sweep["values"], list) or not sweep["values"]:
            fail("sweep values must be a non-empty list", "sweep.values")
        name = sweep["parameter"]
        if name.startswith("grid.") and name not in GRID_SWEEPABLE:
            fail(f"only {GRID_SWEEPABLE} can be swept on the grid", "sweep.parameter")

    output = dict(data["output"])
    if "report" not in output:
        fail("output.report path is required", "output")
    if output.get("format", "json") != "json":
        fail("only the 'json' report format is supported", "output.format")

    manifest = RunManifest(
        potential=pot, grid=grid, solver=solver, output=output, sweep=sweep,
        base_dir=base_dir if base_dir is not None else Path.cwd(), source=source,
    )
    # build every derived object once so bad values surface here, not mid-run
    try:
        manifest.solver_config()
    except (TypeError, ValueError) as exc:
        fail(str(exc), "solver")
    for run in manifest.runs():
        try:
            manifest.potential_spec(run["potential"])
        except (KeyError, ValueError, OSError) as exc:
            fail(f"{run['label']}: {exc}", "potential")
        if sweep is not None and sweep["parameter"] == "grid.n_points":
            if not isinstance(run["grid"]["n_points"], int) or run["grid"]["n_points"] < 3:
                fail("swept n_points must be integers >= 3", "sweep.values")
    return manifest


def load_manifest(path) -> RunManifest:
    path = Path(path)
    return parse_manifest(path.read_text(), source=str(path), base_dir=path.parent.resolve())
