"""Central potentials and the effective radial potential.

Families:

* ``isotropic_harmonic``: V = r**2 / 2
* ``morse``: V = 25 (exp(-4(r-3)) - 2 exp(-2(r-3)))
* ``spiked_harmonic``: V = (r**2 + lam / r**alpha) / 2, alpha > 0
  (alpha = 1 is the charged harmonic oscillator)
* ``tabulated``: monotone cubic interpolation of (r, V) samples
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import NumericDomainError
from .grid import RadialGrid

FAMILIES = ("isotropic_harmonic", "morse", "spiked_harmonic", "tabulated")

MORSE_DEPTH = 25.0
MORSE_RANGE = 2.0
MORSE_CENTER = 3.0


@dataclass(frozen=True, eq=False)
class PotentialSpec:
    family: str
    parameters: Mapping[str, Any] = field(default_factory=dict)
    ell: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown potential family {self.family!r}; expected one of {FAMILIES}")
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError(f"ell must be a non-negative integer, got {self.ell!r}")
        params = dict(self.parameters)
        if self.family == "spiked_harmonic":
            missing = {"lam", "alpha"} - params.keys()
            if missing:
                raise ValueError(f"spiked_harmonic needs parameters {sorted(missing)}")
            params["lam"] = float(params["lam"])
            params["alpha"] = float(params["alpha"])
            if not params["alpha"] > 0:
                raise ValueError(f"spiked_harmonic requires alpha > 0, got {params['alpha']}")
        elif self.family == "tabulated":
            r = np.asarray(params.get("r", ()), dtype=float)
            v = np.asarray(params.get("v", ()), dtype=float)
            if r.ndim != 1 or r.shape != v.shape or r.size < 2:
                raise ValueError("tabulated potential needs matching 1-D 'r' and 'v' arrays (>= 2 samples)")
            if np.any(np.diff(r) <= 0):
                raise ValueError("tabulated r samples must be strictly increasing")
            if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
                raise ValueError("tabulated samples must be finite")
            params["r"], params["v"] = r, v
            params["_interp"] = PchipInterpolator(r, v, extrapolate=False)
        object.__setattr__(self, "parameters", params)
        object.__setattr__(self, "ell", int(self.ell))

    @classmethod
    def harmonic(cls, ell: int = 0) -> "PotentialSpec":
        return cls("isotropic_harmonic", {}, ell)

    @classmethod
    def morse(cls, ell: int = 0) -> "PotentialSpec":
        return cls("morse", {}, ell)

    @classmethod
    def spiked(cls, lam: float, alpha: float, ell: int = 0) -> "PotentialSpec":
        return cls("spiked_harmonic", {"lam": lam, "alpha": alpha}, ell)

    @classmethod
    def from_file(cls, path, ell: int = 0) -> "PotentialSpec":
        r, v = load_table(path)
        return cls("tabulated", {"r": r, "v": v, "source": str(path)}, ell)

    def describe(self) -> dict:
        """JSON-friendly summary (tables are summarized, not dumped)."""
        out = {"family": self.family, "ell": self.ell}
        if self.family == "spiked_harmonic":
            out.update(lam=self.parameters["lam"], alpha=self.parameters["alpha"])
        elif self.family == "tabulated":
            out.update(source=self.parameters.get("source"), n_samples=int(self.parameters["r"].size))
        return out

    def __call__(self, r):
        return evaluate_potential(self, r)


def load_table(path) -> tuple[np.ndarray, np.ndarray]:
    """Read a two-column ``r V`` text file; ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
        try:
            rows.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from None
    if not rows:
        raise ValueError(f"{path}: no samples")
    data = np.array(rows)
    return data[:, 0], data[:, 1]


def _potential(spec: PotentialSpec, r: np.ndarray) -> np.ndarray:
    p = spec.parameters
    if spec.family == "isotropic_harmonic":
        return 0.5 * r * r
    if spec.family == "morse":
        y = r - MORSE_CENTER
        return MORSE_DEPTH * (np.exp(-2 * MORSE_RANGE * y) - 2 * np.exp(-MORSE_RANGE * y))
    if spec.family == "spiked_harmonic":
        with np.errstate(over="ignore", divide="ignore"):
            return 0.5 * (r * r + p["lam"] / r ** p["alpha"])
    lo, hi = p["r"][0], p["r"][-1]
    outside = (r < lo) | (r > hi)
    if np.any(outside):
        bad = np.asarray(r)[outside].flat[0]
        raise NumericDomainError(
            f"r = {bad!r} lies outside the tabulated range [{lo!r}, {hi!r}]; extrapolation is not allowed"
        )
    return p["_interp"](r)


def evaluate_potential(spec: PotentialSpec, r):
    """V(r) for scalar or array ``r > 0``."""
    scalar = np.ndim(r) == 0
    ra = np.asarray(r, dtype=float)
    if np.any(~(ra > 0)):
        raise NumericDomainError(f"potential evaluated at non-positive r: {ra[~(ra > 0)].flat[0]!r}")
    v = _potential(spec, ra)
    return float(v) if scalar else v


def effective_potential(spec: PotentialSpec, grid: RadialGrid) -> np.ndarray:
    """v_eff(r_j) = ell(ell+1)/(2 r_j**2) + V(r_j) on every node."""
    r = grid.r
    v = np.asarray(evaluate_potential(spec, r), dtype=float)
    if spec.ell:
        v = v + spec.ell * (spec.ell + 1) / (2.0 * r * r)
    bad = ~np.isfinite(v)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NumericDomainError(
            f"v_eff is not finite at grid point {j + 1} (r = {r[j]!r}); "
            "increase the grid offset or reduce the singularity exponent"
        )
    return v
