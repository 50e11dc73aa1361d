"""Gram-Schmidt projection against already converged lower states."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import CollapseError, ContractError
from .grid import RadialGrid
from .propagator import DiffusionState, stencil_measure

COLLAPSE_RATIO = 1e-12


@dataclass(eq=False)
class StateBasis:
    """Converged states, lowest first, orthonormal under ``measure``.

    The measure defaults to the stencil's own r**2 dr weights, which is the
    inner product the propagation loop works in.
    """

    grid: RadialGrid
    states: list = field(default_factory=list)
    measure: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.measure is None:
            self.measure = stencil_measure(self.grid)
        initial, self.states = self.states, []
        self._matrix = np.zeros((0, self.grid.n_points))
        for s in initial:
            self.add(s)

    def __len__(self) -> int:
        return len(self.states)

    def add(self, state) -> None:
        v = np.array(getattr(state, "values", state), dtype=float)
        if v.shape != self.grid.x.shape:
            raise ValueError("basis state does not live on the basis grid")
        n = np.sqrt(self.measure @ (v * v))
        if not n > 0:
            raise ContractError("zero vector cannot join the basis")
        if self.states:
            v = project_values(v, self)  # converged states are orthogonal already; this only cleans rounding
            n = np.sqrt(self.measure @ (v * v))
        v /= n
        self.states.append(v)
        self._matrix = np.vstack([self._matrix, v])

    def overlaps(self, v: np.ndarray) -> np.ndarray:
        return self._matrix @ (self.measure * v)

    def gram(self) -> np.ndarray:
        return (self._matrix * self.measure) @ self._matrix.T


def project_values(v: np.ndarray, basis: StateBasis) -> np.ndarray:
    """Classical Gram-Schmidt, applied twice. Returns a new array."""
    out = np.array(v, dtype=float)
    if not basis.states:
        return out
    w = basis.measure
    norm_in = np.sqrt(w @ (out * out))
    for _ in range(2):
        out -= basis.overlaps(out) @ basis._matrix
    if not np.sqrt(w @ (out * out)) > COLLAPSE_RATIO * norm_in:
        raise CollapseError("trial state lies in the span of the lower states; start from a different guess")
    return out


def project_out(candidate: DiffusionState, basis: StateBasis) -> DiffusionState:
    """Remove every basis component from ``candidate`` (result unnormalized)."""
    if candidate.values.shape != basis.grid.x.shape:
        raise ValueError("candidate and basis live on different grids")
    if not basis.states:
        return candidate
    return replace(candidate, values=project_values(candidate.values, basis), normalized=False, energy=None)
