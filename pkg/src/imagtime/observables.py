"""Expectation values of a converged radial state.

Two quadratures are in play. Energies, kinetic and potential expectation
values use the stencil measure, so that <H> is exactly the discrete Rayleigh
quotient and <T> + <V> = <H> holds to rounding. Moments <r^k> and the radial
distribution use composite Newton-Cotes on the x-mesh with the r**2 dr
Jacobian. A fourth-order gradient-form energy is reported alongside.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ContractError, NumericDomainError
from .grid import QuadratureRule, RadialGrid
from .potentials import PotentialSpec, effective_potential, evaluate_potential
from .propagator import DiffusionState, RadialOperator

MOMENT_ORDERS = (-2, -1, 0, 1, 2)
NODE_THRESHOLD = 1e-8


@dataclass
class ExpectationSet:
    """Observables of one normalized state.

    ``kinetic`` is <H> - <V> and therefore contains the centrifugal energy
    (reported separately in ``centrifugal``); ``potential_exp`` is <V> without
    it. The ``*_refined`` entries come from the fourth-order re-evaluation.
    """

    energy: float
    kinetic: float
    potential_exp: float
    moments: dict
    virial_ratio: float
    energy_refined: float
    kinetic_refined: float
    centrifugal: float = 0.0
    diagnostics: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "energy": self.energy,
            "energy_refined": self.energy_refined,
            "kinetic": self.kinetic,
            "kinetic_refined": self.kinetic_refined,
            "potential": self.potential_exp,
            "centrifugal": self.centrifugal,
            "moments": {str(k): v for k, v in self.moments.items()},
            "virial_ratio": self.virial_ratio,
            "diagnostics": dict(self.diagnostics),
        }


def _rule(grid: RadialGrid) -> QuadratureRule:
    return QuadratureRule.for_grid(grid)


def norm_squared(values: np.ndarray, grid: RadialGrid) -> float:
    """Integral of psi**2 r**2 dr by Newton-Cotes in x."""
    return _rule(grid).integrate(values * values * grid.volume_element)


def normalize_state(state: DiffusionState, grid: RadialGrid) -> DiffusionState:
    n2 = norm_squared(state.values, grid)
    if not n2 > 0:
        raise ContractError("cannot normalize a zero state")
    return replace(state, values=state.values / np.sqrt(n2), normalized=True)


def _require_normalized(state: DiffusionState, grid: RadialGrid) -> None:
    if not state.normalized:
        raise ContractError("state must be normalized")
    if not np.any(state.values):
        raise ContractError("zero state cannot be normalized")


def energy_expectation(state: DiffusionState, v_eff, grid: RadialGrid) -> float:
    """<H> with H the propagator's central-difference operator."""
    _require_normalized(state, grid)
    return RadialOperator(grid, v_eff).rayleigh_quotient(state.values)


def moment(state: DiffusionState, grid: RadialGrid, k: int) -> float:
    """<r^k> = integral psi**2 r**(k+2) dr."""
    if int(k) != k or not -2 <= k <= 2:
        raise ValueError(f"moment order must be an integer in [-2, 2], got {k!r}")
    _require_normalized(state, grid)
    f = state.values**2 * grid.r ** (k + 2) * grid.jacobian
    return _rule(grid).integrate(f)


def _derivative_x(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order central d/dx with the Dirichlet ghost psi(offset) = 0."""
    # odd reflection about the inner ghost node, zeros past the outer edge
    p = np.concatenate(([-values[0], 0.0], values, [0.0, 0.0]))
    return (8.0 * (p[3:-1] - p[1:-3]) - (p[4:] - p[:-4])) / (12.0 * h)


def refined_kinetic(state: DiffusionState, grid: RadialGrid) -> float:
    """<T> from (1/2) integral |dR/dr|**2 r**2 dr = (1/4) integral (dpsi/dx)**2 x**3 dx."""
    rule = _rule(grid)
    dpsi = _derivative_x(state.values, grid.spacing)
    t = 0.25 * rule.integrate(dpsi**2 * grid.x**3)
    return t / norm_squared(state.values, grid)


def refined_energy(state: DiffusionState, v_eff, grid: RadialGrid) -> float:
    """Energy with a fourth-order derivative and Newton-Cotes quadrature.

    This is not the quantity the propagation converges on; it re-evaluates
    the converged discrete state with a more accurate kinetic term.
    """
    _require_normalized(state, grid)
    v = np.asarray(v_eff, dtype=float)
    pot = _rule(grid).integrate(state.values**2 * v * grid.volume_element) / norm_squared(state.values, grid)
    return refined_kinetic(state, grid) + pot


def virial_ratio(state: DiffusionState, spec: PotentialSpec, grid: RadialGrid) -> float:
    """<V>/<T>, V without the centrifugal term and T = <H> - <V>."""
    _require_normalized(state, grid)
    op = RadialOperator(grid, effective_potential(spec, grid))
    return _virial(op, state.values, evaluate_potential(spec, grid.r))[2]


def _virial(op: RadialOperator, values: np.ndarray, v: np.ndarray) -> tuple[float, float, float]:
    den = op.norm(values) ** 2
    energy = op.rayleigh_quotient(values)
    pot = op.potential_form(values, v) / den
    kinetic = energy - pot
    if abs(kinetic) < 1e-12:
        raise NumericDomainError("<T> vanishes; virial ratio undefined")
    return energy, kinetic, pot / kinetic


def radial_distribution(state: DiffusionState, grid: RadialGrid) -> np.ndarray:
    """(N, 2) array of (r, r**2 psi**2)."""
    _require_normalized(state, grid)
    return np.column_stack([grid.r, grid.r**2 * state.values**2])


def count_nodes(values: np.ndarray, threshold: float = NODE_THRESHOLD) -> int:
    """Sign changes of psi, ignoring samples below threshold * max|psi|."""
    values = np.asarray(values, dtype=float)
    cut = threshold * np.max(np.abs(values))
    signs = np.sign(values[np.abs(values) > cut])
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def expectation_set(
    state: DiffusionState,
    spec: PotentialSpec,
    grid: RadialGrid,
    operator: Optional[RadialOperator] = None,
) -> ExpectationSet:
    _require_normalized(state, grid)
    op = operator if operator is not None else RadialOperator(grid, effective_potential(spec, grid))
    v = np.asarray(evaluate_potential(spec, grid.r), dtype=float)
    psi = state.values
    energy, kinetic, ratio = _virial(op, psi, v)
    den = op.norm(psi) ** 2
    potential = op.potential_form(psi, v) / den
    centrifugal = op.potential_form(psi, op.v_eff - v) / den if spec.ell else 0.0
    e_ref = refined_energy(state, op.v_eff, grid)
    pot_nc = _rule(grid).integrate(psi**2 * v * grid.volume_element) / norm_squared(psi, grid)
    diagnostics = {}
    if spec.family == "spiked_harmonic":
        harmonic = op.potential_form(psi, 0.5 * grid.r**2) / den
        diagnostics["potential_harmonic_part"] = harmonic
        diagnostics["potential_spike_part"] = potential - harmonic
        diagnostics["virial_ratio_harmonic_part"] = harmonic / kinetic
    return ExpectationSet(
        energy=energy,
        kinetic=kinetic,
        potential_exp=potential,
        moments={k: moment(state, grid, k) for k in MOMENT_ORDERS},
        virial_ratio=ratio,
        energy_refined=e_ref,
        kinetic_refined=e_ref - pot_nc,
        centrifugal=centrifugal,
        diagnostics=diagnostics,
    )
