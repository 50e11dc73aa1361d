"""Ground and excited states by imaginary-time propagation.

Each state starts from a trial function and is propagated with the mixed
Crank-Nicolson step. After every step it is projected off all lower states
and renormalized. Every ``energy_check_interval`` steps <H> is evaluated, and
propagation stops once two consecutive checks differ by at most
``energy_tolerance``. States are found one at a time, lowest first.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import CollapseError
from .grid import RadialGrid
from .observables import ExpectationSet, count_nodes, expectation_set, normalize_state
from .orthogonality import StateBasis, project_values
from .potentials import PotentialSpec, effective_potential
from .propagator import CrankNicolson, DiffusionState, RadialOperator

log = logging.getLogger(__name__)

GUESS_KINDS = ("gaussian", "gaussian_times_power", "random", "user_supplied")

# Suggested box sizes (a.u.). Morse n = 3 is barely bound and needs ~200.
DEFAULT_R_MAX = {"isotropic_harmonic": 10.0, "spiked_harmonic": 10.0, "morse": 20.0}


@dataclass
class SolverConfig:
    dt: float = 1e-4
    energy_tolerance: float = 1e-12
    max_steps: int = 2_000_000
    mix: float = 0.5
    energy_check_interval: int = 10
    n_states: int = 1
    guess_kind: str = "gaussian"
    seed: int = 0
    max_retries: int = 3
    history_stride: int = 100
    user_guess: Optional[Sequence] = field(default=None, repr=False)

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if not self.energy_tolerance > 0:
            raise ValueError("energy_tolerance must be positive")
        if not 0.0 < self.mix <= 1.0:
            raise ValueError(f"mix must lie in (0, 1], got {self.mix!r}")
        for name in ("max_steps", "energy_check_interval", "n_states", "history_stride"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.guess_kind not in GUESS_KINDS:
            raise ValueError(f"guess_kind must be one of {GUESS_KINDS}, got {self.guess_kind!r}")
        if self.guess_kind == "user_supplied" and self.user_guess is None:
            raise ValueError("guess_kind 'user_supplied' needs user_guess values")


@dataclass
class EigenstateResult:
    index: int
    energy: float
    state: DiffusionState
    expectations: ExpectationSet
    steps_taken: int
    converged: bool
    energy_history: list
    nodes: int = 0
    diagnostics: dict = field(default_factory=dict)


@dataclass
class Spectrum:
    """States found so far plus why the sequence stopped."""

    states: list
    requested: int
    status: str = "converged"
    message: str = ""

    def __iter__(self):
        return iter(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __getitem__(self, i):
        return self.states[i]

    @property
    def energies(self) -> np.ndarray:
        return np.array([s.energy for s in self.states])

    @property
    def ok(self) -> bool:
        return self.status == "converged" and len(self.states) == self.requested


def initial_guess(
    kind: str,
    grid: RadialGrid,
    state_index: int = 0,
    rng: Optional[np.random.Generator] = None,
    values: Optional[Sequence] = None,
) -> DiffusionState:
    """Normalized trial function.

    ``gaussian`` is exp(-r**2/2); ``gaussian_times_power`` multiplies it by
    r**state_index; ``random`` draws uniform noise in [-1, 1] at every node.
    Nothing guarantees overlap with the target state, so callers handle
    collapse.
    """
    r = grid.r
    if kind == "gaussian":
        v = np.exp(-0.5 * r * r)
    elif kind == "gaussian_times_power":
        v = r**state_index * np.exp(-0.5 * r * r)
    elif kind == "random":
        rng = rng if rng is not None else np.random.default_rng()
        v = rng.uniform(-1.0, 1.0, grid.n_points)
    elif kind == "user_supplied":
        if values is None:
            raise ValueError("user_supplied guess needs values")
        v = np.array(values, dtype=float)
        if v.shape != r.shape:
            raise ValueError(f"user guess must have {grid.n_points} samples")
    else:
        raise ValueError(f"unknown guess kind {kind!r}")
    if not np.any(v):
        # exp(-r^2/2) underflows only for absurd boxes; fall back to a decaying exponential
        v = np.exp(-np.sqrt(r))
    return normalize_state(DiffusionState(v), grid)


def _propagate(
    psi: np.ndarray,
    op: RadialOperator,
    cn: CrankNicolson,
    basis: StateBasis,
    config: SolverConfig,
):
    psi = project_values(psi, basis)
    psi /= op.norm(psi)
    energy = op.rayleigh_quotient(psi)
    history = [(0, energy)]
    checks = 0
    last_delta = np.inf
    step = 0
    converged = False
    while step < config.max_steps:
        psi = cn.step(psi, config.mix)
        if len(basis):
            psi = project_values(psi, basis)
        psi /= op.norm(psi)
        step += 1
        if step % config.energy_check_interval == 0:
            new = op.rayleigh_quotient(psi)
            last_delta = new - energy
            energy = new
            checks += 1
            if checks % config.history_stride == 0:
                history.append((step, energy))
            if abs(last_delta) <= config.energy_tolerance:
                converged = True
                break
    if history[-1][0] != step:
        history.append((step, energy))
    return psi, energy, step, converged, last_delta, history


def solve_state(
    spec: PotentialSpec,
    grid: RadialGrid,
    config: SolverConfig,
    basis: Optional[StateBasis] = None,
    *,
    index: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    operator: Optional[RadialOperator] = None,
) -> EigenstateResult:
    """Converge the lowest state orthogonal to ``basis``."""
    basis = basis if basis is not None else StateBasis(grid)
    index = len(basis) if index is None else index
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    op = operator if operator is not None else RadialOperator(grid, effective_potential(spec, grid))
    cn = CrankNicolson(op, config.dt)

    kinds = [config.guess_kind] + ["random"] * config.max_retries
    for attempt, kind in enumerate(kinds):
        guess = initial_guess(kind, grid, index, rng=rng, values=config.user_guess)
        try:
            psi, energy, steps, converged, delta, history = _propagate(guess.values, op, cn, basis, config)
            break
        except CollapseError:
            log.warning("state %d: guess %r collapsed onto lower states (attempt %d)", index, kind, attempt + 1)
            if attempt == len(kinds) - 1:
                raise CollapseError(
                    f"state {index}: every trial function collapsed onto the {len(basis)} lower states"
                ) from None

    residual = op.apply(psi) - energy * psi
    state = normalize_state(DiffusionState(psi, time_step=steps, energy=energy), grid)
    exps = expectation_set(state, spec, grid, operator=op)
    if not converged:
        log.warning("state %d not converged after %d steps (last dE = %.3e)", index, steps, delta)
    return EigenstateResult(
        index=index,
        energy=energy,
        state=state,
        expectations=exps,
        steps_taken=steps,
        converged=converged,
        energy_history=history,
        nodes=count_nodes(state.values),
        diagnostics={
            "attempts": attempt + 1,
            "guess": kind,
            "last_energy_change": float(delta),
            "residual": op.norm(residual) / op.norm(psi),
            "basis_overlap_max": float(np.max(np.abs(basis.overlaps(psi)), initial=0.0)) / op.norm(psi),
        },
    )


def solve_spectrum(spec: PotentialSpec, grid: RadialGrid, config: SolverConfig) -> Spectrum:
    """The ``config.n_states`` lowest states, stopping at the first failure."""
    op = RadialOperator(grid, effective_potential(spec, grid))
    basis = StateBasis(grid)
    rng = np.random.default_rng(config.seed)
    out = Spectrum(states=[], requested=config.n_states)
    for n in range(config.n_states):
        try:
            result = solve_state(spec, grid, config, basis, index=n, rng=rng, operator=op)
        except CollapseError as exc:
            out.status, out.message = "collapsed", str(exc)
            return out
        out.states.append(result)
        if not result.converged:
            out.status = "not_converged"
            out.message = (
                f"state {n} did not converge in {result.steps_taken} steps; "
                "higher states need properly converged lower ones and were not attempted"
            )
            return out
        basis.add(result.state)
        log.info("state %d: E = %.10f (%d steps)", n, result.energy, result.steps_taken)
    return out
