"""Bound states of the radial Schroedinger equation by imaginary-time propagation."""
from .errors import CollapseError, ContractError, DenseSizeError, NumericDomainError, StepSizeError, ZeroPivotError
from .grid import QuadratureRule, RadialGrid, build_grid, newton_cotes_weights, radial_integral
from .observables import ExpectationSet, count_nodes, expectation_set, moment, radial_distribution, refined_energy
from .oracle import DenseSpectrum, dense_eigensolve, hamiltonian_matrix
from .orthogonality import StateBasis, project_out
from .potentials import PotentialSpec, effective_potential, evaluate_potential
from .propagator import (
    CrankNicolson,
    DiffusionState,
    RadialOperator,
    TridiagonalSystem,
    assemble_step,
    propagate_step,
    thomas_solve,
)
from .solver import EigenstateResult, SolverConfig, Spectrum, initial_guess, solve_spectrum, solve_state

__version__ = "0.1.0"

__all__ = [
    "CollapseError",
    "ContractError",
    "DenseSizeError",
    "NumericDomainError",
    "StepSizeError",
    "ZeroPivotError",
    "QuadratureRule",
    "RadialGrid",
    "build_grid",
    "newton_cotes_weights",
    "radial_integral",
    "ExpectationSet",
    "count_nodes",
    "expectation_set",
    "moment",
    "radial_distribution",
    "refined_energy",
    "DenseSpectrum",
    "dense_eigensolve",
    "hamiltonian_matrix",
    "StateBasis",
    "project_out",
    "PotentialSpec",
    "effective_potential",
    "evaluate_potential",
    "CrankNicolson",
    "DiffusionState",
    "RadialOperator",
    "TridiagonalSystem",
    "assemble_step",
    "propagate_step",
    "thomas_solve",
    "EigenstateResult",
    "SolverConfig",
    "Spectrum",
    "initial_guess",
    "solve_spectrum",
    "solve_state",
]
