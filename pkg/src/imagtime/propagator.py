"""One imaginary-time step of the radial diffusion equation.

In the transformed coordinate the radial Hamiltonian reads

    H = a(x) D_x**2 + b(x) D_x + v_eff,   a = -1/(8x**2),  b = -3/(8x**3)

Central differences (2h for D_x, h**2 for D_x**2) with Dirichlet ghosts
psi_0 = psi_{N+1} = 0 give a tridiagonal operator. The symmetric
Crank-Nicolson split of exp(-dt H) then yields, per step,

    alpha_j psi'_{j-1} + beta_j psi'_j + gamma_j psi'_{j+1} = xi_j

with alpha = -dt/(16 x^2 h^2) + 3dt/(32 x^3 h),
     beta  = 1 + dt/(8 x^2 h^2) + dt v_eff / 2,
     gamma = -dt/(16 x^2 h^2) - 3dt/(32 x^3 h),
and xi = (2 - A) psi the explicit half step.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Optional

import numpy as np
from numba import njit

from .errors import ContractError, NumericDomainError, StepSizeError, ZeroPivotError
from .grid import RadialGrid


@dataclass(frozen=True, eq=False)
class DiffusionState:
    values: np.ndarray = field(repr=False)
    time_step: int = 0
    normalized: bool = False
    energy: Optional[float] = None

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1:
            raise ValueError("state values must be a 1-D array")
        if not np.all(np.isfinite(v)):
            j = int(np.flatnonzero(~np.isfinite(v))[0])
            raise NumericDomainError(f"non-finite wavefunction value at node {j}")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    """Rows ``sub[j] y[j-1] + diag[j] y[j] + sup[j] y[j+1] = rhs[j]``.

    ``sub[0]`` and ``sup[-1]`` multiply the zero ghost values and are stored as 0.
    """

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        n = len(self.diag)
        for name in ("sub", "sup", "rhs"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must have length {n}")

    @property
    def diagonally_dominant(self) -> bool:
        off = np.abs(self.sub) + np.abs(self.sup)
        off[0] = abs(self.sup[0])
        off[-1] = abs(self.sub[-1])
        return bool(np.all(np.abs(self.diag) > off))

    def matvec(self, y: np.ndarray) -> np.ndarray:
        out = self.diag * y
        out[1:] += self.sub[1:] * y[:-1]
        out[:-1] += self.sup[:-1] * y[1:]
        return out


@njit(cache=True)
def _factor(sub, diag, sup):
    n = diag.size
    piv = np.empty(n)
    mult = np.zeros(n)
    piv[0] = diag[0]
    for i in range(1, n):
        mult[i] = sub[i] / piv[i - 1]
        piv[i] = diag[i] - mult[i] * sup[i - 1]
    return piv, mult


@njit(cache=True)
def _substitute(mult, piv, sup, rhs):
    n = rhs.size
    y = np.empty(n)
    y[0] = rhs[0]
    for i in range(1, n):
        y[i] = rhs[i] - mult[i] * y[i - 1]
    y[n - 1] /= piv[n - 1]
    for i in range(n - 2, -1, -1):
        y[i] = (y[i] - sup[i] * y[i + 1]) / piv[i]
    return y


class TridiagonalFactorization:
    """Thomas forward elimination done once; reused for many right-hand sides."""

    def __init__(self, sub, diag, sup):
        self.sub = np.ascontiguousarray(sub, dtype=float)
        self.diag = np.ascontiguousarray(diag, dtype=float)
        self.sup = np.ascontiguousarray(sup, dtype=float)
        self.pivots, self.multipliers = _factor(self.sub, self.diag, self.sup)
        scale = np.abs(self.sub) + np.abs(self.diag) + np.abs(self.sup)
        tiny = np.abs(self.pivots) <= 64 * np.finfo(float).eps * scale
        if tiny.any() or not np.all(np.isfinite(self.pivots)):
            j = int(np.flatnonzero(tiny | ~np.isfinite(self.pivots))[0])
            raise ZeroPivotError(f"zero pivot in row {j} of the tridiagonal system")

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        return _substitute(self.multipliers, self.pivots, self.sup, np.ascontiguousarray(rhs, dtype=float))


def thomas_solve(system: TridiagonalSystem) -> np.ndarray:
    """Solve a tridiagonal system by Thomas elimination (no pivoting)."""
    sub = np.array(system.sub, dtype=float)
    sup = np.array(system.sup, dtype=float)
    sub[0] = 0.0
    sup[-1] = 0.0
    return TridiagonalFactorization(sub, system.diag, sup).solve(system.rhs)


def stencil_coefficients(x: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Kinetic part of H on the x-mesh: coefficients of psi_{j-1}, psi_j, psi_{j+1}."""
    x = np.asarray(x, dtype=float)
    second = 1.0 / (8.0 * x**2 * h**2)
    first = 3.0 / (16.0 * x**3 * h)
    return -second + first, 2.0 * second, -second - first


def cn_coefficients(x, h: float, dt: float, v_eff) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """alpha, beta, gamma of the Crank-Nicolson rows, straight from the closed forms."""
    x = np.asarray(x, dtype=float)
    v_eff = np.asarray(v_eff, dtype=float)
    alpha = -dt / (16 * x**2 * h**2) + 3 * dt / (32 * x**3 * h)
    beta = 1 + dt / (8 * x**2 * h**2) + dt / 2 * v_eff
    gamma = -dt / (16 * x**2 * h**2) - 3 * dt / (32 * x**3 * h)
    return alpha, beta, gamma


@lru_cache(maxsize=16)
def stencil_measure(grid: RadialGrid) -> np.ndarray:
    """Node weights under which the discrete H is self-adjoint.

    The three-point operator satisfies ``w[j] upper[j] = w[j+1] lower[j+1]``;
    ``w`` is a discrete r**2 dr measure, scaled so that ``w[j] -> 2 x_j**5 h``
    far from the origin. Energies, norms and overlaps inside the propagation
    loop use it, which keeps the Rayleigh quotient stationary at eigenvectors.
    """
    lower, _, upper = stencil_coefficients(grid.x, grid.spacing)
    if np.any(lower[1:] >= 0) or np.any(upper >= 0):
        raise NumericDomainError("grid too coarse near the origin: stencil is not symmetrizable")
    log_ratio = np.log(-upper[:-1]) - np.log(-lower[1:])
    log_w = np.concatenate(([0.0], np.cumsum(log_ratio)))
    log_w += np.log(2.0 * grid.x[-1] ** 5 * grid.spacing) - log_w[-1]
    w = np.exp(log_w)
    w.flags.writeable = False
    return w


class RadialOperator:
    """The discrete radial Hamiltonian for one grid and effective potential."""

    def __init__(self, grid: RadialGrid, v_eff):
        v_eff = np.asarray(v_eff, dtype=float)
        if v_eff.shape != grid.x.shape:
            raise ValueError(f"v_eff must have {grid.n_points} samples")
        if not np.all(np.isfinite(v_eff)):
            raise NumericDomainError("v_eff contains non-finite values")
        self.grid = grid
        self.v_eff = v_eff
        self.lower, self.diag_kinetic, self.upper = stencil_coefficients(grid.x, grid.spacing)
        self.diag = self.diag_kinetic + v_eff
        self.measure = stencil_measure(grid)
        # w_j * |upper_j|: weight of (psi_{j+1} - psi_j)**2 in the quadratic form
        self._bond = -self.measure[:-1] * self.upper[:-1]
        # boundary rows lose one neighbour to the zero ghost
        self._edge_first = -self.measure[0] * self.lower[0]
        self._edge_last = -self.measure[-1] * self.upper[-1]

    @property
    def n_points(self) -> int:
        return self.grid.n_points

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """H psi, evaluated through neighbour differences to limit cancellation."""
        psi = np.asarray(psi, dtype=float)
        d = np.diff(psi, prepend=0.0, append=0.0)
        return self.upper * d[1:] - self.lower * d[:-1] + self.v_eff * psi

    def inner(self, f: np.ndarray, g: np.ndarray) -> float:
        return float(self.measure @ (f * g))

    def norm(self, f: np.ndarray) -> float:
        return float(np.sqrt(self.measure @ (f * f)))

    def kinetic_form(self, psi: np.ndarray) -> float:
        d = np.diff(psi)
        return float(self._bond @ (d * d) + self._edge_first * psi[0] ** 2 + self._edge_last * psi[-1] ** 2)

    def potential_form(self, psi: np.ndarray, v: Optional[np.ndarray] = None) -> float:
        v = self.v_eff if v is None else v
        return float(self.measure @ (v * psi * psi))

    def rayleigh_quotient(self, psi: np.ndarray) -> float:
        """<psi|H|psi> / <psi|psi> in the symmetric (summation-by-parts) form."""
        psi = np.asarray(psi, dtype=float)
        den = float(self.measure @ (psi * psi))
        if not den > 0:
            raise ContractError("cannot take the energy of a zero state")
        return (self.kinetic_form(psi) + self.potential_form(psi)) / den

    def dense(self) -> np.ndarray:
        n = self.n_points
        m = np.diag(self.diag)
        m[np.arange(1, n), np.arange(n - 1)] = self.lower[1:]
        m[np.arange(n - 1), np.arange(1, n)] = self.upper[:-1]
        return m


class CrankNicolson:
    """Factorized Crank-Nicolson step ``(1 + dt H/2) psi' = (1 - dt H/2) psi``.

    The left-hand matrix does not change between steps, so it is eliminated
    once and each step costs one forward/back substitution.
    """

    def __init__(self, operator: RadialOperator, dt: float):
        if not dt > 0:
            raise ValueError(f"dt must be positive, got {dt!r}")
        self.operator = operator
        self.dt = float(dt)
        grid = operator.grid
        alpha, beta, gamma = cn_coefficients(grid.x, grid.spacing, dt, operator.v_eff)
        self.alpha = alpha
        self.beta = beta
        self.gamma = gamma
        sub = alpha.copy()
        sub[0] = 0.0
        sup = gamma.copy()
        sup[-1] = 0.0
        self._sub, self._sup = sub, sup
        try:
            self.factorization = TridiagonalFactorization(sub, beta, sup)
        except ZeroPivotError:
            raise StepSizeError(self._advice()) from None
        # The matrix is similar to a symmetric one, so positive pivots <=> positive
        # definite <=> 1 + dt*E/2 > 0 for every discrete eigenvalue E.
        if np.any(self.factorization.pivots <= 0):
            raise StepSizeError(self._advice())

    def _advice(self) -> str:
        return (
            f"dt = {self.dt:g} makes 1 + dt*H/2 indefinite (some discrete eigenvalue E has "
            "1 + dt*E/2 <= 0); use a smaller dt, below 2/|E_lowest|"
        )

    def rhs(self, psi: np.ndarray) -> np.ndarray:
        """xi = psi - (dt/2) H psi, i.e. -alpha psi_{j-1} + (2 - beta) psi_j - gamma psi_{j+1}."""
        return psi - 0.5 * self.dt * self.operator.apply(psi)

    def system(self, psi: np.ndarray) -> TridiagonalSystem:
        return TridiagonalSystem(self._sub.copy(), self.beta.copy(), self._sup.copy(), self.rhs(psi))

    def advance(self, psi: np.ndarray) -> np.ndarray:
        """Unnormalized psi'^(n+1) from psi^n."""
        return self.factorization.solve(self.rhs(psi))

    def step(self, psi: np.ndarray, mix: float = 0.5) -> np.ndarray:
        """``mix * psi' + (1 - mix) * psi``; mix = 0.5 damps the stiff modes."""
        new = self.advance(psi)
        if mix == 1.0:
            return new
        return mix * new + (1.0 - mix) * psi


def assemble_step(state: DiffusionState, v_eff, grid: RadialGrid, dt: float) -> TridiagonalSystem:
    """Tridiagonal system advancing ``state`` by one imaginary-time step."""
    if not state.normalized:
        raise ContractError("assemble_step expects a normalized state")
    return CrankNicolson(RadialOperator(grid, v_eff), dt).system(state.values)


def propagate_step(
    state: DiffusionState, v_eff, grid: RadialGrid, dt: float, mix: float = 0.5
) -> DiffusionState:
    """One mixed Crank-Nicolson step; the result is flagged unnormalized."""
    if not state.normalized:
        raise ContractError("propagate_step expects a normalized state")
    if not 0.0 <= mix <= 1.0:
        raise ValueError(f"mix must lie in [0, 1], got {mix!r}")
    if mix == 0.0:
        warnings.warn("propagate_step with mix=0 is a no-op", RuntimeWarning, stacklevel=2)
        return replace(state, values=state.values.copy(), time_step=state.time_step + 1, normalized=False)
    out = CrankNicolson(RadialOperator(grid, v_eff), dt).step(state.values, mix)
    return DiffusionState(out, time_step=state.time_step + 1, normalized=False)
