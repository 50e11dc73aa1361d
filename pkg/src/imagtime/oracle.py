"""Dense reference eigensolver for the discrete radial Hamiltonian.

Verification only: it rebuilds the central-difference matrix of
H = -1/(8x^2) D^2 - 3/(8x^3) D + v_eff from scratch, diagonalizes it with a
general (non-symmetric) LAPACK eigensolver and polishes each eigenpair by
inverse iteration with a banded LU solve. Nothing in the propagation path
calls into this module.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .errors import DenseSizeError
from .grid import RadialGrid

MAX_DENSE_POINTS = 2000


@dataclass(frozen=True, eq=False)
class DenseSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray


def hamiltonian_matrix(v_eff, grid: RadialGrid) -> np.ndarray:
    x, h = grid.x, grid.spacing
    a = -1.0 / (8.0 * x**2)
    b = -3.0 / (8.0 * x**3)
    n = x.size
    m = np.zeros((n, n))
    j = np.arange(n)
    m[j, j] = -2.0 * a / h**2 + np.asarray(v_eff, dtype=float)
    m[j[1:], j[1:] - 1] = a[1:] / h**2 - b[1:] / (2 * h)
    m[j[:-1], j[:-1] + 1] = a[:-1] / h**2 + b[:-1] / (2 * h)
    return m


def _banded(m: np.ndarray, shift: float) -> np.ndarray:
    n = m.shape[0]
    ab = np.zeros((3, n))
    ab[0, 1:] = np.diagonal(m, 1)
    ab[1] = np.diagonal(m) - shift
    ab[2, :-1] = np.diagonal(m, -1)
    return ab


def _polish(m: np.ndarray, value: float, vector: np.ndarray, sweeps: int = 3):
    v = vector / np.max(np.abs(vector))
    for _ in range(sweeps):
        shift = value * (1 + 1e-13) + 1e-13
        y = solve_banded((1, 1), _banded(m, shift), v)
        k = int(np.argmax(np.abs(y)))
        value = shift + v[k] / y[k]
        v = y / y[k]
    return value, v


def dense_eigensolve(v_eff, grid: RadialGrid, m: int) -> DenseSpectrum:
    """Lowest ``m`` eigenpairs, ascending; vectors scaled to unit max-norm."""
    n = grid.n_points
    if n > MAX_DENSE_POINTS:
        raise DenseSizeError(f"dense eigensolve limited to {MAX_DENSE_POINTS} points, got {n}")
    if not 1 <= m <= n:
        raise ValueError(f"m must lie in [1, {n}], got {m}")
    h = hamiltonian_matrix(v_eff, grid)
    values, vectors = np.linalg.eig(h)
    order = np.argsort(values.real)[:m]
    out_vals, out_vecs, res = [], [], []
    for i in order:
        val, vec = _polish(h, float(values[i].real), vectors[:, i].real)
        out_vals.append(val)
        out_vecs.append(vec)
        res.append(np.max(np.abs(h @ vec - val * vec)) / np.max(np.abs(vec)))
    return DenseSpectrum(np.array(out_vals), np.array(out_vecs).T, np.array(res))
