"""Transformed radial mesh r = x**2 and Newton-Cotes quadrature on it.

The mesh is uniform in x with ``x_j = offset + j*h`` for ``j = 1..N`` and
``r_j = x_j**2``, which is dense near the origin and coarse at large r.
Radial integrals are carried out in x, so the caller supplies integrands
already multiplied by the Jacobian ``dr/dx = 2x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NumericDomainError

DEFAULT_OFFSET = 1e-6


@dataclass(frozen=True, eq=False)
class RadialGrid:
    n_points: int
    spacing: float
    offset: float
    x: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    @property
    def r_max(self) -> float:
        return float(self.r[-1])

    @property
    def jacobian(self) -> np.ndarray:
        """dr/dx = 2x at every node."""
        return 2.0 * self.x

    @property
    def volume_element(self) -> np.ndarray:
        """r**2 dr/dx = 2 x**5, the x-space weight of the radial measure."""
        return 2.0 * self.x**5


def build_grid(n_points: int, r_max: float, offset: float = DEFAULT_OFFSET) -> RadialGrid:
    """Build the x-uniform mesh whose last node sits exactly at ``r_max``.

    ``h = (sqrt(r_max) - offset) / n_points`` so that ``x_N = sqrt(r_max)``.
    """
    if int(n_points) != n_points or n_points < 3:
        raise ValueError(f"n_points must be an integer >= 3, got {n_points!r}")
    if not r_max > 0:
        raise ValueError(f"r_max must be positive, got {r_max!r}")
    if not offset > 0:
        raise ValueError(f"offset must be positive, got {offset!r}")
    n_points = int(n_points)
    x_max = np.sqrt(r_max)
    if offset >= x_max:
        raise ValueError("offset must be smaller than sqrt(r_max)")
    h = (x_max - offset) / n_points
    x = offset + h * np.arange(1, n_points + 1)
    x[-1] = x_max
    x.flags.writeable = False
    r = x * x
    r.flags.writeable = False
    return RadialGrid(n_points=n_points, spacing=float(h), offset=float(offset), x=x, r=r)


def newton_cotes_weights(n_points: int, spacing: float) -> np.ndarray:
    """Composite closed Newton-Cotes weights for ``n_points`` uniform nodes.

    Simpson's rule over every pair of panels; when the panel count is odd the
    last three panels use Simpson's 3/8 rule so cubics stay exact.
    """
    n = int(n_points)
    if n < 2:
        raise ValueError("need at least two nodes")
    h = float(spacing)
    w = np.zeros(n)
    if n == 2:
        w[:] = h / 2
        return w
    panels = n - 1
    simpson_panels = panels if panels % 2 == 0 else panels - 3
    if simpson_panels:
        m = simpson_panels + 1
        w[:m:2] += 2 * h / 3
        w[1:m:2] += 4 * h / 3
        w[0] -= h / 3
        w[m - 1] -= h / 3
    if simpson_panels != panels:
        s = n - 4
        w[s : s + 4] += 3 * h / 8 * np.array([1.0, 3.0, 3.0, 1.0])
    return w


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    weights: np.ndarray = field(repr=False)
    grid: RadialGrid | None = None

    @classmethod
    def for_grid(cls, grid: RadialGrid) -> "QuadratureRule":
        w = newton_cotes_weights(grid.n_points, grid.spacing)
        w.flags.writeable = False
        return cls(weights=w, grid=grid)

    @classmethod
    def for_points(cls, x: np.ndarray) -> "QuadratureRule":
        """Rule on an arbitrary uniform set of nodes (no radial grid attached)."""
        x = np.asarray(x, dtype=float)
        h = np.diff(x)
        if x.ndim != 1 or x.size < 2 or not np.allclose(h, h[0], rtol=1e-9, atol=0):
            raise ValueError("nodes must be a uniform 1-D array with at least two points")
        return cls(weights=newton_cotes_weights(x.size, (x[-1] - x[0]) / (x.size - 1)))

    def integrate(self, f) -> float:
        return radial_integral(self, f)


def radial_integral(rule: QuadratureRule, f) -> float:
    """Integrate samples ``f`` over x with the rule's weights.

    No Jacobian is applied here: for an r-space integral pass ``g(x**2) * 2x``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != rule.weights.shape:
        raise ValueError(f"expected {rule.weights.size} samples, got shape {f.shape}")
    bad = ~np.isfinite(f)
    if bad.any():
        j = int(np.flatnonzero(bad)[0])
        raise NumericDomainError(f"non-finite integrand sample at node {j}: {f[j]!r}")
    return float(rule.weights @ f)
