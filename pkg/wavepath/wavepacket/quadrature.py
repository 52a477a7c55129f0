"""
Tensor Quadrature Grids
=======================

Uniform 2D grids covering every branch of a superposition, used for norm
cross-checks, global current integrals and the expectation identity. The
trapezoid rule is exponentially accurate for these Gaussian integrands once
the spacing resolves the fastest oscillation.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import trapezoid

from wavepath.wavepacket.superposition import Superposition


@dataclass(frozen=True)
class Grid2D:
    """Uniform tensor grid."""
    x: np.ndarray
    y: np.ndarray

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def dy(self) -> float:
        return float(self.y[1] - self.y[0])

    @property
    def shape(self):
        return len(self.x), len(self.y)

    def points(self) -> np.ndarray:
        """(nx, ny, 2) array of grid points, x index first."""
        X, Y = np.meshgrid(self.x, self.y, indexing="ij")
        return np.stack([X, Y], axis=-1)

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Integral over the grid of values shaped (nx, ny, ...)."""
        return trapezoid(trapezoid(values, self.x, axis=0), self.y, axis=0)


def bounding_grid(
    state: Superposition,
    t: float,
    n_sigma: float = 10.0,
    spacing: Optional[float] = None,
) -> Grid2D:
    """
    Grid covering all branch envelopes at time t to n_sigma standard deviations.

    Default spacing resolves both the narrowest envelope and the largest
    branch wavenumber.
    """
    hbar = state.params.hbar
    centers = np.array([b.traj.position(float(t)) for b in state.branches])
    sigmas = np.array([b.sigma(t) for b in state.branches])
    k_max = max(
        float(np.max(np.abs(b.traj.momentum(float(t))))) / hbar for b in state.branches
    )
    if spacing is None:
        bandwidth = 2.0 * k_max + 12.0 / float(np.min(sigmas))
        spacing = 2.0 * np.pi / bandwidth

    axes = []
    for k in range(2):
        lo = float(np.min(centers[:, k] - n_sigma * sigmas[:, k]))
        hi = float(np.max(centers[:, k] + n_sigma * sigmas[:, k]))
        n = int(np.ceil((hi - lo) / spacing)) + 1
        axes.append(np.linspace(lo, hi, n))
    return Grid2D(axes[0], axes[1])
