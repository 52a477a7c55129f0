"""
Schrodinger-equation residual of a superposition.

i hbar dpsi/dt by central differences in t, H psi from the analytic Laplacian.
"""

from dataclasses import dataclass

import numpy as np

from wavepath.ermakov import AXES
from wavepath.wavepacket.superposition import Superposition, evaluate


@dataclass(frozen=True)
class TDSEResidual:
    residual: np.ndarray      # |i hbar dpsi/dt - H psi| per point
    scale: float              # max |H psi| over the points

    @property
    def relative(self) -> float:
        return float(np.max(self.residual) / self.scale) if self.scale > 0 else float(np.max(self.residual))


def apply_hamiltonian(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """H psi = -(hbar^2 / 2m) lap psi + (m/2) sum_j V_j(t) r_j^2 psi."""
    r = np.asarray(r, dtype=float)
    m, hbar = state.params.mass, state.params.hbar
    f = evaluate(state, r, t)
    pot = sum(0.5 * m * state.params.axis(a).potential(t) * r[..., k] ** 2
              for k, a in enumerate(AXES))
    return -(hbar ** 2) / (2.0 * m) * f.laplacian + pot * f.value


def tdse_residual(state: Superposition, r: np.ndarray, t: float, h: float = 1e-5) -> TDSEResidual:
    """Pointwise TDSE residual at r; t +- h must lie inside the span."""
    hbar = state.params.hbar
    dpsi = (evaluate(state, r, t + h).value - evaluate(state, r, t - h).value) / (2.0 * h)
    h_psi = apply_hamiltonian(state, r, t)
    return TDSEResidual(np.abs(1j * hbar * dpsi - h_psi), float(np.max(np.abs(h_psi))))
