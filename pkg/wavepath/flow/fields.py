"""
Hydrodynamic Fields
===================

Probability current, velocity field and quantum potential of a
superposition, all from the analytic derivative jet of psi:

    j = (hbar / m) Im(conj(psi) grad psi)
    v = Im(hbar grad psi / (m psi))
    Q = -(hbar^2 / 2m) lap(sqrt rho) / sqrt(rho)
      = -(hbar^2 / 2m) (lap u / 2 + |grad u|^2 / 4),   u = ln rho

grad Q needs third derivatives of rho, taken from the order-3 jet.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from wavepath.ermakov import AXES
from wavepath.errors import SingularRegion
from wavepath.wavepacket import Superposition, WaveJet, density_floor, evaluate, jet


# =============================================================================
# Density derivatives
# =============================================================================

class DensityJet:
    """Partial derivatives of rho = |psi|^2 built from a psi jet."""

    def __init__(self, psi: WaveJet):
        self.psi = psi

    def _p(self, *axes: int) -> np.ndarray:
        return self.psi.partial(*axes)

    def _c(self, *axes: int) -> np.ndarray:
        return np.conj(self.psi.partial(*axes))

    @property
    def rho(self) -> np.ndarray:
        return np.abs(self.psi.value) ** 2

    def d1(self, i: int) -> np.ndarray:
        return 2.0 * np.real(self._c() * self._p(i))

    def d2(self, i: int, j: int) -> np.ndarray:
        return 2.0 * np.real(self._c() * self._p(i, j) + self._c(j) * self._p(i))

    def d3(self, i: int, j: int, k: int) -> np.ndarray:
        return 2.0 * np.real(
            self._c() * self._p(i, j, k)
            + self._c(k) * self._p(i, j)
            + self._c(j, k) * self._p(i)
            + self._c(j) * self._p(i, k)
        )


def _check_floor(state: Superposition, rho: np.ndarray, r: np.ndarray, t: float) -> None:
    floor = density_floor(state, t)
    bad = rho < floor
    if np.any(bad):
        where = np.asarray(r)[bad] if np.ndim(rho) else np.asarray(r)
        raise SingularRegion(
            "density below floor",
            {"t": float(t), "floor": floor, "n_points": int(np.sum(bad)),
             "first_point": np.reshape(where, (-1, 2))[0].tolist()},
        )


# =============================================================================
# Current and velocity
# =============================================================================

def current_density(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """j = (hbar/m) Im(conj(psi) grad psi), shape (..., 2)."""
    f = evaluate(state, r, t)
    coef = state.params.hbar / state.params.mass
    return coef * np.imag(np.conj(f.value)[..., None] * f.gradient)


def velocity_unchecked(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """Im(hbar grad psi / (m psi)) without the density check; inf/nan at nodes."""
    f = evaluate(state, r, t)
    coef = state.params.hbar / state.params.mass
    with np.errstate(divide="ignore", invalid="ignore"):
        return coef * np.imag(f.gradient / f.value[..., None])


def velocity_field(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """
    Bohmian velocity v = Im(hbar grad psi / (m psi)), shape (..., 2).

    Raises:
        SingularRegion: rho below the density floor at some point
    """
    f = evaluate(state, r, t)
    rho = np.abs(f.value) ** 2
    _check_floor(state, rho, r, t)
    coef = state.params.hbar / state.params.mass
    return coef * np.imag(f.gradient / f.value[..., None])


def divergence_current(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """div j = (hbar/m) Im(conj(psi) lap psi)."""
    f = evaluate(state, r, t)
    return state.params.hbar / state.params.mass * np.imag(np.conj(f.value) * f.laplacian)


# =============================================================================
# Quantum potential
# =============================================================================

def _log_density_terms(dj: DensityJet):
    rho = dj.rho
    grad_u = [dj.d1(i) / rho for i in range(2)]
    lap_u = sum(dj.d2(i, i) / rho - grad_u[i] ** 2 for i in range(2))
    return rho, grad_u, lap_u


def quantum_potential(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """
    Q = -(hbar^2/2m) lap(sqrt rho)/sqrt(rho).

    Raises:
        SingularRegion: rho below the density floor
    """
    dj = DensityJet(jet(state, r, t, order=2))
    rho, grad_u, lap_u = _log_density_terms(dj)
    _check_floor(state, rho, r, t)
    m, hbar = state.params.mass, state.params.hbar
    return -(hbar ** 2) / (2.0 * m) * (0.5 * lap_u + 0.25 * (grad_u[0] ** 2 + grad_u[1] ** 2))


def quantum_force(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """
    grad Q, shape (..., 2), analytic through third derivatives of rho.

    Raises:
        SingularRegion: rho below the density floor
    """
    dj = DensityJet(jet(state, r, t, order=3))
    rho = dj.rho
    _check_floor(state, rho, r, t)
    m, hbar = state.params.mass, state.params.hbar

    d1 = [dj.d1(i) for i in range(2)]
    d2 = [[dj.d2(i, k) for k in range(2)] for i in range(2)]
    u1 = [d1[i] / rho for i in range(2)]

    out = []
    for k in range(2):
        # d_k of lap u
        d_lap = sum(
            dj.d3(i, i, k) / rho
            - d2[i][i] * d1[k] / rho ** 2
            - 2.0 * d1[i] * d2[i][k] / rho ** 2
            + 2.0 * d1[i] ** 2 * d1[k] / rho ** 3
            for i in range(2)
        )
        # d_k of |grad u|^2 / 4 = (1/2) sum_i u_i u_ik
        d_grad = sum(u1[i] * (d2[i][k] / rho - d1[i] * d1[k] / rho ** 2) for i in range(2))
        out.append(-(hbar ** 2) / (2.0 * m) * (0.5 * d_lap + 0.5 * d_grad))
    return np.stack(out, axis=-1)


def classical_force(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    """grad V = m V_j(t) r_j, shape (..., 2)."""
    r = np.asarray(r, dtype=float)
    m = state.params.mass
    return np.stack(
        [m * state.params.axis(a).potential(t) * r[..., k] for k, a in enumerate(AXES)],
        axis=-1,
    )


# =============================================================================
# Continuity
# =============================================================================

@dataclass(frozen=True)
class ContinuityResidual:
    residual: np.ndarray      # |d rho/dt + div j|
    scale: float              # max |d rho/dt| over the points

    @property
    def relative(self) -> float:
        return float(np.max(self.residual) / self.scale) if self.scale > 0 else float(np.max(self.residual))

    def to_dict(self) -> Dict[str, Any]:
        return {"max_residual": float(np.max(self.residual)), "scale": self.scale,
                "relative": self.relative}


def continuity_residual(state: Superposition, r: np.ndarray, t: float,
                        h: float = 1e-5) -> ContinuityResidual:
    """d rho/dt by central differences against the analytic div j."""
    rho_p = np.abs(evaluate(state, r, t + h).value) ** 2
    rho_m = np.abs(evaluate(state, r, t - h).value) ** 2
    drho = (rho_p - rho_m) / (2.0 * h)
    res = np.abs(drho + divergence_current(state, r, t))
    return ContinuityResidual(res, float(np.max(np.abs(drho))))
