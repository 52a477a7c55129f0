"""
Gaussian Branch
===============

Closed-form solution of the time-dependent Schrodinger equation carried by
one guiding trajectory. Per axis j

    g_j(x, t) = (2m / pi alpha^2)^(1/4)
                * exp(-(x - q)^2 (m / alpha^2 - i m alpha' / (2 hbar alpha)))
                * exp(i p (x - q) / hbar)
                * exp(i (p q - p_ref q_ref) / (2 hbar))
                * exp(-i (phi - phi_ref) / 2)

and the 2D branch is g_x(x, t) g_y(y, t). phi_ref = 0 at the trajectory's
reference time, so the branch equals the plain Gaussian there.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Dict, Tuple, Union

import numpy as np

from wavepath.ermakov import AXES, Axis, ErmakovState, GuidingTrajectory, OscillatorParams
from wavepath.wavepacket.moments import LogQuadratic


@dataclass(frozen=True)
class AxisGaussian:
    """Centered form of one axis factor at a fixed time."""
    width: complex        # A = m/alpha^2 - i m alpha'/(2 hbar alpha)
    center: float         # q
    wavenumber: float     # p / hbar
    log_norm: complex     # ln N + i theta

    def log_quadratic(self) -> LogQuadratic:
        """Expanded coefficients exp(-a x^2 + b x + c)."""
        A, q, k = self.width, self.center, self.wavenumber
        return LogQuadratic(A, 2.0 * A * q + 1j * k, -A * q ** 2 - 1j * k * q + self.log_norm)

    def derivatives(self, x: np.ndarray, order: int) -> Tuple[np.ndarray, ...]:
        """(g, g', ..., g^(order)) at x; order <= 3."""
        u = x - self.center
        g = np.exp(-self.width * u ** 2 + 1j * self.wavenumber * u + self.log_norm)
        out = [g]
        if order >= 1:
            L = -2.0 * self.width * u + 1j * self.wavenumber
            out.append(L * g)
        if order >= 2:
            out.append((L ** 2 - 2.0 * self.width) * g)
        if order >= 3:
            out.append((L ** 3 - 6.0 * self.width * L) * g)
        return tuple(out)


def axis_gaussian(state: ErmakovState, init_q: float, init_p: float,
                  mass: float, hbar: float) -> AxisGaussian:
    """Axis factor from the Ermakov state at one time."""
    alpha, alpha_dot = state.alpha, state.alpha_dot
    width = mass / alpha ** 2 - 1j * mass * alpha_dot / (2.0 * hbar * alpha)
    theta = (state.p * state.q - init_p * init_q) / (2.0 * hbar) - state.phi / 2.0
    log_norm = 0.25 * np.log(2.0 * mass / (np.pi * alpha ** 2)) + 1j * theta
    return AxisGaussian(complex(width), float(state.q), float(state.p / hbar), complex(log_norm))


@dataclass(frozen=True, eq=False)
class GaussianBranch:
    """One weighted Gaussian wavepacket following a guiding trajectory."""
    label: str
    weight: complex               # a_J, relative phases allowed
    traj: GuidingTrajectory

    @property
    def params(self) -> OscillatorParams:
        return self.traj.params

    @property
    def span(self) -> Tuple[float, float]:
        return self.traj.span

    def axis_factor(self, axis: Union[Axis, str], t: float) -> AxisGaussian:
        sol = self.traj.axis(axis)
        return axis_gaussian(sol.at(float(t)), sol.init.q, sol.init.p,
                             self.params.mass, self.params.hbar)

    def factors(self, t: float) -> Dict[Axis, AxisGaussian]:
        return {a: self.axis_factor(a, t) for a in AXES}

    def axis_value(self, axis: Union[Axis, str], x: np.ndarray, t: float) -> np.ndarray:
        """Unweighted 1D factor g_j(x, t)."""
        return self.axis_factor(axis, t).derivatives(np.asarray(x, dtype=float), 0)[0]

    def peak_density(self, t: float) -> float:
        """|psi_J|^2 at its center (unweighted)."""
        out = 1.0
        for a in AXES:
            alpha = self.traj.axis(a).at(float(t)).alpha
            out *= np.sqrt(2.0 * self.params.mass / (np.pi * alpha ** 2))
        return float(out)

    def sigma(self, t: float) -> np.ndarray:
        """Standard deviation of |psi_J|^2 per axis, alpha / (2 sqrt(m))."""
        return np.array([
            self.traj.axis(a).at(float(t)).alpha / (2.0 * np.sqrt(self.params.mass))
            for a in AXES
        ])
