"""
Quadratic-Lagrangian Propagator
===============================

Exact one-dimensional kernel of a time-dependent oscillator axis written
through the Ermakov amplitude and phase:

    K(x1, x0; t1, t0) = N exp(i R(x1, x0) / hbar)

    R = (m/2) (x1^2 alpha1'/alpha1 - x0^2 alpha0'/alpha0)
        + m hbar cot(dphi) (x1^2/alpha1^2 + x0^2/alpha0^2)
        - 2 m hbar x1 x0 / (alpha1 alpha0 sin(dphi))

    N = sqrt(m / (2 pi hbar |s|)) exp(-i pi/4 - i pi k/2),
    s = alpha1 alpha0 sin(dphi) / (2 hbar),   k = floor(dphi / pi)

s is the position at t1 of the classical path leaving the origin at t0
with unit velocity, so dR/dx1dx0 = -m/s. The phase of N matches the
static oscillator kernel on 0 < omega dt < pi.

Author: wavepath Team
Version: 1.0.0
"""

from typing import Optional, Tuple, Union

import numpy as np
from scipy.integrate import simpson

from wavepath.config import settings
from wavepath.errors import CausticError
from wavepath.ermakov import Axis, AxisSolution, GuidingTrajectory
from wavepath.wavepacket.branch import GaussianBranch
from wavepath.wavepacket.moments import LogQuadratic


def _kernel_geometry(
    sol: AxisSolution,
    t1: float,
    t0: float,
    check_caustic: bool = True,
) -> Tuple[float, float, float, float, float]:
    """(alpha1, alpha1', alpha0, alpha0', dphi) after validating the interval."""
    if not t1 > t0:
        raise ValueError(f"propagator needs t1 > t0, got t1={t1}, t0={t0}")
    s1, s0 = sol.at(float(t1)), sol.at(float(t0))
    dphi = float(s1.phi - s0.phi)
    if check_caustic:
        eps = settings.caustic_epsilon
        rem = np.mod(dphi, np.pi)
        if rem < eps or rem > np.pi - eps:
            raise CausticError(
                "kernel evaluated at a caustic",
                {"axis": sol.axis.value, "t0": float(t0), "t1": float(t1),
                 "dphi": dphi, "epsilon": eps},
            )
    return s1.alpha, s1.alpha_dot, s0.alpha, s0.alpha_dot, dphi


def _action_coefficients(sol: AxisSolution, t1: float, t0: float,
                         check_caustic: bool = True) -> Tuple[float, float, float, float]:
    """R = A11 x1^2 + A00 x0^2 + A10 x1 x0, plus s."""
    a1, ad1, a0, ad0, dphi = _kernel_geometry(sol, t1, t0, check_caustic)
    m, hbar = sol.mass, sol.hbar
    cot = np.cos(dphi) / np.sin(dphi)
    a11 = 0.5 * m * ad1 / a1 + m * hbar * cot / a1 ** 2
    a00 = -0.5 * m * ad0 / a0 + m * hbar * cot / a0 ** 2
    a10 = -2.0 * m * hbar / (a1 * a0 * np.sin(dphi))
    s = a1 * a0 * np.sin(dphi) / (2.0 * hbar)
    return a11, a00, a10, s


def classical_action(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    x1: np.ndarray,
    x0: np.ndarray,
    t1: float,
    t0: float,
) -> np.ndarray:
    """
    Classical action R(x1, x0; t1, t0) of one axis.

    Raises:
        CausticError: dphi within caustic_epsilon of a multiple of pi
    """
    a11, a00, a10, _ = _action_coefficients(traj.axis(axis), t1, t0)
    x1, x0 = np.asarray(x1, dtype=float), np.asarray(x0, dtype=float)
    return a11 * x1 ** 2 + a00 * x0 ** 2 + a10 * x1 * x0


def _log_prefactor(sol: AxisSolution, s: float, dphi: float) -> complex:
    k = np.floor(dphi / np.pi)
    return (0.5 * np.log(sol.mass / (2.0 * np.pi * sol.hbar * abs(s)))
            - 1j * np.pi / 4.0 - 1j * np.pi * k / 2.0)


def propagator_prefactor(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    t1: float,
    t0: float,
) -> complex:
    """N = sqrt(|d2R/dx1dx0| / 2 pi hbar) with the static-oscillator phase."""
    sol = traj.axis(axis)
    _, _, _, s = _action_coefficients(sol, t1, t0)
    dphi = float(sol.at(float(t1)).phi - sol.at(float(t0)).phi)
    return complex(np.exp(_log_prefactor(sol, s, dphi)))


def propagator_1d(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    x1: np.ndarray,
    x0: np.ndarray,
    t1: float,
    t0: float,
) -> np.ndarray:
    """
    K(x1, x0; t1, t0) of one axis; broadcasts over x1 and x0.

    The Ermakov solution of traj must cover [t0, t1]; the kernel depends
    only on (alpha, alpha', phi), not on the guiding q(t).

    Raises:
        CausticError: dphi within caustic_epsilon of a multiple of pi
        ValueError: t1 <= t0
    """
    sol = traj.axis(axis)
    x1, x0 = np.asarray(x1, dtype=float), np.asarray(x0, dtype=float)
    a11, a00, a10, s = _action_coefficients(sol, t1, t0)
    dphi = float(sol.at(float(t1)).phi - sol.at(float(t0)).phi)
    action = a11 * x1 ** 2 + a00 * x0 ** 2 + a10 * x1 * x0
    return np.exp(_log_prefactor(sol, s, dphi) + 1j * action / sol.hbar)


def kernel_log_quadratic(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    x1: np.ndarray,
    t1: float,
    t0: float,
    check_caustic: bool = True,
) -> LogQuadratic:
    """K(x1, x0) as a log-quadratic factor in x0 (coefficients broadcast over x1)."""
    sol = traj.axis(axis)
    x1 = np.asarray(x1, dtype=float)
    a11, a00, a10, s = _action_coefficients(sol, t1, t0, check_caustic)
    dphi = float(sol.at(float(t1)).phi - sol.at(float(t0)).phi)
    i_h = 1j / sol.hbar
    return LogQuadratic(
        a=np.full_like(x1, -i_h * a00, dtype=complex),
        b=i_h * a10 * x1 + 0j,
        c=_log_prefactor(sol, s, dphi) + i_h * a11 * x1 ** 2,
    )


def reproduce_wavefunction(
    branch: GaussianBranch,
    kernel_traj: GuidingTrajectory,
    axis: Union[Axis, str],
    x: np.ndarray,
    t1: float,
    t0: float,
    n_nodes: int = 20001,
    n_widths: Optional[float] = 12.0,
) -> np.ndarray:
    """
    integral K(x, x0; t1, t0) g(x0, t0) dx0 by Simpson quadrature over x0.

    The x0 range covers the branch's amplitude envelope at t0 to n_widths
    of its 1/e half-width alpha0 / sqrt(m).
    """
    sol0 = branch.traj.axis(axis).at(float(t0))
    half = n_widths * sol0.alpha / np.sqrt(branch.params.mass)
    x0 = np.linspace(sol0.q - half, sol0.q + half, n_nodes)
    psi0 = branch.axis_value(axis, x0, t0)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    kernel = propagator_1d(kernel_traj, axis, x[:, None], x0[None, :], t1, t0)
    return simpson(kernel * psi0[None, :], x=x0, axis=1)
