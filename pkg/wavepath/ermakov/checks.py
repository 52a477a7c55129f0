"""
Ermakov Consistency Checks
==========================

Independent cross-checks of a GuidingTrajectory:

    - ermakov_residual: |alpha''/alpha + V - 4 hbar^2/alpha^4| with alpha''
      from central differences of the dense alpha' component
    - integrate_classical: direct dense integration of q'' + V(t) q = 0
    - linear_equivalence_error: amplitude-phase q against the direct solution

Author: wavepath Team
Version: 1.0.0
"""

from typing import Optional, Union

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp

from wavepath.errors import StepFailure
from wavepath.ermakov.params import Axis, OscillatorParams
from wavepath.ermakov.solver import GuidingTrajectory


def ermakov_residual(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    times: Optional[np.ndarray] = None,
    h: float = 1e-4,
) -> np.ndarray:
    """
    Ermakov residual at the given times (default: interior solver nodes).

    Returns:
        Array of |alpha''/alpha + V(t) - c0^2/alpha^4|
    """
    sol = traj.axis(axis)
    lo, hi = sol.span
    if times is None:
        times = sol.t[(sol.t > lo + h) & (sol.t < hi - h)]
    times = np.asarray(times, dtype=float)

    alpha = sol.at(times).alpha
    alpha_ddot = (sol.alpha_dot_at(times + h) - sol.alpha_dot_at(times - h)) / (2.0 * h)
    v = traj.params.axis(axis).potential(times)
    c0 = traj.params.c0
    return np.abs(alpha_ddot / alpha + v - c0 ** 2 / alpha ** 4)


def integrate_classical(
    params: OscillatorParams,
    axis: Union[Axis, str],
    q0: float,
    p0: float,
    t0: float,
    t1: float,
    rtol: float = 1e-12,
    atol: float = 1e-14,
) -> OdeSolution:
    """
    Dense solution of q'' + V(t) q = 0 with state (q, p).

    Returns:
        OdeSolution; sol(t)[0] is q, sol(t)[1] is p
    """
    drive = params.axis(axis)
    mass = params.mass

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1] / mass, -mass * drive.potential(t) * y[0]])

    sol = solve_ivp(rhs, (t0, t1), np.array([q0, p0]), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True)
    if sol.status != 0:
        raise StepFailure(f"classical integration failed: {sol.message}",
                          {"axis": Axis(axis).value, "t": float(sol.t[-1])})
    return sol.sol


def linear_equivalence_error(
    traj: GuidingTrajectory,
    axis: Union[Axis, str],
    times: Optional[np.ndarray] = None,
) -> float:
    """Max |q_decomposition - q_direct| over the given times (default: nodes)."""
    sol = traj.axis(axis)
    times = sol.t if times is None else np.asarray(times, dtype=float)
    lo, hi = sol.span
    t_end = lo if sol.t_ref > lo else hi
    direct = integrate_classical(traj.params, axis, sol.init.q, sol.init.p, sol.t_ref, t_end)
    return float(np.max(np.abs(sol.at(times).q - direct(times)[0])))
