"""
Bohmian Streamlines
===================

Integration of dr/dt = v(r, t) through the analytic velocity field, with
step size limited by the local error and a maximum displacement per step.
A streamline that reaches the density floor stops and records why.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from wavepath.config import settings
from wavepath.errors import SingularRegion
from wavepath.logging import get_logger
from wavepath.flow.fields import (
    classical_force,
    quantum_force,
    velocity_field,
    velocity_unchecked,
)
from wavepath.wavepacket import Superposition, density_floor, evaluate

logger = get_logger(__name__)


class TerminationReason(str, Enum):
    """Why a streamline stopped."""
    TIME_REACHED = "time_reached"
    SINGULAR_REGION = "singular_region"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class BohmianTrajectory:
    """
    Time-ordered samples of one streamline.

    Samples are stored with increasing t for either integration direction;
    t_start/t_end record the direction.
    """
    t: np.ndarray
    position: np.ndarray      # (n, 2)
    velocity: np.ndarray      # (n, 2)
    x0: Tuple[float, float]
    t_start: float
    t_end: float
    termination: TerminationReason
    state_id: str = ""
    message: str = ""
    nfev: int = 0

    @property
    def completed(self) -> bool:
        return self.termination is TerminationReason.TIME_REACHED

    @property
    def end_position(self) -> np.ndarray:
        """Position at the last integrated time (the stop time if terminated)."""
        return self.position[-1] if self.t_end >= self.t_start else self.position[0]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x0": list(self.x0),
            "t_start": self.t_start,
            "t_end": self.t_end,
            "termination": self.termination.value,
            "state_id": self.state_id,
            "message": self.message,
            "n_samples": int(len(self.t)),
        }


def max_step_for(state: Superposition, t: float) -> float:
    """Time step giving a displacement of max_displacement_scale * alpha0 at the fastest branch speed."""
    m, hbar = state.params.mass, state.params.hbar
    alphas = [b.traj.axis(a).at(float(t)).alpha for b in state.branches for a in ("x", "y")]
    alpha_min = float(min(alphas))
    speed = max(float(np.max(np.abs(b.traj.momentum(float(t))))) for b in state.branches) / m
    # spreading speed of the narrowest envelope
    speed += 2.0 * hbar / (m * alpha_min)
    return settings.max_displacement_scale * alpha_min / speed


def sample_times(t0: float, t1: float, dt: float) -> np.ndarray:
    """Grid from t0 to t1 (either direction) with spacing dt, endpoint included."""
    n = int(np.floor(abs(t1 - t0) / dt + 1e-9))
    grid = t0 + np.sign(t1 - t0) * dt * np.arange(n + 1)
    if abs(grid[-1] - t1) > 1e-12:
        grid = np.append(grid, t1)
    return grid


def integrate_bohmian(
    state: Superposition,
    x0: Sequence[float],
    t0: float,
    t1: float,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    max_step: Optional[float] = None,
    sample_dt: Optional[float] = None,
    state_id: str = "",
) -> BohmianTrajectory:
    """
    Integrate one streamline from (x0, t0) to t1 (t1 < t0 runs backward).

    Raises:
        SingularRegion: the start point lies below the density floor
    """
    rtol = settings.rtol if rtol is None else rtol
    atol = settings.atol if atol is None else atol
    sample_dt = settings.bohmian_sample_dt if sample_dt is None else sample_dt
    max_step = max_step_for(state, t0) if max_step is None else max_step
    x0 = np.asarray(x0, dtype=float)

    velocity_field(state, x0, t0)  # start-point density check

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return velocity_unchecked(state, y, t)

    def node(t: float, y: np.ndarray) -> float:
        return float(np.abs(evaluate(state, y, t).value) ** 2 - density_floor(state, t))
    node.terminal = True

    t_eval = sample_times(t0, t1, sample_dt)
    sol = solve_ivp(rhs, (t0, t1), x0, method="DOP853", t_eval=t_eval, rtol=rtol,
                    atol=atol, max_step=max_step, events=node)

    if sol.status == 1:
        reason = TerminationReason.SINGULAR_REGION
    elif sol.status == 0:
        reason = TerminationReason.TIME_REACHED
    else:
        reason = TerminationReason.STEP_FAILURE

    t, pos = sol.t, sol.y.T
    t_stop = float(sol.t[-1]) if len(sol.t) else float(t0)
    if reason is TerminationReason.SINGULAR_REGION:
        # the stop point lies between t_eval samples
        t_stop = float(sol.t_events[0][0])
        if not len(t) or t_stop != t[-1]:
            t = np.append(t, t_stop)
            pos = np.vstack([pos.reshape(-1, 2), sol.y_events[0][0]])
    if t1 < t0:
        t, pos = t[::-1], pos[::-1]
    vel = np.array([velocity_unchecked(state, p, tt) for tt, p in zip(t, pos)]).reshape(-1, 2)

    if reason is not TerminationReason.TIME_REACHED:
        logger.info(
            "bohmian_terminated",
            reason=reason.value,
            x0=x0.tolist(),
            t_stop=t_stop,
            message=sol.message,
        )

    return BohmianTrajectory(
        t=np.ascontiguousarray(t),
        position=np.ascontiguousarray(pos),
        velocity=vel,
        x0=(float(x0[0]), float(x0[1])),
        t_start=float(t0),
        t_end=t_stop,
        termination=reason,
        state_id=state_id,
        message=str(sol.message),
        nfev=int(sol.nfev),
    )


# =============================================================================
# Trajectory diagnostics
# =============================================================================

@dataclass(frozen=True)
class NewtonResidual:
    t: np.ndarray
    residual: np.ndarray      # (n, 2) m dv/dt + grad(V + Q)

    @property
    def max_norm(self) -> float:
        return float(np.max(np.abs(self.residual)))


def newton_residual(state: Superposition, traj: BohmianTrajectory) -> NewtonResidual:
    """
    m dv/dt + grad(V + Q) along a recorded streamline.

    dv/dt by second-order finite differences of the recorded velocities.

    Raises:
        SingularRegion: a sample lies below the density floor
    """
    if len(traj.t) < 3:
        raise ValueError("newton_residual needs at least three samples")
    m = state.params.mass
    accel = np.gradient(traj.velocity, traj.t, axis=0, edge_order=2)
    force = np.array([
        classical_force(state, p, tt) + quantum_force(state, p, tt)
        for tt, p in zip(traj.t, traj.position)
    ])
    return NewtonResidual(traj.t, m * accel + force)


@dataclass(frozen=True)
class CoincidenceReport:
    """Minimum pairwise distance between streamlines on a common time grid."""
    min_distance: float
    pair: Optional[Tuple[int, int]]
    time: Optional[float]
    delta: float
    violations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "min_distance": self.min_distance,
            "pair": list(self.pair) if self.pair else None,
            "time": self.time,
            "delta": self.delta,
            "violations": [list(p) for p in self.violations],
        }


def no_coincidence(
    trajs: Sequence[BohmianTrajectory],
    delta: Optional[float] = None,
    dt: Optional[float] = None,
) -> CoincidenceReport:
    """
    Check that distinct streamlines never meet within delta.

    Positions are interpolated onto a common grid over the overlap of the
    sampled spans.
    """
    delta = settings.crossing_delta if delta is None else delta
    dt = settings.bohmian_sample_dt if dt is None else dt
    if len(trajs) < 2:
        return CoincidenceReport(float("inf"), None, None, delta)

    lo = max(float(tr.t[0]) for tr in trajs)
    hi = min(float(tr.t[-1]) for tr in trajs)
    grid = sample_times(lo, hi, dt) if hi > lo else np.array([lo])
    paths = np.stack([
        np.stack([np.interp(grid, tr.t, tr.position[:, k]) for k in range(2)], axis=-1)
        for tr in trajs
    ])  # (n_traj, n_t, 2)

    best = (float("inf"), None, None)
    violations = []
    for i in range(len(trajs)):
        for j in range(i + 1, len(trajs)):
            dist = np.linalg.norm(paths[i] - paths[j], axis=-1)
            k = int(np.argmin(dist))
            if dist[k] < best[0]:
                best = (float(dist[k]), (i, j), float(grid[k]))
            if dist[k] < delta:
                violations.append((i, j))
    return CoincidenceReport(best[0], best[1], best[2], delta, violations)


def velocity_samples_consistent(state: Superposition, traj: BohmianTrajectory) -> float:
    """Max deviation between recorded velocities and the field at the samples."""
    try:
        field_v = np.array([velocity_field(state, p, tt) for tt, p in zip(traj.t, traj.position)])
    except SingularRegion:
        return float("inf")
    return float(np.max(np.abs(field_v - traj.velocity)))
