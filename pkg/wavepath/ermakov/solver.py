"""
Ermakov Solver
==============

Joint solution of the classical equation of motion and the Ermakov system
for each axis of the oscillator:

    q'' + V(t) q = 0
    alpha'' + V(t) alpha = c0^2 / alpha^3,     phi' = c0 / alpha^2,   c0 = 2 hbar

Only (alpha, alpha', phi) is integrated. The classical trajectory follows
from the amplitude-phase decomposition

    q(t) = alpha(t) * (c1 cos(phi - phi_ref) + c2 sin(phi - phi_ref))

with c1, c2 fixed by the reference state, and p = m dq/dt.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import OdeSolution, solve_ivp

from wavepath.config import settings
from wavepath.errors import AmplitudeCollapse, OutOfRange, StepFailure
from wavepath.ermakov.params import AXES, ArrayLike, Axis, OscillatorParams
from wavepath.logging import get_logger

logger = get_logger(__name__)

# Relative slack when checking a requested time against the span
_SPAN_SLACK = 1e-12


@dataclass(frozen=True)
class AxisInit:
    """Reference state of one axis: position, momentum, Ermakov amplitude."""
    q: float
    p: float
    alpha: float
    alpha_dot: float = 0.0

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")


@dataclass(frozen=True)
class ErmakovState:
    """State of one axis at time t; fields may be arrays for vectorized t."""
    t: ArrayLike
    q: ArrayLike
    p: ArrayLike
    alpha: ArrayLike
    alpha_dot: ArrayLike
    phi: ArrayLike

    def to_dict(self) -> Dict[str, Any]:
        return {
            name: np.asarray(getattr(self, name)).tolist()
            for name in ("t", "q", "p", "alpha", "alpha_dot", "phi")
        }


@dataclass(frozen=True, eq=False)
class AxisSolution:
    """
    Dense Ermakov solution of one axis.

    Nodes are stored in increasing time order regardless of the
    integration direction.
    """
    axis: Axis
    mass: float
    hbar: float
    t_ref: float
    init: AxisInit
    t: np.ndarray
    alpha: np.ndarray
    alpha_dot: np.ndarray
    phi: np.ndarray
    dense: OdeSolution
    nfev: int = 0

    @property
    def c0(self) -> float:
        return 2.0 * self.hbar

    @property
    def c1(self) -> float:
        return self.init.q / self.init.alpha

    @property
    def c2(self) -> float:
        # dq/dt(t_ref) = alpha' c1 + (c0 / alpha) c2
        v_ref = self.init.p / self.mass
        return (v_ref - self.init.alpha_dot * self.c1) * self.init.alpha / self.c0

    @property
    def span(self) -> Tuple[float, float]:
        return float(self.t[0]), float(self.t[-1])

    def _check_span(self, t: np.ndarray) -> None:
        lo, hi = self.span
        slack = _SPAN_SLACK * max(1.0, hi - lo)
        if np.any(t < lo - slack) or np.any(t > hi + slack):
            raise OutOfRange(
                f"time outside trajectory span [{lo}, {hi}]",
                {"axis": self.axis.value, "span": [lo, hi],
                 "requested": [float(np.min(t)), float(np.max(t))]},
            )

    def _raw(self, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        lo, hi = self.span
        y = self.dense(np.clip(t, lo, hi))
        alpha, alpha_dot, phi = y[0], y[1], y[2]
        # grid nodes return the stored state exactly
        idx = np.clip(np.searchsorted(self.t, t), 0, len(self.t) - 1)
        on_node = self.t[idx] == t
        if np.any(on_node):
            alpha = np.where(on_node, self.alpha[idx], alpha)
            alpha_dot = np.where(on_node, self.alpha_dot[idx], alpha_dot)
            phi = np.where(on_node, self.phi[idx], phi)
        return alpha, alpha_dot, phi

    def at(self, t: ArrayLike) -> ErmakovState:
        """Interpolated state; vectorized over t."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        self._check_span(t_arr)
        alpha, alpha_dot, phi = self._raw(t_arr)

        dphi = phi  # phi(t_ref) = 0
        cos, sin = np.cos(dphi), np.sin(dphi)
        c1, c2 = self.c1, self.c2
        q = alpha * (c1 * cos + c2 * sin)
        phi_dot = self.c0 / alpha ** 2
        q_dot = alpha_dot * (c1 * cos + c2 * sin) + alpha * phi_dot * (c2 * cos - c1 * sin)
        p = self.mass * q_dot

        if np.ndim(t) == 0:
            return ErmakovState(float(t), float(q[0]), float(p[0]), float(alpha[0]),
                                float(alpha_dot[0]), float(phi[0]))
        return ErmakovState(t_arr, q, p, alpha, alpha_dot, phi)

    def alpha_dot_at(self, t: ArrayLike) -> np.ndarray:
        """Dense alpha' component without the span check (finite-difference helper)."""
        return self.dense(np.asarray(t, dtype=float))[1]


@dataclass(frozen=True, eq=False)
class GuidingTrajectory:
    """
    Joint Ermakov solution on both axes.

    Immutable after construction and safe to share read-only between workers.
    """
    params: OscillatorParams
    x: AxisSolution
    y: AxisSolution
    label: str = ""
    amplitude_ratio: float = 1.0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def axis(self, axis: Union[Axis, str]) -> AxisSolution:
        return self.x if Axis(axis) is Axis.X else self.y

    @property
    def span(self) -> Tuple[float, float]:
        return (max(self.x.span[0], self.y.span[0]), min(self.x.span[1], self.y.span[1]))

    @property
    def t_ref(self) -> float:
        return self.x.t_ref

    @property
    def bounded(self) -> bool:
        return self.amplitude_ratio <= settings.amplitude_growth_warning

    def position(self, t: ArrayLike) -> np.ndarray:
        """q(t) as (..., 2)."""
        return np.stack([self.x.at(t).q, self.y.at(t).q], axis=-1)

    def momentum(self, t: ArrayLike) -> np.ndarray:
        """p(t) as (..., 2)."""
        return np.stack([self.x.at(t).p, self.y.at(t).p], axis=-1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "span": list(self.span),
            "t_ref": self.t_ref,
            "amplitude_ratio": self.amplitude_ratio,
            "bounded": self.bounded,
            "init": {
                a.value: {
                    "q": self.axis(a).init.q,
                    "p": self.axis(a).init.p,
                    "alpha": self.axis(a).init.alpha,
                    "alpha_dot": self.axis(a).init.alpha_dot,
                }
                for a in AXES
            },
        }


def _ermakov_rhs(drive, c0: float):
    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        alpha, alpha_dot = y[0], y[1]
        return np.array([
            alpha_dot,
            -drive.potential(t) * alpha + c0 ** 2 / alpha ** 3,
            c0 / alpha ** 2,
        ])
    return rhs


def _integrate_axis(
    params: OscillatorParams,
    axis: Axis,
    init: AxisInit,
    t0: float,
    t1: float,
    rtol: float,
    atol: float,
) -> AxisSolution:
    drive = params.axis(axis)
    floor = settings.amplitude_floor

    def collapse(t: float, y: np.ndarray) -> float:
        return y[0] - floor
    collapse.terminal = True

    sol = solve_ivp(
        _ermakov_rhs(drive, params.c0),
        (t0, t1),
        np.array([init.alpha, init.alpha_dot, 0.0]),
        method="DOP853",
        rtol=rtol,
        atol=atol,
        dense_output=True,
        events=collapse,
    )

    if sol.status == 1:
        raise AmplitudeCollapse(
            "Ermakov amplitude reached the positivity floor",
            {"axis": axis.value, "t": float(sol.t[-1]), "floor": floor},
        )
    if sol.status != 0:
        raise StepFailure(
            f"Ermakov integration failed: {sol.message}",
            {"axis": axis.value, "t": float(sol.t[-1]), "rtol": rtol, "atol": atol},
        )

    t, y = sol.t, sol.y
    if t1 < t0:
        t, y = t[::-1], y[:, ::-1]

    logger.debug(
        "ermakov_integrated",
        axis=axis.value,
        span=[float(t[0]), float(t[-1])],
        n_steps=int(len(t) - 1),
        nfev=int(sol.nfev),
    )

    return AxisSolution(
        axis=axis,
        mass=params.mass,
        hbar=params.hbar,
        t_ref=float(t0),
        init=init,
        t=np.ascontiguousarray(t),
        alpha=np.ascontiguousarray(y[0]),
        alpha_dot=np.ascontiguousarray(y[1]),
        phi=np.ascontiguousarray(y[2]),
        dense=sol.sol,
        nfev=int(sol.nfev),
    )


def integrate_ermakov(
    params: OscillatorParams,
    init: Sequence[AxisInit],
    t0: float,
    t1: float,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    label: str = "",
) -> GuidingTrajectory:
    """
    Integrate the Ermakov system on both axes from t0 to t1.

    Args:
        params: Oscillator parameters
        init: (x, y) reference states at t0; phi(t0) = 0
        t0: Reference time
        t1: End time; t1 < t0 integrates backward
        rtol: Relative tolerance (default from settings)
        atol: Absolute tolerance (default from settings)
        label: Optional trajectory label

    Returns:
        GuidingTrajectory with states sorted by increasing t

    Raises:
        AmplitudeCollapse: alpha reached the positivity floor
        StepFailure: integrator could not meet the tolerance
    """
    if t1 == t0:
        raise ValueError("t1 must differ from t0")
    rtol = settings.rtol if rtol is None else rtol
    atol = settings.atol if atol is None else atol

    init_x, init_y = init
    sx = _integrate_axis(params, Axis.X, init_x, t0, t1, rtol, atol)
    sy = _integrate_axis(params, Axis.Y, init_y, t0, t1, rtol, atol)
    traj = GuidingTrajectory(params=params, x=sx, y=sy, label=label)
    return bounded_amplitude_check(traj)


def backward_trajectory(
    params: OscillatorParams,
    r_f: Sequence[float],
    p_f: Sequence[float],
    t_f: float,
    alpha_f: Union[float, Sequence[float]],
    t_grid: Union[float, Sequence[float]],
    alpha_dot_f: Union[float, Sequence[float]] = 0.0,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    label: str = "",
) -> GuidingTrajectory:
    """
    Guiding trajectory fixed by final conditions q(t_f) = r_f, p(t_f) = p_f.

    Integrates backward from t_f down to the earliest time of t_grid; the
    result is stored in increasing time like any other trajectory.
    """
    t_start = float(np.min(t_grid))
    if np.max(t_grid) > t_f:
        raise ValueError("t_grid must not extend past t_f for a backward trajectory")
    alpha_f = np.broadcast_to(np.asarray(alpha_f, dtype=float), (2,))
    alpha_dot_f = np.broadcast_to(np.asarray(alpha_dot_f, dtype=float), (2,))
    init = tuple(
        AxisInit(q=float(r_f[i]), p=float(p_f[i]), alpha=float(alpha_f[i]),
                 alpha_dot=float(alpha_dot_f[i]))
        for i in range(2)
    )
    return integrate_ermakov(params, init, t_f, t_start, rtol=rtol, atol=atol, label=label)


def state_at(traj: GuidingTrajectory, t: ArrayLike) -> Tuple[ErmakovState, ErmakovState]:
    """
    (x, y) states at time t by dense-output interpolation.

    Raises:
        OutOfRange: t outside the trajectory's span
    """
    return traj.x.at(t), traj.y.at(t)


def bounded_amplitude_check(traj: GuidingTrajectory) -> GuidingTrajectory:
    """Attach max(alpha)/min(alpha) and warn when the drive looks unbounded."""
    ratio = max(
        float(np.max(sol.alpha) / np.min(sol.alpha)) for sol in (traj.x, traj.y)
    )
    if ratio > settings.amplitude_growth_warning:
        logger.warning(
            "amplitude_growth_warning",
            label=traj.label,
            amplitude_ratio=ratio,
            limit=settings.amplitude_growth_warning,
        )
    return replace(traj, amplitude_ratio=ratio)
