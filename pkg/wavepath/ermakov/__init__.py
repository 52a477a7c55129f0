"""
wavepath Ermakov Package
========================

Guiding trajectories of the time-dependent oscillator: the classical
solution and the Ermakov amplitude/phase, forward or backward in time.

Author: wavepath Team
Version: 1.0.0
"""

from .checks import ermakov_residual, integrate_classical, linear_equivalence_error
from .params import (
    AXES,
    Axis,
    AxisDrive,
    OscillatorParams,
    default_alpha0,
    mathieu_form,
    potential,
)
from .solver import (
    AxisInit,
    AxisSolution,
    ErmakovState,
    GuidingTrajectory,
    backward_trajectory,
    bounded_amplitude_check,
    integrate_ermakov,
    state_at,
)

__all__ = [
    "AXES",
    "Axis",
    "AxisDrive",
    "AxisInit",
    "AxisSolution",
    "ErmakovState",
    "GuidingTrajectory",
    "OscillatorParams",
    "backward_trajectory",
    "bounded_amplitude_check",
    "default_alpha0",
    "ermakov_residual",
    "integrate_classical",
    "integrate_ermakov",
    "linear_equivalence_error",
    "mathieu_form",
    "potential",
    "state_at",
]
