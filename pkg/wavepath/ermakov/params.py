"""
Oscillator Parameters
=====================

Two-dimensional time-dependent linear oscillator

    H = |p|^2 / 2m + (m/2) * sum_j V_j(t) r_j^2,    V_j(t) = v_j - kappa_j cos(2 omega_j t)

in atomic units. V_j is a frequency squared; the classical equation of
motion on each axis is q'' + V_j(t) q = 0 (a Mathieu equation when driven).

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Tuple, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]


class Axis(str, Enum):
    """Cartesian axis of the oscillator."""
    X = "x"
    Y = "y"


AXES: Tuple[Axis, Axis] = (Axis.X, Axis.Y)


@dataclass(frozen=True)
class AxisDrive:
    """Potential parameters of one axis."""
    v: float
    kappa: float = 0.0
    omega: float = 0.0

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")

    @property
    def is_static(self) -> bool:
        # omega = 0 with kappa != 0 is the constant potential v - kappa
        return self.kappa == 0.0 or self.omega == 0.0

    def potential(self, t: ArrayLike) -> ArrayLike:
        return self.v - self.kappa * np.cos(2.0 * self.omega * t)

    def to_dict(self) -> Dict[str, float]:
        return {"v": self.v, "kappa": self.kappa, "omega": self.omega}


@dataclass(frozen=True)
class OscillatorParams:
    """Mass, hbar and per-axis drive of the oscillator."""
    mass: float
    hbar: float
    x: AxisDrive
    y: AxisDrive

    def __post_init__(self) -> None:
        if self.mass <= 0:
            raise ValueError(f"mass must be > 0, got {self.mass}")
        if self.hbar <= 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")

    @property
    def c0(self) -> float:
        """Ermakov constant; c0 = 2 hbar makes phi the wavefunction phase."""
        return 2.0 * self.hbar

    def axis(self, axis: Union[Axis, str]) -> AxisDrive:
        return self.x if Axis(axis) is Axis.X else self.y

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mass": self.mass,
            "hbar": self.hbar,
            "x": self.x.to_dict(),
            "y": self.y.to_dict(),
        }


def potential(params: OscillatorParams, axis: Union[Axis, str], t: ArrayLike) -> ArrayLike:
    """V_j(t) = v_j - kappa_j cos(2 omega_j t), a frequency squared."""
    return params.axis(axis).potential(t)


def default_alpha0(params: OscillatorParams) -> Tuple[float, float]:
    """
    Per-axis static fixed point of the Ermakov equation.

    alpha0^4 = c0^2 / v_j, i.e. alpha0^2 = 2 hbar / sqrt(v_j). Independent of
    the mass because the Gaussian width enters as m / alpha^2.

    Raises:
        ValueError: if some v_j <= 0 (no fixed point exists)
    """
    values = []
    for axis in AXES:
        v = params.axis(axis).v
        if v <= 0:
            raise ValueError(
                f"no static fixed point on axis {axis.value} (v={v}); alpha0 must be given"
            )
        values.append(float(np.sqrt(2.0 * params.hbar / np.sqrt(v))))
    return values[0], values[1]


def mathieu_form(params: OscillatorParams, axis: Union[Axis, str]) -> Optional[Tuple[float, float]]:
    """
    Canonical Mathieu parameters (a, q) of a driven axis.

    With tau = omega t the equation q'' + V(t) q = 0 becomes
    y'' + (a - 2 q cos 2 tau) y = 0 with a = v / omega^2, q = kappa / (2 omega^2).
    Returns None for an undriven axis.
    """
    drive = params.axis(axis)
    if drive.is_static:
        return None
    w2 = drive.omega ** 2
    return drive.v / w2, drive.kappa / (2.0 * w2)
