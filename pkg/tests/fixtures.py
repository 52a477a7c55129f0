"""
Reference Solutions
===================

Independent oracles the closed-form machinery is checked against:
    - split_step_1d: Strang split-step Fourier solver for one oscillator axis
    - static_action: textbook action of the undriven oscillator
    - gaussian_window_mean: weak value of a single real Gaussian seen through a window

Author: wavepath Team
Version: 1.0.0
"""

from typing import Callable

import numpy as np


def split_step_1d(
    psi0: np.ndarray,
    x: np.ndarray,
    mass: float,
    hbar: float,
    potential: Callable[[float], float],
    t0: float,
    t1: float,
    dt: float = 1e-3,
) -> np.ndarray:
    """
    Propagate psi0 under H = p^2/2m + (m/2) V(t) x^2 on a periodic grid.

    Kinetic half steps around a full potential step with V at the midpoint.
    """
    n_steps = int(round((t1 - t0) / dt))
    dt = (t1 - t0) / n_steps
    dx = x[1] - x[0]
    k = 2.0 * np.pi * np.fft.fftfreq(len(x), d=dx)
    half_kinetic = np.exp(-1j * hbar * k ** 2 * dt / (4.0 * mass))

    psi = np.asarray(psi0, dtype=complex).copy()
    for step in range(n_steps):
        t_mid = t0 + (step + 0.5) * dt
        psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
        psi *= np.exp(-1j * 0.5 * mass * potential(t_mid) * x ** 2 * dt / hbar)
        psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
    return psi


def static_action(mass: float, omega: float, x1: np.ndarray, x0: np.ndarray, T: float) -> np.ndarray:
    return mass * omega / (2.0 * np.sin(omega * T)) * ((x1 ** 2 + x0 ** 2) * np.cos(omega * T) - 2.0 * x1 * x0)


def gaussian_window_mean(center: float, sigma: float, R0: float, width: float) -> float:
    """Mean of exp(-(x - center)^2 / 2 sigma^2) exp(-(x - R0)^2 / width^2)."""
    a, b = 1.0 / (2.0 * sigma ** 2), 1.0 / width ** 2
    return (a * center + b * R0) / (a + b)
