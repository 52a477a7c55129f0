"""
Momentum Weak Values
====================

Weak value of p with postselection on a position eigenstate r_f:

    <p>_W = -i hbar grad psi(r_f, t) / psi(r_f, t)
    Re <p>_W = m v(r_f, t),     Im <p>_W = -hbar grad rho / (2 rho)

and the two-point form built from the position weak value an instant
earlier,

    <p>_W ~ m (r_f - <r(t - eps)>_W) / eps,
    <r(t - eps)>_W = int K(r_f, r; t, t - eps) r psi(r, t - eps) dr / psi(r_f, t)

with K the exact short-time kernel, so every integral is a Gaussian moment.

Author: wavepath Team
Version: 1.0.0
"""

from typing import Sequence

import numpy as np

from wavepath.ermakov import AXES
from wavepath.errors import SingularRegion
from wavepath.wavepacket import (
    Superposition,
    branch_factors,
    density_floor,
    evaluate,
    kernel_log_quadratic,
)


def weak_momentum_value(state: Superposition, r_f: np.ndarray, t: float) -> np.ndarray:
    """
    -i hbar grad psi / psi at r_f, complex (..., 2).

    Raises:
        SingularRegion: rho(r_f, t) below the density floor
    """
    r_f = np.asarray(r_f, dtype=float)
    f = evaluate(state, r_f, t)
    rho = np.abs(f.value) ** 2
    floor = density_floor(state, t)
    if np.any(rho < floor):
        raise SingularRegion(
            "momentum weak value undefined at a node",
            {"t": float(t), "floor": floor, "n_points": int(np.sum(rho < floor))},
        )
    return -1j * state.params.hbar * f.gradient / f.value[..., None]


def weak_momentum_unchecked(state: Superposition, r_f: np.ndarray, t: float) -> np.ndarray:
    """Same as weak_momentum_value without the density check (nan at exact nodes)."""
    f = evaluate(state, np.asarray(r_f, dtype=float), t)
    with np.errstate(divide="ignore", invalid="ignore"):
        return -1j * state.params.hbar * f.gradient / f.value[..., None]


def weak_position_before(
    state: Superposition,
    r_f: Sequence[float],
    t: float,
    eps: float,
) -> np.ndarray:
    """<r(t - eps)>_W for postselection at r_f at time t, complex (2,)."""
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    r_f = np.asarray(r_f, dtype=float)
    kernel_traj = state.branches[0].traj
    kernels = {
        a: kernel_log_quadratic(kernel_traj, a, r_f[k], t, t - eps, check_caustic=False)
        for k, a in enumerate(AXES)
    }

    denominator = 0j
    numerator = np.zeros(2, dtype=complex)
    for weight, factors in branch_factors(state, t - eps):
        prods = {a: kernels[a] * factors[a] for a in AXES}
        i0 = {a: prods[a].integral() for a in AXES}
        i1 = {a: prods[a].first_moment() for a in AXES}
        denominator += weight * i0[AXES[0]] * i0[AXES[1]]
        numerator[0] += weight * i1[AXES[0]] * i0[AXES[1]]
        numerator[1] += weight * i0[AXES[0]] * i1[AXES[1]]
    return numerator / denominator


def weak_momentum_two_point(
    state: Superposition,
    r_f: Sequence[float],
    t: float,
    eps: float,
) -> np.ndarray:
    """
    m (r_f - <r(t - eps)>_W) / eps, complex (2,); first order in eps.

    Raises:
        SingularRegion: rho(r_f, t) below the density floor
    """
    r_f = np.asarray(r_f, dtype=float)
    rho = float(np.abs(evaluate(state, r_f, t).value) ** 2)
    if rho < density_floor(state, t):
        raise SingularRegion("momentum weak value undefined at a node",
                             {"t": float(t), "r_f": r_f.tolist()})
    before = weak_position_before(state, r_f, t, eps)
    return state.params.mass * (r_f - before) / eps
