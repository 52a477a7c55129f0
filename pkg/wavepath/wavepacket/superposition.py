"""
Superposition of Gaussian Branches
==================================

psi(r, t) = sum_J a_J g^J_x(x, t) g^J_y(y, t)

Values, gradients and Laplacians are assembled from per-axis derivative
jets of every branch, so all fields are closed form. Overlaps and
moments use the log-quadratic algebra of wavepath.wavepacket.moments.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from wavepath.config import settings
from wavepath.ermakov import (
    AXES,
    AxisInit,
    OscillatorParams,
    default_alpha0,
    integrate_ermakov,
)
from wavepath.logging import get_logger
from wavepath.wavepacket.branch import GaussianBranch
from wavepath.wavepacket.moments import LogQuadratic

logger = get_logger(__name__)


# =============================================================================
# Field containers
# =============================================================================

@dataclass(frozen=True)
class ComplexField:
    """psi, grad psi and lap psi at one or many points (gradient last axis = 2)."""
    value: np.ndarray
    gradient: np.ndarray
    laplacian: np.ndarray

    def to_dict(self) -> Dict[str, Any]:
        def pair(z: np.ndarray) -> Dict[str, Any]:
            return {"re": np.real(z).tolist(), "im": np.imag(z).tolist()}
        return {
            "value": pair(self.value),
            "gradient": pair(self.gradient),
            "laplacian": pair(self.laplacian),
        }


@dataclass(frozen=True)
class DensityField:
    """rho and grad(rho)/rho; singular marks points below the density floor."""
    rho: np.ndarray
    grad_log_rho: np.ndarray
    singular: np.ndarray
    floor: float

    @property
    def any_singular(self) -> bool:
        return bool(np.any(self.singular))


class WaveJet:
    """
    Mixed partial derivatives of psi up to a fixed order at given points.

    d(a, b) is d^(a+b) psi / dx^a dy^b.
    """

    def __init__(self, partials: Dict[Tuple[int, int], np.ndarray], order: int):
        self._partials = partials
        self.order = order

    def d(self, a: int, b: int) -> np.ndarray:
        if a + b > self.order:
            raise ValueError(f"jet holds derivatives up to order {self.order}")
        return self._partials[(a, b)]

    def partial(self, *axes: int) -> np.ndarray:
        """Derivative along a sequence of axis indices, e.g. partial(0, 1)."""
        a = sum(1 for i in axes if i == 0)
        return self.d(a, len(axes) - a)

    @property
    def value(self) -> np.ndarray:
        return self._partials[(0, 0)]

    def field(self) -> ComplexField:
        grad = np.stack([self.d(1, 0), self.d(0, 1)], axis=-1)
        return ComplexField(self.value, grad, self.d(2, 0) + self.d(0, 2))


# =============================================================================
# Superposition
# =============================================================================

@dataclass(frozen=True, eq=False)
class Superposition:
    """Ordered list of weighted Gaussian branches sharing one oscillator."""
    branches: Tuple[GaussianBranch, ...]
    params: OscillatorParams

    def __post_init__(self) -> None:
        if len(self.branches) == 0:
            raise ValueError("a superposition needs at least one branch")
        for branch in self.branches:
            if branch.params != self.params:
                raise ValueError(f"branch {branch.label} uses different oscillator parameters")

    @property
    def labels(self) -> List[str]:
        return [b.label for b in self.branches]

    @property
    def span(self) -> Tuple[float, float]:
        lo = max(b.span[0] for b in self.branches)
        hi = min(b.span[1] for b in self.branches)
        return lo, hi

    def branch(self, label: str) -> GaussianBranch:
        for b in self.branches:
            if b.label == label:
                return b
        raise KeyError(f"unknown branch: {label}")

    def select(self, labels: Sequence[str]) -> "Superposition":
        """Sub-superposition of the named branches with their original weights."""
        return Superposition(tuple(self.branch(lab) for lab in labels), self.params)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "branches": [
                {"label": b.label, "weight": [b.weight.real, b.weight.imag],
                 "trajectory": b.traj.to_dict()}
                for b in self.branches
            ],
        }


def make_superposition(
    params: OscillatorParams,
    q0: Sequence[float],
    momenta: Sequence[Sequence[float]],
    weights: Sequence[complex],
    t0: float,
    t1: float,
    alpha0: Optional[Sequence[float]] = None,
    labels: Optional[Sequence[str]] = None,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> Superposition:
    """
    Build branches with a common center q0 and per-branch momenta.

    Args:
        params: Oscillator parameters
        q0: Common initial center (2-vector)
        momenta: One initial momentum 2-vector per branch
        weights: One weight per branch
        t0, t1: Reference and end time of the guiding trajectories
        alpha0: Initial Ermakov amplitude per axis (default: static fixed point)
        labels: Branch labels (default J1, J2, ...)
    """
    if len(momenta) != len(weights):
        raise ValueError("momenta and weights must have the same length")
    alpha0 = default_alpha0(params) if alpha0 is None else tuple(alpha0)
    labels = [f"J{i + 1}" for i in range(len(momenta))] if labels is None else list(labels)

    branches = []
    for label, p0, w in zip(labels, momenta, weights):
        init = tuple(
            AxisInit(q=float(q0[i]), p=float(p0[i]), alpha=float(alpha0[i])) for i in range(2)
        )
        traj = integrate_ermakov(params, init, t0, t1, rtol=rtol, atol=atol, label=label)
        branches.append(GaussianBranch(label=label, weight=complex(w), traj=traj))

    logger.debug("superposition_built", n_branches=len(branches), t0=t0, t1=t1)
    return Superposition(tuple(branches), params)


# =============================================================================
# Evaluation
# =============================================================================

def jet(state: Superposition, r: np.ndarray, t: float, order: int = 2) -> WaveJet:
    """Partial derivatives of psi up to `order` (<= 3) at points r (..., 2)."""
    r = np.asarray(r, dtype=float)
    x, y = r[..., 0], r[..., 1]
    partials: Dict[Tuple[int, int], np.ndarray] = {}
    for branch in state.branches:
        gx = branch.axis_factor(AXES[0], t).derivatives(x, order)
        gy = branch.axis_factor(AXES[1], t).derivatives(y, order)
        for a in range(order + 1):
            for b in range(order + 1 - a):
                term = branch.weight * gx[a] * gy[b]
                partials[(a, b)] = partials[(a, b)] + term if (a, b) in partials else term
    return WaveJet(partials, order)


def evaluate(state: Superposition, r: np.ndarray, t: float) -> ComplexField:
    """
    psi, grad psi and lap psi at r; vectorized over leading dimensions of r.

    Raises:
        OutOfRange: t outside some branch's span
    """
    return jet(state, r, t, order=2).field()


def peak_density_bound(state: Superposition, t: float) -> float:
    """Upper bound of rho: (sum_J |a_J| sqrt(peak_J))^2."""
    amp = sum(abs(b.weight) * np.sqrt(b.peak_density(t)) for b in state.branches)
    return float(amp ** 2)


def density_floor(state: Superposition, t: float) -> float:
    return settings.density_floor * peak_density_bound(state, t)


def density(state: Superposition, r: np.ndarray, t: float) -> DensityField:
    """rho = |psi|^2 and grad(rho)/rho = 2 Re(grad psi / psi), flagged below the floor."""
    f = evaluate(state, r, t)
    rho = np.abs(f.value) ** 2
    floor = density_floor(state, t)
    singular = rho < floor
    with np.errstate(divide="ignore", invalid="ignore"):
        grad_log = 2.0 * np.real(f.gradient / f.value[..., None])
    grad_log = np.where(singular[..., None], np.nan, grad_log)
    return DensityField(rho=rho, grad_log_rho=grad_log, singular=singular, floor=floor)


def grad_log_density(state: Superposition, r: np.ndarray, t: float) -> np.ndarray:
    return density(state, r, t).grad_log_rho


# =============================================================================
# Closed-form overlaps and moments
# =============================================================================

def branch_factors(state: Superposition, t: float) -> List[Tuple[complex, Dict[Any, LogQuadratic]]]:
    """(weight, {axis: log-quadratic factor}) per branch."""
    out = []
    for b in state.branches:
        factors = b.factors(t)
        out.append((b.weight, {a: factors[a].log_quadratic() for a in AXES}))
    return out


def norm(state: Superposition, t: float) -> float:
    """Total norm including branch cross terms."""
    factors = branch_factors(state, t)
    total = 0j
    for wk, fk in factors:
        for wj, fj in factors:
            overlap = np.conj(wk) * wj
            for a in AXES:
                overlap = overlap * (fk[a].conj() * fj[a]).integral()
            total += overlap
    return float(np.real(total))


@dataclass(frozen=True)
class Expectations:
    """Position and momentum expectation values of the total state."""
    t: float
    norm: float
    position: np.ndarray
    momentum: np.ndarray
    branch_positions: Dict[str, np.ndarray]
    branch_momenta: Dict[str, np.ndarray]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "norm": self.norm,
            "position": self.position.tolist(),
            "momentum": self.momentum.tolist(),
            "branch_positions": {k: v.tolist() for k, v in self.branch_positions.items()},
            "branch_momenta": {k: v.tolist() for k, v in self.branch_momenta.items()},
        }


def branch_expectations(state: Superposition, t: float) -> Expectations:
    """
    <r> and <p> of the normalized total state by Gaussian moments.

    <psi_K| p_j |psi_J> = -i hbar integral conj(g_K) (-2 a_J x + b_J) g_J
    """
    hbar = state.params.hbar
    factors = branch_factors(state, t)
    total = 0j
    pos = np.zeros(2, dtype=complex)
    mom = np.zeros(2, dtype=complex)
    for wk, fk in factors:
        for wj, fj in factors:
            w = np.conj(wk) * wj
            prods = {a: fk[a].conj() * fj[a] for a in AXES}
            i0 = {a: prods[a].integral() for a in AXES}
            i1 = {a: prods[a].first_moment() for a in AXES}
            total += w * i0[AXES[0]] * i0[AXES[1]]
            for k, a in enumerate(AXES):
                other = i0[AXES[1 - k]]
                pos[k] += w * i1[a] * other
                d_int = -2.0 * fj[a].a * i1[a] + fj[a].b * i0[a]
                mom[k] += w * (-1j * hbar) * d_int * other
    n = float(np.real(total))
    return Expectations(
        t=float(t),
        norm=n,
        position=np.real(pos) / n,
        momentum=np.real(mom) / n,
        branch_positions={b.label: b.traj.position(float(t)) for b in state.branches},
        branch_momenta={b.label: b.traj.momentum(float(t)) for b in state.branches},
    )
