"""
Bohmian Ensembles
=================

Sampling from rho(t0), joint transport of many streamlines, and the
equivariance check comparing transported samples against rho(t1).

Author: wavepath Team
Version: 1.0.0
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from wavepath.config import settings
from wavepath.errors import StepFailure
from wavepath.flow.bohmian import BohmianTrajectory, integrate_bohmian, max_step_for
from wavepath.flow.fields import velocity_unchecked
from wavepath.logging import get_logger
from wavepath.wavepacket import Superposition, density_floor, evaluate

logger = get_logger(__name__)

_MAX_BATCHES = 1000


# =============================================================================
# Sampling
# =============================================================================

def sample_density(
    state: Superposition,
    t: float,
    n: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Draw n points from rho(., t) by rejection sampling.

    Proposal is the mixture sum_J |a_J|^2 |g_J|^2 / sum |a_J|^2. By
    Cauchy-Schwarz rho <= n_J sum_J |a_J|^2 |g_J|^2, which bounds the
    acceptance ratio by one.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    weights = np.array([abs(b.weight) ** 2 for b in state.branches])
    total = float(np.sum(weights))
    probs = weights / total
    centers = np.array([b.traj.position(float(t)) for b in state.branches])
    sigmas = np.array([b.sigma(t) for b in state.branches])
    n_branch = len(state.branches)

    def mixture_density(pts: np.ndarray) -> np.ndarray:
        out = np.zeros(len(pts))
        for w, c, s in zip(weights, centers, sigmas):
            z = (pts - c) / s
            out += w * np.exp(-0.5 * np.sum(z ** 2, axis=-1)) / (2.0 * np.pi * s[0] * s[1])
        return out

    accepted: List[np.ndarray] = []
    count = 0
    batch = max(2 * n, 256)
    for _ in range(_MAX_BATCHES):
        comp = rng.choice(n_branch, size=batch, p=probs)
        pts = centers[comp] + sigmas[comp] * rng.standard_normal((batch, 2))
        rho = np.abs(evaluate(state, pts, t).value) ** 2
        envelope = n_branch * mixture_density(pts)
        keep = rng.random(batch) * envelope < rho
        accepted.append(pts[keep])
        count += int(np.sum(keep))
        if count >= n:
            break
    else:
        raise StepFailure("rejection sampling did not converge", {"n": n, "accepted": count})
    return np.concatenate(accepted)[:n]


# =============================================================================
# Transport
# =============================================================================

@dataclass(frozen=True)
class TransportResult:
    initial: np.ndarray
    final: np.ndarray
    singular: np.ndarray      # points ending below the density floor
    t0: float
    t1: float
    success: bool
    message: str = ""

    @property
    def n_failed(self) -> int:
        return int(np.sum(self.singular)) if self.success else int(len(self.initial))


def transport_ensemble(
    state: Superposition,
    points: np.ndarray,
    t0: float,
    t1: float,
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> TransportResult:
    """Carry all points along the velocity field from t0 to t1 as one joint ODE."""
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if t1 == t0:
        return TransportResult(points, points.copy(), np.zeros(len(points), bool), t0, t1, True)
    rtol = settings.rtol if rtol is None else rtol
    atol = settings.atol if atol is None else atol

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        v = velocity_unchecked(state, y.reshape(-1, 2), t)
        # frozen at nodes; such points are reported as singular
        return np.nan_to_num(v, nan=0.0, posinf=0.0, neginf=0.0).ravel()

    sol = solve_ivp(rhs, (t0, t1), points.ravel(), method="DOP853", rtol=rtol, atol=atol,
                    max_step=max_step_for(state, t0))
    if sol.status != 0:
        logger.warning("ensemble_transport_failed", message=sol.message, n=len(points))
        return TransportResult(points, np.full_like(points, np.nan),
                               np.ones(len(points), bool), t0, t1, False, str(sol.message))

    final = sol.y[:, -1].reshape(-1, 2)
    rho = np.abs(evaluate(state, final, t1).value) ** 2
    return TransportResult(points, final, rho < density_floor(state, t1), t0, t1, True)


@dataclass(frozen=True)
class Ensemble:
    """Seeded ensemble of streamlines started from rho(t0)."""
    seed: int
    initial: np.ndarray
    trajectories: List[BohmianTrajectory]
    t0: float
    t1: float

    @property
    def n_terminated(self) -> int:
        return sum(1 for tr in self.trajectories if not tr.completed)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "n": int(len(self.initial)),
            "t0": self.t0,
            "t1": self.t1,
            "n_terminated": self.n_terminated,
        }


def run_ensemble(
    state: Superposition,
    n: int,
    t0: float,
    t1: float,
    seed: int,
    threads: int = 1,
    initial: Optional[np.ndarray] = None,
) -> Ensemble:
    """
    Integrate one streamline per start point; order follows the samples.

    Start points are n samples of rho(t0) unless given explicitly.
    """
    if initial is None:
        initial = sample_density(state, t0, n, np.random.default_rng(seed))
    initial = np.asarray(initial, dtype=float).reshape(-1, 2)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        trajs = list(executor.map(
            lambda k: integrate_bohmian(state, initial[k], t0, t1, state_id=f"member-{k}"),
            range(len(initial)),
        ))
    return Ensemble(seed=seed, initial=initial, trajectories=trajs, t0=t0, t1=t1)


# =============================================================================
# Equivariance
# =============================================================================

def histogram_box(state: Superposition, t: float, n_sigma: float = 4.0) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    centers = np.array([b.traj.position(float(t)) for b in state.branches])
    sigmas = np.array([b.sigma(t) for b in state.branches])
    lo = np.min(centers - n_sigma * sigmas, axis=0)
    hi = np.max(centers + n_sigma * sigmas, axis=0)
    return (float(lo[0]), float(hi[0])), (float(lo[1]), float(hi[1]))


def binned_l1(state: Superposition, samples: np.ndarray, t: float, bins: int = 40,
              subdivisions: int = 4) -> float:
    """
    sum over bins |empirical fraction - integral of rho over the bin|.

    Mass of rho outside the box counts against the score the same as
    samples outside it.
    """
    (x_lo, x_hi), (y_lo, y_hi) = histogram_box(state, t)
    counts, xe, ye = np.histogram2d(samples[:, 0], samples[:, 1], bins=bins,
                                    range=[[x_lo, x_hi], [y_lo, y_hi]])
    empirical = counts / len(samples)

    # midpoint rule with subdivisions^2 nodes per bin
    nx = bins * subdivisions
    hx, hy = (x_hi - x_lo) / nx, (y_hi - y_lo) / nx
    xs = x_lo + hx * (np.arange(nx) + 0.5)
    ys = y_lo + hy * (np.arange(nx) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    rho = np.abs(evaluate(state, np.stack([X, Y], axis=-1), t).value) ** 2 * hx * hy
    exact = rho.reshape(bins, subdivisions, bins, subdivisions).sum(axis=(1, 3))

    outside_emp = 1.0 - float(np.sum(empirical))
    outside_exact = max(0.0, 1.0 - float(np.sum(exact)))
    return float(np.sum(np.abs(empirical - exact)) + abs(outside_emp - outside_exact))


@dataclass(frozen=True)
class EquivarianceReport:
    l1_distance: float        # transported samples vs rho(t1)
    baseline_l1: float        # initial samples vs rho(t0)
    reference_l1: float       # fresh samples of rho(t1) vs rho(t1)
    n: int
    n_failed: int
    bins: int
    seed: int
    t0: float
    t1: float
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def excess(self) -> float:
        """Transported score above the sampling noise of the same N and binning at t1."""
        return self.l1_distance - self.reference_l1

    def passed(self, margin: Optional[float] = None) -> bool:
        margin = settings.equivariance_margin if margin is None else margin
        return self.n_failed == 0 and self.excess <= margin

    def to_dict(self) -> Dict[str, Any]:
        return {
            "l1_distance": self.l1_distance,
            "baseline_l1": self.baseline_l1,
            "reference_l1": self.reference_l1,
            "excess": self.excess,
            "passed": self.passed(),
            "n": self.n,
            "n_failed": self.n_failed,
            "bins": self.bins,
            "seed": self.seed,
            "t0": self.t0,
            "t1": self.t1,
        }


def equivariance_check(
    state: Superposition,
    n: int,
    t0: float,
    t1: float,
    seed: int,
    bins: int = 40,
) -> EquivarianceReport:
    """
    Sample rho(t0), transport to t1, and score the histogram against rho(t1).

    The score of a fresh sample of rho(t1), drawn from the same generator
    after the initial one, is the sampling-noise level of the same N and
    binning; the transported score is judged by its excess over it. The
    untransported score against rho(t0) is kept as baseline_l1.
    """
    if n < 100:
        raise ValueError("equivariance_check needs n >= 100")
    rng = np.random.default_rng(seed)
    initial = sample_density(state, t0, n, rng)
    baseline = binned_l1(state, initial, t0, bins)
    result = transport_ensemble(state, initial, t0, t1)
    if not result.success:
        raise StepFailure("ensemble transport failed", {"message": result.message, "n": n})
    ok = ~result.singular
    l1 = binned_l1(state, result.final[ok], t1, bins)
    reference = binned_l1(state, sample_density(state, t1, n, rng), t1, bins)
    return EquivarianceReport(
        l1_distance=l1,
        baseline_l1=baseline,
        reference_l1=reference,
        n=n,
        n_failed=result.n_failed,
        bins=bins,
        seed=seed,
        t0=t0,
        t1=t1,
        details={"initial": initial, "final": result.final, "singular": result.singular},
    )
