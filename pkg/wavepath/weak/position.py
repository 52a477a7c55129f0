"""
Position Weak Values
====================

Weak value of r registered by a contact-window WMA at (R0, t_k):

    value         = <chi| r f |psi> / <chi| f |psi>
    pointer_value = <chi| r f |psi> / <chi|psi>

with f(r) = exp(-|r - R0|^2 / w^2). Every factor is log-quadratic per
axis, so the analytic route sums closed-form moments over (chi branch K,
psi branch J) pairs and vectorizes over many R0 at one t_k. The
quadrature route integrates the same integrands adaptively with
scipy.integrate.cubature.

Overlaps are reported for unit-normalized pre- and postselected states.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.integrate import cubature

from wavepath.config import settings
from wavepath.ermakov import AXES
from wavepath.errors import IncompatiblePostselection, NumericsError
from wavepath.logging import get_logger
from wavepath.weak.postselection import PostselectionState, resolve_postselection
from wavepath.wavepacket import (
    Superposition,
    bounding_grid,
    branch_factors,
    evaluate,
    gaussian_window,
    norm,
    peak_density_bound,
)

logger = get_logger(__name__)

# Window support for quadrature, in widths
_WINDOW_REACH = 8.0


class WeakMethod(str, Enum):
    ANALYTIC = "analytic"
    QUADRATURE = "quadrature"


@dataclass(frozen=True)
class WMA:
    """Weak measuring apparatus: Gaussian contact window at R0 acting at t_k."""
    id: str
    R0: Tuple[float, float]
    width: float
    t_k: float

    def __post_init__(self) -> None:
        if not self.width > 0:
            raise ValueError(f"window width must be > 0, got {self.width}")


@dataclass(frozen=True)
class WeakValueRecord:
    """One WMA's weak value with its normalizations and flags."""
    wma_id: str
    t_k: float
    R0: Tuple[float, float]
    width: float
    value: np.ndarray                 # complex (2,)
    pointer_value: np.ndarray         # complex (2,)
    normalization: complex            # <chi|psi>
    window_overlap: complex           # <chi|f|psi>
    numerator: np.ndarray             # complex (2,) <chi|r f|psi>
    method: WeakMethod
    vanishing: bool
    branch: Optional[str] = None
    overlap_flag: bool = False
    error: Optional[str] = None

    def to_row(self) -> Dict[str, Any]:
        return {
            "wma_id": self.wma_id,
            "t_k": self.t_k,
            "R0x": self.R0[0],
            "R0y": self.R0[1],
            "Re_wx": float(np.real(self.value[0])),
            "Im_wx": float(np.imag(self.value[0])),
            "Re_wy": float(np.real(self.value[1])),
            "Im_wy": float(np.imag(self.value[1])),
            "norm_overlap": abs(self.normalization),
            "window_overlap": abs(self.window_overlap),
            "branch": self.branch or "",
            "vanishing_flag": int(self.vanishing),
            "overlap_flag": int(self.overlap_flag),
            "error": self.error or "",
        }


# =============================================================================
# Closed form
# =============================================================================

@dataclass(frozen=True)
class WindowMoments:
    """<chi|psi>, <chi|f|psi> and <chi|r f|psi> for many R0 at one time."""
    overlap: complex
    window: np.ndarray        # (n,)
    numerator: np.ndarray     # (n, 2)


def window_moments(
    pre: Superposition,
    chi: Superposition,
    R0: np.ndarray,
    width: float,
    t: float,
) -> WindowMoments:
    """Closed-form moments for windows at every row of R0 (n, 2), unnormalized."""
    R0 = np.atleast_2d(np.asarray(R0, dtype=float))
    windows = {a: gaussian_window(R0[:, k], width) for k, a in enumerate(AXES)}
    overlap = 0j
    window = np.zeros(len(R0), dtype=complex)
    numerator = np.zeros((len(R0), 2), dtype=complex)

    for ck, fk in branch_factors(chi, t):
        for aj, fj in branch_factors(pre, t):
            w = np.conj(ck) * aj
            prods = {a: fk[a].conj() * fj[a] for a in AXES}
            overlap += w * prods[AXES[0]].integral() * prods[AXES[1]].integral()
            windowed = {a: prods[a] * windows[a] for a in AXES}
            i0 = {a: windowed[a].integral() for a in AXES}
            i1 = {a: windowed[a].first_moment() for a in AXES}
            window += w * i0[AXES[0]] * i0[AXES[1]]
            numerator[:, 0] += w * i1[AXES[0]] * i0[AXES[1]]
            numerator[:, 1] += w * i0[AXES[0]] * i1[AXES[1]]
    return WindowMoments(complex(overlap), window, numerator)


def _normalization_scale(pre: Superposition, chi: Superposition, t: float) -> float:
    return float(np.sqrt(norm(pre, t) * norm(chi, t)))


def nearest_branch(pre: Superposition, points: np.ndarray, t: float) -> List[str]:
    """Label of the guiding trajectory closest to each point at time t."""
    points = np.atleast_2d(points)
    centers = np.array([b.traj.position(float(t)) for b in pre.branches])
    dist = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=-1)
    return [pre.branches[i].label for i in np.argmin(dist, axis=1)]


def build_records(
    pre: Superposition,
    chi: Superposition,
    wmas: Sequence["WMA"],
    moments: WindowMoments,
    method: WeakMethod,
    branch_label: Optional[str] = None,
    flags: Optional[np.ndarray] = None,
) -> List[WeakValueRecord]:
    """Apply the compatibility rules and wrap moments of same-time WMAs into records."""
    threshold = settings.compatibility_threshold
    t = wmas[0].t_k
    scale = _normalization_scale(pre, chi, t)
    overlap = moments.overlap / scale
    window = moments.window / scale
    numerator = moments.numerator / scale
    labels = [branch_label] * len(wmas) if branch_label else nearest_branch(
        pre, np.array([w.R0 for w in wmas]), t)
    flags = np.zeros(len(wmas), bool) if flags is None else flags

    records = []
    for i, wma in enumerate(wmas):
        error = None
        vanishing = abs(window[i]) < threshold
        if abs(overlap) < threshold and not vanishing:
            error = IncompatiblePostselection.code
            vanishing = True
            logger.debug("weak_record_incompatible", wma_id=wma.id, t_k=t,
                         overlap=abs(overlap), window_overlap=abs(window[i]))
        elif vanishing:
            logger.debug("weak_record_vanishing", wma_id=wma.id, t_k=t,
                         window_overlap=abs(window[i]))

        with np.errstate(divide="ignore", invalid="ignore"):
            value = numerator[i] / window[i] if not vanishing else np.full(2, np.nan + 0j)
            pointer = numerator[i] / overlap if error is None and abs(overlap) > 0 else np.full(2, np.nan + 0j)
        records.append(WeakValueRecord(
            wma_id=wma.id,
            t_k=float(t),
            R0=(float(wma.R0[0]), float(wma.R0[1])),
            width=float(wma.width),
            value=np.asarray(value, dtype=complex),
            pointer_value=np.asarray(pointer, dtype=complex),
            normalization=complex(overlap),
            window_overlap=complex(window[i]),
            numerator=np.asarray(numerator[i], dtype=complex),
            method=method,
            vanishing=bool(vanishing),
            branch=None if vanishing else labels[i],
            overlap_flag=bool(flags[i]),
            error=error,
        ))
    return records


# =============================================================================
# Quadrature
# =============================================================================

def quadrature_moments(
    pre: Superposition,
    chi: Superposition,
    wma: WMA,
    rtol: float = 1e-10,
) -> WindowMoments:
    """Window moments by adaptive cubature over R0 +- 8w; <chi|psi> on a tensor grid."""
    t = wma.t_k
    R0 = np.asarray(wma.R0, dtype=float)
    w = wma.width

    def integrand(x: np.ndarray) -> np.ndarray:
        f = np.exp(-np.sum((x - R0) ** 2, axis=-1) / w ** 2)
        base = np.conj(evaluate(chi, x, t).value) * evaluate(pre, x, t).value * f
        parts = np.stack([base, x[:, 0] * base, x[:, 1] * base], axis=-1)
        return np.concatenate([parts.real, parts.imag], axis=-1)

    # absolute tolerance tied to the integrand scale
    atol = 1e-14 * np.sqrt(max(peak_density_bound(pre, t), 1e-300) * max(peak_density_bound(chi, t), 1e-300))
    res = cubature(integrand, R0 - _WINDOW_REACH * w, R0 + _WINDOW_REACH * w,
                   rtol=rtol, atol=atol)
    if res.status != "converged":
        raise NumericsError("window cubature did not converge",
                            {"wma_id": wma.id, "t_k": t, "error": np.asarray(res.error).tolist()})
    est = res.estimate[:3] + 1j * res.estimate[3:]

    grid = bounding_grid(Superposition(pre.branches + chi.branches, pre.params), t)
    pts = grid.points()
    overlap = grid.integrate(np.conj(evaluate(chi, pts, t).value) * evaluate(pre, pts, t).value)
    return WindowMoments(complex(overlap), np.array([est[0]]), np.array([est[1:]]))


# =============================================================================
# Public API
# =============================================================================

def weak_position_value(
    pre: Superposition,
    post: Union[PostselectionState, Superposition],
    wma: WMA,
    method: WeakMethod = WeakMethod.ANALYTIC,
    branch_label: Optional[str] = None,
) -> WeakValueRecord:
    """
    Weak value of r for one WMA between pre and a postselected state.

    post may be a postselection description or an already resolved
    Superposition defined at t_k.

    Raises:
        IncompatiblePostselection: <chi|psi> below the compatibility threshold
            while the window overlap is not
    """
    chi = post if isinstance(post, Superposition) else resolve_postselection(pre, post, [wma.t_k])
    if branch_label is None and getattr(post, "label", None):
        branch_label = post.label
    if method is WeakMethod.ANALYTIC:
        moments = window_moments(pre, chi, np.array([wma.R0]), wma.width, wma.t_k)
    else:
        moments = quadrature_moments(pre, chi, wma)
    record = build_records(pre, chi, [wma], moments, method, branch_label)[0]
    if record.error == IncompatiblePostselection.code:
        raise IncompatiblePostselection(
            "postselected state is orthogonal to the preselected state",
            {"wma_id": wma.id, "t_k": wma.t_k, "overlap": abs(record.normalization),
             "window_overlap": abs(record.window_overlap),
             "threshold": settings.compatibility_threshold},
        )
    return record


@dataclass(frozen=True)
class MethodComparison:
    analytic: WeakValueRecord
    quadrature: WeakValueRecord
    relative_difference: float
    details: Dict[str, Any] = field(default_factory=dict)


def compare_methods(pre: Superposition, chi: Superposition, wma: WMA) -> MethodComparison:
    """Both routes for one WMA and the relative difference of their values."""
    a = weak_position_value(pre, chi, wma, WeakMethod.ANALYTIC)
    q = weak_position_value(pre, chi, wma, WeakMethod.QUADRATURE)
    if a.vanishing or q.vanishing:
        diff = 0.0 if a.vanishing == q.vanishing else float("inf")
    else:
        diff = float(np.max(np.abs(a.value - q.value)) / max(np.max(np.abs(a.value)), 1e-300))
    return MethodComparison(a, q, diff)
