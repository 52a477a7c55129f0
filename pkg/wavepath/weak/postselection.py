"""
Postselected States
===================

Postselected states are Gaussian packets fixed at a final time t_f and
carried back to the interaction times along final-condition guiding
trajectories. Every kind resolves to a Superposition of backward
branches, so the same closed-form machinery evaluates pre- and
postselected states.

    GaussianPacket(r_f, p_f, delta_f, t_f)      alpha(t_f) = sqrt(m) delta_f
    BranchMatched(J)                            chi = psi^J
    MultiBranch({c_K, p_f^K}, r_f, t_f)         chi = sum_K c_K chi_K
    PositionPoint(r_f, t)                       momentum weak values only

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from wavepath.ermakov import AXES, backward_trajectory
from wavepath.wavepacket import GaussianBranch, Superposition

# Extra backward reach so a postselection at t_f = t_k still has a span
_SPAN_PAD = 1e-6


class PostselectionKind(str, Enum):
    GAUSSIAN_PACKET = "gaussian_packet"
    BRANCH_MATCHED = "branch_matched"
    MULTI_BRANCH = "multi_branch"
    POSITION_POINT = "position_point"


@dataclass(frozen=True)
class GaussianPacket:
    r_f: Tuple[float, float]
    p_f: Tuple[float, float]
    delta_f: float
    t_f: float
    kind: PostselectionKind = PostselectionKind.GAUSSIAN_PACKET

    def __post_init__(self) -> None:
        if not self.delta_f > 0:
            raise ValueError(f"delta_f must be > 0, got {self.delta_f}")


@dataclass(frozen=True)
class BranchMatched:
    label: str
    kind: PostselectionKind = PostselectionKind.BRANCH_MATCHED


@dataclass(frozen=True)
class MultiBranch:
    """
    sum_K c_K chi_K with chi_K a packet at (r_f, p_f^K, t_f).

    Without delta_f each chi_K takes the Ermakov amplitude and slope of the
    preselected state's first branch at t_f.
    """
    coefficients: Tuple[complex, ...]
    momenta: Tuple[Tuple[float, float], ...]
    r_f: Tuple[float, float]
    t_f: float
    delta_f: Optional[float] = None
    labels: Optional[Tuple[str, ...]] = None
    kind: PostselectionKind = PostselectionKind.MULTI_BRANCH

    def __post_init__(self) -> None:
        if len(self.coefficients) != len(self.momenta):
            raise ValueError("coefficients and momenta must have the same length")
        if not any(abs(c) > 0 for c in self.coefficients):
            raise ValueError("MultiBranch coefficients must not all be zero")
        if self.delta_f is not None and not self.delta_f > 0:
            raise ValueError(f"delta_f must be > 0, got {self.delta_f}")


@dataclass(frozen=True)
class PositionPoint:
    r_f: Tuple[float, float]
    t: float
    kind: PostselectionKind = PostselectionKind.POSITION_POINT


PostselectionState = Union[GaussianPacket, BranchMatched, MultiBranch, PositionPoint]


def postselection_to_dict(post: PostselectionState) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": post.kind.value}
    for name, value in post.__dict__.items():
        if name == "kind":
            continue
        if name == "coefficients":
            value = [[complex(c).real, complex(c).imag] for c in value]
        out[name] = value
    return out


def _packet_branch(
    pre: Superposition,
    label: str,
    coefficient: complex,
    r_f: Sequence[float],
    p_f: Sequence[float],
    t_f: float,
    t_min: float,
    alpha_f: Sequence[float],
    alpha_dot_f: Sequence[float],
) -> GaussianBranch:
    t_start = min(t_min, t_f - _SPAN_PAD)
    traj = backward_trajectory(pre.params, r_f, p_f, t_f, alpha_f, [t_start, t_f],
                               alpha_dot_f=alpha_dot_f, label=label)
    return GaussianBranch(label=label, weight=complex(coefficient), traj=traj)


def resolve_postselection(
    pre: Superposition,
    post: PostselectionState,
    times: Sequence[float],
) -> Superposition:
    """
    Postselected state as a Superposition defined at every requested time.

    Raises:
        ValueError: a PositionPoint (no wavefunction) or times beyond t_f
        KeyError: unknown branch label for BranchMatched
    """
    times = np.atleast_1d(np.asarray(times, dtype=float))
    t_min = float(np.min(times))

    if isinstance(post, BranchMatched):
        return Superposition((GaussianBranch(post.label, 1.0 + 0j, pre.branch(post.label).traj),),
                             pre.params)

    if isinstance(post, GaussianPacket):
        if np.max(times) > post.t_f:
            raise ValueError("interaction times must not exceed t_f")
        alpha_f = [np.sqrt(pre.params.mass) * post.delta_f] * 2
        branch = _packet_branch(pre, "chi", 1.0, post.r_f, post.p_f, post.t_f, t_min,
                                alpha_f, [0.0, 0.0])
        return Superposition((branch,), pre.params)

    if isinstance(post, MultiBranch):
        if np.max(times) > post.t_f:
            raise ValueError("interaction times must not exceed t_f")
        if post.delta_f is None:
            ref = pre.branches[0].traj
            states = [ref.axis(a).at(float(post.t_f)) for a in AXES]
            alpha_f = [s.alpha for s in states]
            alpha_dot_f = [s.alpha_dot for s in states]
        else:
            alpha_f = [np.sqrt(pre.params.mass) * post.delta_f] * 2
            alpha_dot_f = [0.0, 0.0]
        labels = post.labels or tuple(f"chi{k + 1}" for k in range(len(post.momenta)))
        branches = tuple(
            _packet_branch(pre, lab, c, post.r_f, p, post.t_f, t_min, alpha_f, alpha_dot_f)
            for lab, c, p in zip(labels, post.coefficients, post.momenta)
        )
        return Superposition(branches, pre.params)

    raise ValueError(f"postselection kind {post.kind.value} has no wavefunction")
