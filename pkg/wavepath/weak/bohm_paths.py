"""
Bohmian Paths under Postselection
=================================

The Bohmian trajectory of the preselected state that ends at the
postselected point q^J(t_f), integrated backward from t_f, set against
the guiding-trajectory tubes and the WMAs of a sweep.

A weak trajectory is built from the WMAs whose state was changed given
the postselection. The Bohmian path ending at the same point need not
visit those WMAs, and it may cross WMAs that stay unshaded.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from wavepath.config import settings
from wavepath.flow import BohmianTrajectory, integrate_bohmian
from wavepath.logging import get_logger
from wavepath.wavepacket import Superposition
from wavepath.weak.position import WeakValueRecord
from wavepath.weak.sweep import tube_distance, tube_reach

logger = get_logger(__name__)


@dataclass(frozen=True)
class PostselectedPath:
    """Backward Bohmian path ending at q^J(t_f), with its tube membership per sample."""
    label: str
    t_f: float
    trajectory: BohmianTrajectory
    nearest: List[str]            # branch whose tube is closest, per sample
    inside: np.ndarray            # bool per sample: within the tube of `label`
    tube: float

    def position_at(self, t: float) -> Optional[np.ndarray]:
        """Interpolated position, None outside the integrated span."""
        tr = self.trajectory
        if not tr.t[0] - 1e-12 <= t <= tr.t[-1] + 1e-12:
            return None
        return np.array([np.interp(t, tr.t, tr.position[:, k]) for k in range(2)])

    def tube_fraction(self) -> float:
        return float(np.mean(self.inside)) if len(self.inside) else 0.0

    def visited(self) -> List[str]:
        """Branch tubes in the order the path meets them going forward in time."""
        out: List[str] = []
        for label in self.nearest:
            if not out or out[-1] != label:
                out.append(label)
        return out

    def to_rows(self) -> List[Dict[str, Any]]:
        tr = self.trajectory
        return [
            {"label": self.label, "t": float(t), "x": float(p[0]), "y": float(p[1]),
             "nearest_branch": near, "in_tube": int(inside)}
            for t, p, near, inside in zip(tr.t, tr.position, self.nearest, self.inside)
        ]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "t_f": self.t_f,
            "tube": self.tube,
            "tube_fraction": self.tube_fraction(),
            "visited": self.visited(),
            "trajectory": self.trajectory.to_dict(),
        }


def postselected_bohmian(
    pre: Superposition,
    label: str,
    t_f: float,
    t_stop: Optional[float] = None,
    tube: Optional[float] = None,
) -> PostselectedPath:
    """
    Integrate the streamline through q^label(t_f) backward to t_stop (default t0).

    Tube membership uses tube_distance at zero window width.

    Raises:
        KeyError: unknown branch label
        SingularRegion: q^label(t_f) lies below the density floor
    """
    branch = pre.branch(label)
    t_stop = pre.span[0] if t_stop is None else t_stop
    if not t_stop < t_f:
        raise ValueError(f"t_stop={t_stop} must precede t_f={t_f}")
    tube = tube_reach(len(pre.branches), settings.compatibility_threshold) if tube is None else tube

    x_f = branch.traj.position(float(t_f))
    tr = integrate_bohmian(pre, x_f, t_f, t_stop, state_id=f"post-{label}")

    j = pre.labels.index(label)
    nearest, inside = [], []
    for t, p in zip(tr.t, tr.position):
        z = tube_distance(pre, p, t, 0.0)
        nearest.append(pre.branches[int(np.argmin(z))].label)
        inside.append(bool(z[j] <= tube))

    path = PostselectedPath(label, float(t_f), tr, nearest, np.array(inside, dtype=bool), tube)
    logger.debug("postselected_bohmian", label=label, t_f=t_f, visited=path.visited(),
                 tube_fraction=path.tube_fraction(), termination=tr.termination.value)
    return path


@dataclass(frozen=True)
class PathWMAComparison:
    """WMAs on a postselected Bohmian path against the WMAs that registered a weak value."""
    label: str
    passed: List[str]             # WMAs whose window holds the path at t_k
    passed_shaded: List[str]      # of those, the ones with a non-vanishing weak value
    shaded_missed: List[str]      # non-vanishing WMAs assigned to `label` that the path misses

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "n_passed": len(self.passed),
            "n_passed_shaded": len(self.passed_shaded),
            "n_shaded_missed": len(self.shaded_missed),
            "passed": list(self.passed),
            "passed_shaded": list(self.passed_shaded),
            "shaded_missed": list(self.shaded_missed),
        }


def compare_path_with_wmas(
    pre: Superposition,
    path: PostselectedPath,
    records: Sequence[WeakValueRecord],
) -> PathWMAComparison:
    """
    Split a sweep's records by whether the path passes through their window.

    The path passes a WMA when |x(t_k) - R0| <= w. A shaded WMA belongs to
    the path's branch when that branch's tube is the nearest one holding R0.
    Records with t_k outside the integrated span are ignored.
    """
    passed, passed_shaded, missed = [], [], []
    for rec in records:
        x = path.position_at(rec.t_k)
        if x is None or rec.error is not None:
            continue
        on_path = float(np.linalg.norm(x - np.asarray(rec.R0))) <= rec.width
        if on_path:
            passed.append(rec.wma_id)
            if not rec.vanishing:
                passed_shaded.append(rec.wma_id)
        elif not rec.vanishing:
            z = tube_distance(pre, rec.R0, rec.t_k, rec.width)
            j = int(np.argmin(z))
            if pre.branches[j].label == path.label and z[j] <= path.tube:
                missed.append(rec.wma_id)
    return PathWMAComparison(path.label, passed, passed_shaded, missed)
