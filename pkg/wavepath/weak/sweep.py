"""
WMA Sweeps and Weak Trajectories
================================

Runs lattices of WMAs against a pre- and postselected pair and groups the
non-vanishing records into weak trajectories by nearest guiding
trajectory.

Records at one interaction time share the closed-form overlaps, so a
sweep evaluates each time as one vectorized batch; batches run on a
thread pool and are merged in schedule order.

Author: wavepath Team
Version: 1.0.0
"""

from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from wavepath.config import settings
from wavepath.errors import UnassignedRecord, WavepathError
from wavepath.logging import get_logger
from wavepath.wavepacket import Superposition
from wavepath.weak.position import (
    WMA,
    WeakMethod,
    WeakValueRecord,
    build_records,
    quadrature_moments,
    window_moments,
)
from wavepath.weak.postselection import PostselectionState, resolve_postselection

logger = get_logger(__name__)


# =============================================================================
# Lattices
# =============================================================================

def wma_lattice(
    x_range: Tuple[float, float],
    y_range: Tuple[float, float],
    nx: int,
    ny: int,
    times: Sequence[float],
    width: float,
) -> List[WMA]:
    """One nx-by-ny lattice of WMAs per interaction time; ids k<time>-i<x>-j<y>."""
    xs = np.linspace(x_range[0], x_range[1], nx)
    ys = np.linspace(y_range[0], y_range[1], ny)
    return [
        WMA(id=f"k{k:03d}-i{i:03d}-j{j:03d}", R0=(float(x), float(y)), width=width, t_k=float(t))
        for k, t in enumerate(times)
        for i, x in enumerate(xs)
        for j, y in enumerate(ys)
    ]


def overlap_flags(pre: Superposition, R0: np.ndarray, t: float) -> np.ndarray:
    """
    True where at least two branches are non-negligible at R0.

    A branch counts when rho_J(R0) / rho_J(q_J) >= overlap_flag_level.
    """
    R0 = np.atleast_2d(np.asarray(R0, dtype=float))
    level = settings.overlap_flag_level
    count = np.zeros(len(R0), dtype=int)
    for b in pre.branches:
        center = b.traj.position(float(t))
        sigma = b.sigma(t)
        z2 = np.sum(((R0 - center) / sigma) ** 2, axis=-1)
        count += (np.exp(-0.5 * z2) >= level).astype(int)
    return count >= 2


# =============================================================================
# Sweeps
# =============================================================================

def _group_by_time(wmas: Sequence[WMA]) -> "OrderedDict[float, List[int]]":
    groups: "OrderedDict[float, List[int]]" = OrderedDict()
    for idx, wma in enumerate(wmas):
        groups.setdefault(wma.t_k, []).append(idx)
    return groups


def _failed_records(wmas: Sequence[WMA], error: WavepathError, method: WeakMethod) -> List[WeakValueRecord]:
    nan2 = np.full(2, np.nan + 0j)
    return [
        WeakValueRecord(
            wma_id=w.id, t_k=w.t_k, R0=(float(w.R0[0]), float(w.R0[1])), width=w.width,
            value=nan2, pointer_value=nan2, normalization=np.nan + 0j,
            window_overlap=np.nan + 0j, numerator=nan2, method=method,
            vanishing=True, error=error.code,
        )
        for w in wmas
    ]


def run_wma_grid(
    pre: Superposition,
    post: Union[PostselectionState, Superposition],
    wmas: Sequence[WMA],
    method: WeakMethod = WeakMethod.ANALYTIC,
    threads: int = 1,
) -> List[WeakValueRecord]:
    """
    One record per WMA, in input order; failures are recorded per record.

    WMAs where two or more branches overlap carry overlap_flag and are
    left out of trajectory assembly.
    """
    if not wmas:
        return []
    times = sorted({w.t_k for w in wmas})
    chi = post if isinstance(post, Superposition) else resolve_postselection(pre, post, times)
    branch_label = getattr(post, "label", None)
    groups = _group_by_time(wmas)

    def run_group(item: Tuple[float, List[int]]) -> List[WeakValueRecord]:
        t, idx = item
        batch = [wmas[i] for i in idx]
        R0 = np.array([w.R0 for w in batch])
        try:
            flags = overlap_flags(pre, R0, t)
            if method is WeakMethod.ANALYTIC:
                widths = {w.width for w in batch}
                records: List[WeakValueRecord] = []
                for width in sorted(widths):
                    sub = [w for w in batch if w.width == width]
                    sub_idx = [k for k, w in enumerate(batch) if w.width == width]
                    moments = window_moments(pre, chi, np.array([w.R0 for w in sub]), width, t)
                    records.extend(build_records(pre, chi, sub, moments, method, branch_label,
                                                 flags[sub_idx]))
                by_id = {r.wma_id: r for r in records}
                return [by_id[w.id] for w in batch]
            out = []
            for k, w in enumerate(batch):
                moments = quadrature_moments(pre, chi, w)
                out.extend(build_records(pre, chi, [w], moments, method, branch_label, flags[k:k + 1]))
            return out
        except WavepathError as exc:
            logger.warning("weak_batch_failed", t_k=t, n=len(batch), error=exc.code)
            return _failed_records(batch, exc, method)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        batches = list(executor.map(run_group, groups.items()))

    by_id: Dict[str, WeakValueRecord] = {}
    for batch in batches:
        for rec in batch:
            by_id[rec.wma_id] = rec
    records = [by_id[w.id] for w in wmas]
    logger.info(
        "wma_sweep_completed",
        n_records=len(records),
        n_nonvanishing=sum(1 for r in records if not r.vanishing),
        n_flagged=sum(1 for r in records if r.overlap_flag),
    )
    return records


# =============================================================================
# Weak trajectories
# =============================================================================

@dataclass(frozen=True)
class WeakTrajectory:
    """Time-ordered non-vanishing records attributed to one guiding trajectory."""
    label: str
    records: Tuple[WeakValueRecord, ...]

    @property
    def t(self) -> np.ndarray:
        return np.array([r.t_k for r in self.records])

    @property
    def values(self) -> np.ndarray:
        """Re of the weak values, (n, 2)."""
        return np.array([np.real(r.value) for r in self.records]).reshape(-1, 2)

    def points(self) -> Tuple[np.ndarray, np.ndarray]:
        """
        One point per interaction time: Re(sum numerator / sum window overlap).

        Summing a dense lattice of windows acts as one wide window, which
        removes the pull of each window toward its own R0.
        """
        times = sorted({r.t_k for r in self.records})
        pts = []
        for t in times:
            recs = [r for r in self.records if r.t_k == t]
            num = np.sum([r.numerator for r in recs], axis=0)
            den = np.sum([r.window_overlap for r in recs])
            pts.append(np.real(num / den))
        return np.array(times), np.array(pts).reshape(-1, 2)

    def to_dict(self) -> Dict[str, Any]:
        t, pts = self.points()
        return {"label": self.label, "n_records": len(self.records),
                "t": t.tolist(), "points": pts.tolist()}


@dataclass(frozen=True)
class Assembly:
    trajectories: List[WeakTrajectory]
    unassigned: List[WeakValueRecord] = field(default_factory=list)
    excluded_overlap: int = 0


def tube_reach(n_branches: int, threshold: float) -> float:
    """
    Envelope distance beyond which no branch can lift a window overlap above threshold.

    By Cauchy-Schwarz |<chi|f|psi_J>| <= exp(-z_J^2 / 2) for a window f <= 1.
    """
    return float(np.sqrt(2.0 * np.log(max(n_branches, 1) / threshold)))


def tube_distance(pre: Superposition, R0: Sequence[float], t: float, width: float) -> np.ndarray:
    """
    z_J = |R0 - q^J(t)| per branch, in units of sqrt(w^2 + 2 sigma_J^2) per axis.

    A window at envelope distance z sees at most exp(-z^2 / 2) of branch J.
    """
    R0 = np.asarray(R0, dtype=float)
    out = []
    for b in pre.branches:
        scale2 = width ** 2 + 2.0 * b.sigma(t) ** 2
        out.append(np.sqrt(np.sum((R0 - b.traj.position(float(t))) ** 2 / scale2)))
    return np.array(out)


def partition_records(
    records: Sequence[WeakValueRecord],
    pre: Superposition,
    threshold: Optional[float] = None,
    tube: Optional[float] = None,
) -> Assembly:
    """
    Cluster non-vanishing, unflagged records by the guiding trajectory whose tube holds R0.

    A record joins branch J when z_J (see tube_distance) is the smallest over
    branches and at most tube (default tube_reach). Values are not used for
    the assignment: a window comparable to the packet pulls its value toward R0.
    """
    threshold = settings.compatibility_threshold if threshold is None else threshold
    tube = tube_reach(len(pre.branches), threshold) if tube is None else tube
    kept = [r for r in records
            if not r.vanishing and abs(r.window_overlap) >= threshold and r.error is None]
    excluded = sum(1 for r in kept if r.overlap_flag)
    kept = [r for r in kept if not r.overlap_flag]

    clusters: "OrderedDict[str, List[WeakValueRecord]]" = OrderedDict(
        (b.label, []) for b in pre.branches)
    unassigned = []
    for rec in kept:
        z = tube_distance(pre, rec.R0, rec.t_k, rec.width)
        j = int(np.argmin(z))
        if z[j] <= tube:
            clusters[pre.branches[j].label].append(rec)
        else:
            unassigned.append(rec)

    trajectories = [
        WeakTrajectory(label, tuple(sorted(recs, key=lambda r: (r.t_k, r.wma_id))))
        for label, recs in clusters.items() if recs
    ]
    return Assembly(trajectories, unassigned, excluded)


def assemble_weak_trajectories(
    records: Sequence[WeakValueRecord],
    pre: Superposition,
    threshold: Optional[float] = None,
    tube: Optional[float] = None,
) -> List[WeakTrajectory]:
    """
    Weak trajectories from one sweep.

    Raises:
        UnassignedRecord: some non-vanishing record lies in no branch tube
    """
    assembly = partition_records(records, pre, threshold, tube)
    if assembly.unassigned:
        raise UnassignedRecord(
            f"{len(assembly.unassigned)} records lie outside every guiding-trajectory tube",
            records=[r.wma_id for r in assembly.unassigned],
        )
    return assembly.trajectories
