"""
Recurrence Spectrum
===================

Probability mass in a disc region as a function of time,

    P(t) = int_disc |psi(r, t)|^2 dr,

its peaks, and the classical times at which guiding trajectories pass
through the region. The disc integral uses Gauss-Legendre nodes in the
radius and a uniform rule in the angle.

Author: wavepath Team
Version: 1.0.0
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import brentq
from scipy.signal import find_peaks

from wavepath.config import settings
from wavepath.ermakov import GuidingTrajectory
from wavepath.logging import get_logger
from wavepath.wavepacket import Superposition, evaluate

logger = get_logger(__name__)


@dataclass(frozen=True)
class Region:
    """Disc of given center and radius."""
    center: Tuple[float, float]
    radius: float

    def __post_init__(self) -> None:
        if not self.radius > 0:
            raise ValueError(f"region radius must be > 0, got {self.radius}")

    def to_dict(self) -> Dict[str, Any]:
        return {"center": list(self.center), "radius": self.radius}


@dataclass(frozen=True)
class Peak:
    t: float
    height: float
    prominence: float


@dataclass(frozen=True)
class RecurrenceSpectrum:
    region: Region
    t: np.ndarray
    P: np.ndarray
    peaks: List[Peak]
    prominence: float

    @property
    def peak_times(self) -> np.ndarray:
        return np.array([p.t for p in self.peaks])

    def to_dict(self) -> Dict[str, Any]:
        return {
            "region": self.region.to_dict(),
            "n_samples": int(len(self.t)),
            "prominence": self.prominence,
            "peaks": [{"t": p.t, "height": p.height, "prominence": p.prominence}
                      for p in self.peaks],
        }


def _disc_rule(region: Region, n_radial: int, n_angular: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes (n, 2) and weights (n,) for integrals over the disc."""
    x, w = leggauss(n_radial)
    r = 0.5 * region.radius * (x + 1.0)
    wr = 0.5 * region.radius * w * r
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    R, T = np.meshgrid(r, theta, indexing="ij")
    nodes = np.stack([region.center[0] + R * np.cos(T), region.center[1] + R * np.sin(T)], axis=-1)
    weights = np.repeat(wr, n_angular) * (2.0 * np.pi / n_angular)
    return nodes.reshape(-1, 2), weights


def region_probability(
    state: Superposition,
    region: Region,
    t: float,
    n_radial: int = 32,
    n_angular: int = 64,
) -> float:
    nodes, weights = _disc_rule(region, n_radial, n_angular)
    rho = np.abs(evaluate(state, nodes, t).value) ** 2
    return float(np.dot(weights, rho))


def recurrence_spectrum(
    state: Superposition,
    region: Region,
    t_grid: Sequence[float],
    prominence: Optional[float] = None,
    threads: int = 1,
) -> RecurrenceSpectrum:
    """
    P(t) on t_grid and its peaks.

    prominence is relative to max P (default recurrence_prominence).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    prominence = settings.recurrence_prominence if prominence is None else prominence
    nodes, weights = _disc_rule(region, 32, 64)

    def sample(t: float) -> float:
        return float(np.dot(weights, np.abs(evaluate(state, nodes, t).value) ** 2))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        P = np.array(list(executor.map(sample, t_grid)))

    threshold = prominence * float(np.max(P)) if len(P) else 0.0
    idx, props = find_peaks(P, prominence=threshold)
    peaks = [Peak(float(t_grid[i]), float(P[i]), float(pr))
             for i, pr in zip(idx, props["prominences"])]
    logger.debug("recurrence_spectrum", n_samples=len(t_grid), n_peaks=len(peaks))
    return RecurrenceSpectrum(region, t_grid, P, peaks, prominence)


# =============================================================================
# Classical crossings
# =============================================================================

@dataclass(frozen=True)
class Crossing:
    t: float
    branch: str
    distance: float


def classical_crossings(
    trajs: Sequence[GuidingTrajectory],
    center: Sequence[float],
    t_span: Tuple[float, float],
    radius: float,
    dt: float = 0.01,
) -> List[Crossing]:
    """
    Interior minima of |q^J(t) - center| below radius, time-ordered.

    Minima are the roots of (q - c) . p going from negative to positive,
    bracketed on a scan grid and refined with brentq.
    """
    center = np.asarray(center, dtype=float)
    out: List[Crossing] = []
    for traj in trajs:
        lo = max(t_span[0], traj.span[0])
        hi = min(t_span[1], traj.span[1])
        if hi <= lo:
            continue
        grid = np.linspace(lo, hi, max(3, int(np.ceil((hi - lo) / dt)) + 1))

        def radial(t: float) -> float:
            return float(np.dot(traj.position(t) - center, traj.momentum(t)))

        g = np.array([radial(t) for t in grid])
        for i in range(len(grid) - 1):
            if g[i] < 0.0 <= g[i + 1]:
                t_min = grid[i + 1] if g[i + 1] == 0.0 else brentq(radial, grid[i], grid[i + 1], xtol=1e-13)
                if t_min >= hi:
                    continue
                dist = float(np.linalg.norm(traj.position(t_min) - center))
                if dist < radius:
                    out.append(Crossing(float(t_min), traj.label, dist))
    return sorted(out, key=lambda c: (c.t, c.branch))


@dataclass(frozen=True)
class Bijection:
    matched: List[Tuple[float, List[str]]] = field(default_factory=list)
    unmatched_peaks: List[float] = field(default_factory=list)
    unmatched_crossings: List[Crossing] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.unmatched_peaks and not self.unmatched_crossings

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "matched": [{"t_peak": t, "branches": b} for t, b in self.matched],
            "unmatched_peaks": self.unmatched_peaks,
            "unmatched_crossings": [{"t": c.t, "branch": c.branch} for c in self.unmatched_crossings],
        }


def crossing_peak_bijection(
    spectrum: RecurrenceSpectrum,
    crossings: Sequence[Crossing],
    delta_t: float,
) -> Bijection:
    """
    Pair peaks with crossings closer than delta_t.

    Crossings of several branches at one instant belong to one peak.
    """
    matched = []
    unmatched_peaks = []
    used = set()
    for peak in spectrum.peaks:
        near = [k for k, c in enumerate(crossings) if abs(c.t - peak.t) <= delta_t]
        if near:
            used.update(near)
            matched.append((peak.t, [crossings[k].branch for k in near]))
        else:
            unmatched_peaks.append(peak.t)
    unmatched = [c for k, c in enumerate(crossings) if k not in used]
    return Bijection(matched, unmatched_peaks, unmatched)
