"""
Affine structure of weak values near a guiding trajectory.

For a Gaussian postselection (q_f, p_f) close to a branch's final state, the
weak value at a fixed WMA is affine in the displacements
(q^J(t_f) - q_f, p^J(t_f) - p_f) per axis:

    w_j = c_j + m1_j dq_j + m2_j dp_j

The complex coefficients are extracted by least squares.
"""

from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from wavepath.errors import IncompatiblePostselection
from wavepath.wavepacket import Superposition
from wavepath.weak.position import WMA, WeakMethod, weak_position_value
from wavepath.weak.postselection import GaussianPacket


@dataclass(frozen=True)
class AffineFit:
    intercept: np.ndarray         # complex (2,)
    m1: np.ndarray                # complex (2,)
    m2: np.ndarray                # complex (2,)
    relative_residual: float      # |residual| / |variation of the values|
    n_samples: int

    def to_dict(self) -> Dict[str, Any]:
        def c(z: np.ndarray) -> list:
            return [[float(v.real), float(v.imag)] for v in z]
        return {
            "intercept": c(self.intercept),
            "m1": c(self.m1),
            "m2": c(self.m2),
            "relative_residual": self.relative_residual,
            "n_samples": self.n_samples,
        }


def fit_affine_structure(dq: np.ndarray, dp: np.ndarray, values: np.ndarray) -> AffineFit:
    """Least-squares fit per axis of values (n, 2) against dq, dp (n, 2)."""
    dq, dp = np.asarray(dq, dtype=float), np.asarray(dp, dtype=float)
    values = np.asarray(values, dtype=complex)
    if len(values) < 4:
        raise ValueError("need at least four samples for the affine fit")

    intercept, m1, m2 = (np.zeros(2, dtype=complex) for _ in range(3))
    res_sq, var_sq = 0.0, 0.0
    for k in range(2):
        design = np.column_stack([np.ones(len(values)), dq[:, k], dp[:, k]]).astype(complex)
        coef, *_ = np.linalg.lstsq(design, values[:, k], rcond=None)
        intercept[k], m1[k], m2[k] = coef
        res_sq += float(np.sum(np.abs(design @ coef - values[:, k]) ** 2))
        var_sq += float(np.sum(np.abs(values[:, k] - np.mean(values[:, k])) ** 2))
    rel = np.sqrt(res_sq / var_sq) if var_sq > 0 else np.sqrt(res_sq)
    return AffineFit(intercept, m1, m2, float(rel), len(values))


def affine_scan(
    pre: Superposition,
    label: str,
    wma: WMA,
    t_f: float,
    delta_f: float,
    offsets: Sequence[Tuple[float, float, float, float]],
    method: WeakMethod = WeakMethod.ANALYTIC,
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Weak values for postselections displaced from branch `label` at t_f.

    Each offset is (dq_x, dq_y, dp_x, dp_y); the postselected packet sits
    at q^J(t_f) - dq with momentum p^J(t_f) - dp.

    Raises:
        IncompatiblePostselection: a displaced postselection is orthogonal to psi
    """
    traj = pre.branch(label).traj
    q_ref, p_ref = traj.position(float(t_f)), traj.momentum(float(t_f))
    offsets = np.asarray(offsets, dtype=float)
    values = []
    for off in offsets:
        post = GaussianPacket(tuple(q_ref - off[:2]), tuple(p_ref - off[2:]), delta_f, t_f)
        rec = weak_position_value(pre, post, wma, method)
        if rec.vanishing:
            raise IncompatiblePostselection("vanishing record inside the affine scan",
                                            {"offset": off.tolist(), "wma_id": wma.id})
        values.append(rec.value)
    return offsets[:, :2], offsets[:, 2:], np.array(values)
