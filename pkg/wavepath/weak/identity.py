"""
Expectation Identity
====================

<psi|A|psi> = int rho(r_f) Re<A>_W(r_f) dr_f over position postselections.

The left side comes from closed-form Gaussian moments, the right side from
tensor-grid quadrature of rho times the weak value, so the two routes
share no code beyond the branch evaluation.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Union

import numpy as np

from wavepath.wavepacket import Superposition, bounding_grid, branch_expectations, evaluate
from wavepath.weak.momentum import weak_momentum_unchecked


class Observable(str, Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class IdentityResult:
    observable: Observable
    t: float
    direct: np.ndarray
    weak: np.ndarray

    @property
    def residual(self) -> float:
        return float(np.max(np.abs(self.direct - self.weak)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "observable": self.observable.value,
            "t": self.t,
            "direct": self.direct.tolist(),
            "weak": self.weak.tolist(),
            "residual": self.residual,
        }


def expectation_identity_check(
    state: Superposition,
    t: float,
    observable: Union[Observable, str],
) -> IdentityResult:
    """Both sides of the identity for the normalized state at time t."""
    observable = Observable(observable)
    exp = branch_expectations(state, t)
    direct = exp.position if observable is Observable.POSITION else exp.momentum

    grid = bounding_grid(state, t)
    pts = grid.points()
    rho = np.abs(evaluate(state, pts, t).value) ** 2
    if observable is Observable.POSITION:
        # a position postselection at r_f has weak position r_f
        weak_vals = pts
    else:
        weak_vals = np.real(weak_momentum_unchecked(state, pts, t))
    weighted = np.where(rho[..., None] > 0, rho[..., None] * np.nan_to_num(weak_vals), 0.0)
    total = grid.integrate(rho)
    weak = grid.integrate(weighted) / total
    return IdentityResult(observable, float(t), np.asarray(direct, float), np.asarray(weak, float))
