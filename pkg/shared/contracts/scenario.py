"""
Scenario Contract
=================

Schema of a wavepath run configuration. Every block has explicit defaults
so the resolved config echoed into the run manifest shows every value
that affected the run.

Unknown keys are rejected at every level.

Author: wavepath Team
Version: 1.0.0
"""

import math
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveFloat, model_validator

from wavepath.config import settings
from wavepath.ermakov import AxisDrive, OscillatorParams, default_alpha0


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


Vector = Tuple[float, float]


# =============================================================================
# Enums
# =============================================================================


class PostselectionKindSpec(str, Enum):
    """Postselection kinds accepted in configuration files."""
    GAUSSIAN_PACKET = "gaussian_packet"
    BRANCH_MATCHED = "branch_matched"
    MULTI_BRANCH = "multi_branch"


class WeakMethodSpec(str, Enum):
    ANALYTIC = "analytic"
    QUADRATURE = "quadrature"


# =============================================================================
# Physical system
# =============================================================================


class DriveSpec(_Strict):
    """V(t) = v - kappa cos(2 omega t) on one axis."""
    v: float = Field(..., description="Static frequency squared")
    kappa: float = Field(default=0.0, description="Drive amplitude; the sign only shifts the drive phase")
    omega: float = Field(default=0.0, ge=0.0, description="Drive frequency")


class OscillatorSpec(_Strict):
    mass: float = Field(default=1.0, gt=0.0, description="Particle mass")
    hbar: float = Field(default=1.0, gt=0.0, description="Reduced Planck constant")
    x: DriveSpec
    y: DriveSpec

    def to_params(self) -> OscillatorParams:
        return OscillatorParams(
            mass=self.mass,
            hbar=self.hbar,
            x=AxisDrive(self.x.v, self.x.kappa, self.x.omega),
            y=AxisDrive(self.y.v, self.y.kappa, self.y.omega),
        )


class BranchSpec(_Strict):
    """One branch of the initial superposition."""
    label: Optional[str] = Field(default=None, description="Branch label (default J1, J2, ...)")
    p0: Vector = Field(default=(0.0, 0.0), description="Initial momentum")
    weight: float = Field(default=1.0, description="Real branch weight a_J")


class TimeSpec(_Strict):
    t0: float = Field(default=0.0, description="Start time")
    t1: float = Field(default=2.0 * math.pi, description="End time")
    n_steps: int = Field(default=400, ge=2, description="Number of grid intervals")

    @model_validator(mode="after")
    def _ordered(self) -> "TimeSpec":
        if not self.t1 > self.t0:
            raise ValueError("t1 must be greater than t0")
        return self

    def grid(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n_steps + 1)

    @property
    def spacing(self) -> float:
        return (self.t1 - self.t0) / self.n_steps


class Tolerances(_Strict):
    """Numerics tolerances, seeded from process settings."""
    rtol: float = Field(default_factory=lambda: settings.rtol, gt=0.0, lt=1.0)
    atol: float = Field(default_factory=lambda: settings.atol, gt=0.0, lt=1.0)
    amplitude_floor: float = Field(default_factory=lambda: settings.amplitude_floor, gt=0.0)
    density_floor: float = Field(default_factory=lambda: settings.density_floor, gt=0.0, lt=1.0)
    caustic_epsilon: float = Field(default_factory=lambda: settings.caustic_epsilon, gt=0.0)
    compatibility_threshold: float = Field(default_factory=lambda: settings.compatibility_threshold, gt=0.0)
    overlap_flag_level: float = Field(default_factory=lambda: settings.overlap_flag_level, gt=0.0, lt=1.0)
    crossing_delta: float = Field(default_factory=lambda: settings.crossing_delta, gt=0.0)
    max_displacement_scale: float = Field(default_factory=lambda: settings.max_displacement_scale, gt=0.0)
    bohmian_sample_dt: float = Field(default_factory=lambda: settings.bohmian_sample_dt, gt=0.0)
    equivariance_margin: float = Field(default_factory=lambda: settings.equivariance_margin, gt=0.0)
    recurrence_prominence: float = Field(default_factory=lambda: settings.recurrence_prominence, gt=0.0, lt=1.0)

    def scaled(self, factor: float) -> "Tolerances":
        return self.model_copy(update={"rtol": self.rtol * factor, "atol": self.atol * factor})


# =============================================================================
# Command blocks
# =============================================================================


class WMAGridSpec(_Strict):
    x_range: Vector = Field(default=(-7.0, 7.0))
    y_range: Vector = Field(default=(-3.0, 3.0))
    nx: int = Field(default=40, ge=1)
    ny: int = Field(default=40, ge=1)
    times: List[float] = Field(default_factory=lambda: [float(t) for t in np.linspace(1.5, 2.0 * math.pi - 1.5, 20)])
    width: Optional[PositiveFloat] = Field(default=None, description="Window width (default window_scale * min alpha0)")
    method: WeakMethodSpec = Field(default=WeakMethodSpec.ANALYTIC)


class PostselectionSpec(_Strict):
    kind: PostselectionKindSpec = Field(default=PostselectionKindSpec.BRANCH_MATCHED)
    label: Optional[str] = Field(default=None, description="Branch for branch_matched")
    r_f: Optional[Vector] = None
    p_f: Optional[Vector] = None
    delta_f: Optional[PositiveFloat] = None
    t_f: Optional[float] = None
    coefficients: Optional[List[Vector]] = Field(default=None, description="(re, im) per component")
    momenta: Optional[List[Vector]] = None

    @model_validator(mode="after")
    def _required_fields(self) -> "PostselectionSpec":
        need = {
            PostselectionKindSpec.GAUSSIAN_PACKET: ("r_f", "p_f", "delta_f", "t_f"),
            PostselectionKindSpec.MULTI_BRANCH: ("r_f", "t_f", "coefficients", "momenta"),
            PostselectionKindSpec.BRANCH_MATCHED: (),
        }[self.kind]
        missing = [name for name in need if getattr(self, name) is None]
        if missing:
            raise ValueError(f"{self.kind.value} postselection requires {', '.join(missing)}")
        if self.kind is PostselectionKindSpec.MULTI_BRANCH:
            if len(self.coefficients) != len(self.momenta):
                raise ValueError("coefficients and momenta must have the same length")
            if not any(c[0] != 0.0 or c[1] != 0.0 for c in self.coefficients):
                raise ValueError("coefficients must not all be zero")
        return self


class BohmSpec(_Strict):
    starts: List[Vector] = Field(default_factory=lambda: [(0.01, 0.09), (0.01, -0.08)])
    t1: Optional[float] = Field(default=None, description="End time (default time.t1)")
    end_branches: List[str] = Field(
        default_factory=list,
        description="Branches whose q^J(t_f) ends a streamline integrated backward from t_f")
    t_f: Optional[float] = Field(
        default=None, description="End time of those streamlines (default postselection.t_f, else time.t1)")
    compare_wmas: bool = Field(
        default=False, description="Sweep the WMA lattice and report the WMAs each of them passes")


class EnsembleSpec(_Strict):
    n: int = Field(default=2000, ge=100)
    bins: int = Field(default=40, ge=2)
    t1: float = Field(default=1.0)
    record_trajectories: int = Field(default=0, ge=0, description="Members integrated one by one and written out")


class RecurrenceSpec(_Strict):
    center: Vector = Field(default=(0.0, 0.0))
    radius: Optional[PositiveFloat] = Field(default=None, description="Default recurrence_radius_scale * min alpha0")


class WeakMomentumSpec(_Strict):
    points: List[Vector] = Field(default_factory=lambda: [(0.0, 0.0)])
    t: float = Field(default=1.0)
    eps: List[PositiveFloat] = Field(default_factory=lambda: [1e-2, 5e-3, 1e-3])


class PropagatorCheckSpec(_Strict):
    t0: float = Field(default=0.0)
    t1: float = Field(default=0.7)
    x_range: Vector = Field(default=(-5.0, 5.0))
    n_points: int = Field(default=101, ge=2)


class IdentitySpec(_Strict):
    times: List[float] = Field(default_factory=lambda: [0.0, 1.0])


# =============================================================================
# Scenario
# =============================================================================


class ScenarioConfig(_Strict):
    """Fully resolved run configuration."""
    name: str = Field(default="custom")
    description: str = Field(default="")
    oscillator: OscillatorSpec
    q0: Vector = Field(default=(0.0, 0.0), description="Common initial center")
    branches: List[BranchSpec] = Field(default_factory=lambda: [BranchSpec()], min_length=1)
    alpha0: Optional[Tuple[PositiveFloat, PositiveFloat]] = Field(
        default=None, description="Initial Ermakov amplitude per axis (default static fixed point)")
    time: TimeSpec = Field(default_factory=TimeSpec)
    seed: int = Field(default=0, ge=0, lt=2 ** 64)
    tolerances: Tolerances = Field(default_factory=Tolerances)
    wma_grid: WMAGridSpec = Field(default_factory=WMAGridSpec)
    postselection: PostselectionSpec = Field(default_factory=PostselectionSpec)
    bohm: BohmSpec = Field(default_factory=BohmSpec)
    ensemble: EnsembleSpec = Field(default_factory=EnsembleSpec)
    recurrence: RecurrenceSpec = Field(default_factory=RecurrenceSpec)
    weak_momentum: WeakMomentumSpec = Field(default_factory=WeakMomentumSpec)
    propagator_check: PropagatorCheckSpec = Field(default_factory=PropagatorCheckSpec)
    identity: IdentitySpec = Field(default_factory=IdentitySpec)

    @model_validator(mode="after")
    def _resolve_defaults(self) -> "ScenarioConfig":
        labels = [b.label or f"J{i + 1}" for i, b in enumerate(self.branches)]
        if len(set(labels)) != len(labels):
            raise ValueError("branch labels must be unique")
        for branch, label in zip(self.branches, labels):
            branch.label = label
        if self.alpha0 is None:
            self.alpha0 = default_alpha0(self.oscillator.to_params())
        scale = min(self.alpha0)
        if self.wma_grid.width is None:
            self.wma_grid.width = settings.window_scale * scale
        if self.recurrence.radius is None:
            self.recurrence.radius = settings.recurrence_radius_scale * scale
        post = self.postselection
        if post.kind is PostselectionKindSpec.BRANCH_MATCHED and post.label is None:
            post.label = labels[0]
        if post.label is not None and post.kind is PostselectionKindSpec.BRANCH_MATCHED \
                and post.label not in labels:
            raise ValueError(f"postselection label {post.label} is not a branch")
        unknown = [label for label in self.bohm.end_branches if label not in labels]
        if unknown:
            raise ValueError(f"bohm.end_branches {unknown} are not branches")
        return self

    @property
    def labels(self) -> List[str]:
        return [b.label for b in self.branches]

    def echo(self) -> Dict[str, Any]:
        """JSON-ready dump of the resolved configuration."""
        return self.model_dump(mode="json")
