"""
Output Contracts
================

Column layouts of every CSV table a command writes, the run manifest and
the machine-readable error record. Plotting scripts and regression tests
depend on these names.

Author: wavepath Team
Version: 1.0.0
"""

from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class Command(str, Enum):
    """CLI commands."""
    SIMULATE = "simulate"
    BOHM = "bohm"
    ENSEMBLE = "ensemble"
    WEAK_TRAJ = "weak-traj"
    WEAK_MOMENTUM = "weak-momentum"
    RECURRENCE = "recurrence"
    PROPAGATOR_CHECK = "propagator-check"
    IDENTITY_CHECK = "identity-check"


# =============================================================================
# CSV tables
# =============================================================================

TABLE_COLUMNS: Dict[str, List[str]] = {
    "trajectories": [
        "branch", "t", "qx", "qy", "px", "py",
        "alpha_x", "alpha_y", "alpha_dot_x", "alpha_dot_y", "phi_x", "phi_y",
    ],
    "moments": ["t", "norm", "mean_x", "mean_y", "mean_px", "mean_py"],
    "bohm": ["traj_id", "t", "x", "y", "vx", "vy"],
    "bohm_summary": ["traj_id", "x0", "y0", "t_end", "termination", "x_end", "y_end"],
    "bohm_postselected": ["label", "t", "x", "y", "nearest_branch", "in_tube"],
    "ensemble": ["member", "x0", "y0", "x1", "y1", "singular"],
    "ensemble_trajectories": ["member", "t", "x", "y", "vx", "vy"],
    "equivariance": ["n", "bins", "seed", "t0", "t1", "l1_distance", "baseline_l1", "reference_l1", "excess",
                     "passed", "n_failed"],
    "weak_traj": [
        "wma_id", "t_k", "R0x", "R0y", "Re_wx", "Im_wx", "Re_wy", "Im_wy",
        "norm_overlap", "window_overlap", "branch", "vanishing_flag", "overlap_flag", "error",
    ],
    "weak_trajectories": ["branch", "t_k", "Re_wx", "Re_wy", "n_records"],
    "weak_momentum": [
        "point", "x", "y", "t", "eps",
        "Re_px", "Im_px", "Re_py", "Im_py",
        "Re_px_two_point", "Im_px_two_point", "Re_py_two_point", "Im_py_two_point", "abs_error",
    ],
    "recurrence": ["t", "P"],
    "recurrence_peaks": ["t_peak", "height", "prominence"],
    "recurrence_crossings": ["t", "branch", "distance"],
    "propagator_check": ["axis", "t0", "t1", "max_error", "static_action_error"],
    "identity": ["t", "observable", "direct_x", "direct_y", "weak_x", "weak_y", "residual"],
}


# =============================================================================
# Manifest and error record
# =============================================================================


class OutputFile(BaseModel):
    """One written table."""
    name: str
    path: str
    rows: int = Field(..., ge=0)
    sha256: str = Field(..., description="Hash of the CSV body")


class RunManifest(BaseModel):
    """Run manifest written next to the tables."""
    run_id: str
    command: Command
    success: bool
    created_at: str
    seed: int
    threads: int = Field(..., ge=1)
    tolerance_scale: float = Field(..., gt=0.0)
    config: Dict[str, Any] = Field(..., description="Fully resolved scenario echo")
    tolerances: Dict[str, Any] = Field(..., description="Effective numerics settings")
    versions: Dict[str, str]
    outputs: List[OutputFile] = Field(default_factory=list)
    summary: Dict[str, Any] = Field(default_factory=dict)


class ErrorRecord(BaseModel):
    """Machine-readable failure description."""
    error: str = Field(..., description="Error code")
    message: str
    details: Dict[str, Any] = Field(default_factory=dict)
    run_id: Optional[str] = None
    command: Optional[str] = None
    exit_code: int
