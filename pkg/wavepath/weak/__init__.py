"""
wavepath Weak Measurement Package
=================================

Position weak values registered by contact-window WMAs, momentum weak
values under position postselection, WMA sweeps, weak trajectories and
the expectation identity.

Author: wavepath Team
Version: 1.0.0
"""

from .affine import AffineFit, affine_scan, fit_affine_structure
from .bohm_paths import (
    PathWMAComparison,
    PostselectedPath,
    compare_path_with_wmas,
    postselected_bohmian,
)
from .identity import IdentityResult, Observable, expectation_identity_check
from .momentum import (
    weak_momentum_two_point,
    weak_momentum_unchecked,
    weak_momentum_value,
    weak_position_before,
)
from .position import (
    WMA,
    MethodComparison,
    WeakMethod,
    WeakValueRecord,
    WindowMoments,
    compare_methods,
    nearest_branch,
    quadrature_moments,
    weak_position_value,
    window_moments,
)
from .postselection import (
    BranchMatched,
    GaussianPacket,
    MultiBranch,
    PositionPoint,
    PostselectionKind,
    PostselectionState,
    postselection_to_dict,
    resolve_postselection,
)
from .sweep import (
    Assembly,
    WeakTrajectory,
    assemble_weak_trajectories,
    overlap_flags,
    partition_records,
    run_wma_grid,
    tube_distance,
    tube_reach,
    wma_lattice,
)

__all__ = [
    "WMA",
    "AffineFit",
    "Assembly",
    "BranchMatched",
    "GaussianPacket",
    "IdentityResult",
    "MethodComparison",
    "MultiBranch",
    "Observable",
    "PathWMAComparison",
    "PositionPoint",
    "PostselectedPath",
    "PostselectionKind",
    "PostselectionState",
    "WeakMethod",
    "WeakTrajectory",
    "WeakValueRecord",
    "WindowMoments",
    "affine_scan",
    "assemble_weak_trajectories",
    "compare_methods",
    "compare_path_with_wmas",
    "expectation_identity_check",
    "fit_affine_structure",
    "nearest_branch",
    "overlap_flags",
    "partition_records",
    "postselected_bohmian",
    "postselection_to_dict",
    "quadrature_moments",
    "resolve_postselection",
    "run_wma_grid",
    "tube_distance",
    "tube_reach",
    "weak_momentum_two_point",
    "weak_momentum_unchecked",
    "weak_momentum_value",
    "weak_position_before",
    "weak_position_value",
    "window_moments",
    "wma_lattice",
]
