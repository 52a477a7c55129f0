"""
wavepath Flow Package
=====================

Probability current, velocity field, quantum potential and Bohmian
streamlines of a superposition, with ensemble statistics.

Author: wavepath Team
Version: 1.0.0
"""

from .bohmian import (
    BohmianTrajectory,
    CoincidenceReport,
    NewtonResidual,
    TerminationReason,
    integrate_bohmian,
    max_step_for,
    newton_residual,
    no_coincidence,
    sample_times,
    velocity_samples_consistent,
)
from .ensemble import (
    Ensemble,
    EquivarianceReport,
    TransportResult,
    binned_l1,
    equivariance_check,
    run_ensemble,
    sample_density,
    transport_ensemble,
)
from .fields import (
    ContinuityResidual,
    DensityJet,
    classical_force,
    continuity_residual,
    current_density,
    divergence_current,
    quantum_force,
    quantum_potential,
    velocity_field,
    velocity_unchecked,
)

__all__ = [
    "BohmianTrajectory",
    "CoincidenceReport",
    "ContinuityResidual",
    "DensityJet",
    "Ensemble",
    "EquivarianceReport",
    "NewtonResidual",
    "TerminationReason",
    "TransportResult",
    "binned_l1",
    "classical_force",
    "continuity_residual",
    "current_density",
    "divergence_current",
    "equivariance_check",
    "integrate_bohmian",
    "max_step_for",
    "newton_residual",
    "no_coincidence",
    "quantum_force",
    "quantum_potential",
    "run_ensemble",
    "sample_density",
    "sample_times",
    "transport_ensemble",
    "velocity_field",
    "velocity_samples_consistent",
    "velocity_unchecked",
]
