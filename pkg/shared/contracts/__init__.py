"""
wavepath Shared Contracts
=========================

Configuration schema for wavepath runs. Scenario files and the run
manifest's config echo follow these models.

Version: 1.0.0
"""

from shared.contracts.scenario import (
    BohmSpec,
    BranchSpec,
    DriveSpec,
    EnsembleSpec,
    IdentitySpec,
    OscillatorSpec,
    PostselectionKindSpec,
    PostselectionSpec,
    PropagatorCheckSpec,
    RecurrenceSpec,
    ScenarioConfig,
    TimeSpec,
    Tolerances,
    WeakMethodSpec,
    WeakMomentumSpec,
    WMAGridSpec,
)

__all__ = [
    # System
    "DriveSpec",
    "OscillatorSpec",
    "BranchSpec",
    "TimeSpec",
    "Tolerances",
    # Command blocks
    "WMAGridSpec",
    "PostselectionSpec",
    "PostselectionKindSpec",
    "WeakMethodSpec",
    "BohmSpec",
    "EnsembleSpec",
    "RecurrenceSpec",
    "WeakMomentumSpec",
    "PropagatorCheckSpec",
    "IdentitySpec",
    # Scenario
    "ScenarioConfig",
]

# Contract version - bump on breaking changes
CONTRACT_VERSION = "1.0.0"
