"""
Error Hierarchy
===============

Every failure raised by wavepath derives from WavepathError and carries a
machine-readable code plus a details mapping, so the CLI can emit a
structured error record for any of them.

Numerical failures:
    - AmplitudeCollapse: Ermakov amplitude fell below the positivity floor
    - StepFailure: integrator could not meet its local error tolerance
    - OutOfRange: time requested outside a trajectory's span
    - CausticError: propagator requested at a caustic
    - SingularRegion: density below floor where v or Q is undefined

Weak measurement failures:
    - IncompatiblePostselection: pre/post overlap below threshold
    - UnassignedRecord: non-vanishing records matching no guiding trajectory

Configuration failures:
    - ParseError: scenario file is not valid structured text
    - ValidationError: scenario violates the schema

Author: wavepath Team
Version: 1.0.0
"""

from typing import Any, Dict, List, Optional


class WavepathError(Exception):
    """Base class for all wavepath errors."""

    code = "wavepath_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "error": self.code,
            "type": type(self).__name__,
            "message": self.message,
            "details": self.details,
        }


# =============================================================================
# Numerics
# =============================================================================


class NumericsError(WavepathError):
    """Failure inside a numerical kernel."""

    code = "numerics_error"


class AmplitudeCollapse(NumericsError):
    """Ermakov amplitude alpha reached the positivity floor."""

    code = "amplitude_collapse"


class StepFailure(NumericsError):
    """Adaptive integrator failed to meet the requested tolerance."""

    code = "step_failure"


class OutOfRange(NumericsError):
    """Requested time lies outside the available span."""

    code = "out_of_range"


class CausticError(NumericsError):
    """Phase difference is within the caustic exclusion band."""

    code = "caustic"


class SingularRegion(NumericsError):
    """Density below the node floor; velocity and quantum potential undefined."""

    code = "singular_region"


# =============================================================================
# Weak measurement
# =============================================================================


class WeakMeasurementError(WavepathError):
    """Failure while computing or assembling weak values."""

    code = "weak_measurement_error"


class IncompatiblePostselection(WeakMeasurementError):
    """Overlap <chi|psi> too small for a well-conditioned weak value."""

    code = "incompatible_postselection"


class UnassignedRecord(WeakMeasurementError):
    """Non-vanishing weak-value records that match no guiding trajectory."""

    code = "unassigned_record"

    def __init__(self, message: str, records: Optional[List[Any]] = None,
                 details: Optional[Dict[str, Any]] = None):
        super().__init__(message, details)
        self.records = records or []


# =============================================================================
# Configuration
# =============================================================================


class ConfigError(WavepathError):
    """Scenario configuration could not be loaded."""

    code = "config_error"


class ParseError(ConfigError):
    """Scenario file is not parseable (line/column or key path in details)."""

    code = "parse_error"


class ValidationError(ConfigError):
    """Scenario violates the schema; details['violations'] lists all of them."""

    code = "validation_error"

    @property
    def violations(self) -> List[Dict[str, Any]]:
        return self.details.get("violations", [])
