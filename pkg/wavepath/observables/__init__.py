"""
wavepath Observables Package
============================

Recurrence spectrum of a region and its comparison with classical
crossings of the guiding trajectories.

Author: wavepath Team
Version: 1.0.0
"""

from .recurrence import (
    Bijection,
    Crossing,
    Peak,
    RecurrenceSpectrum,
    Region,
    classical_crossings,
    crossing_peak_bijection,
    recurrence_spectrum,
    region_probability,
)

__all__ = [
    "Bijection",
    "Crossing",
    "Peak",
    "RecurrenceSpectrum",
    "Region",
    "classical_crossings",
    "crossing_peak_bijection",
    "recurrence_spectrum",
    "region_probability",
]
