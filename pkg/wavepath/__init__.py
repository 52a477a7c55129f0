"""
wavepath Core Package
=====================

Trajectory pictures of a 2D time-dependent linear oscillator, every one
built on the same closed-form Gaussian states.

This package contains:
    - ermakov/: Guiding trajectories from the Ermakov amplitude/phase system
    - wavepacket/: Gaussian branches, superpositions and the exact propagator
    - flow/: Current, velocity field, quantum potential, Bohmian streamlines
    - weak/: Weak values of position and momentum, WMA sweeps, weak trajectories
    - observables/: Recurrence spectrum and classical crossings
    - cli/: Scenario loading, commands and CSV/manifest outputs
    - scenarios/: Packaged scenario files

Author: wavepath Team
Version: 1.0.0
"""

__version__ = "1.0.0"
