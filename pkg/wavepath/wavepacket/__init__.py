"""
wavepath Wavepacket Package
===========================

Closed-form Gaussian branches, their superpositions with analytic
derivatives, Gaussian moment algebra and the exact oscillator propagator.

Author: wavepath Team
Version: 1.0.0
"""

from .branch import AxisGaussian, GaussianBranch, axis_gaussian
from .checks import TDSEResidual, apply_hamiltonian, tdse_residual
from .moments import LogQuadratic, gaussian_window
from .propagator import (
    classical_action,
    kernel_log_quadratic,
    propagator_1d,
    propagator_prefactor,
    reproduce_wavefunction,
)
from .quadrature import Grid2D, bounding_grid
from .superposition import (
    ComplexField,
    DensityField,
    Expectations,
    Superposition,
    WaveJet,
    branch_expectations,
    branch_factors,
    density,
    density_floor,
    evaluate,
    grad_log_density,
    jet,
    make_superposition,
    norm,
    peak_density_bound,
)

__all__ = [
    "AxisGaussian",
    "ComplexField",
    "DensityField",
    "Expectations",
    "GaussianBranch",
    "Grid2D",
    "LogQuadratic",
    "Superposition",
    "TDSEResidual",
    "WaveJet",
    "apply_hamiltonian",
    "axis_gaussian",
    "bounding_grid",
    "branch_expectations",
    "branch_factors",
    "classical_action",
    "density",
    "density_floor",
    "evaluate",
    "gaussian_window",
    "grad_log_density",
    "jet",
    "kernel_log_quadratic",
    "make_superposition",
    "norm",
    "peak_density_bound",
    "propagator_1d",
    "propagator_prefactor",
    "reproduce_wavefunction",
    "tdse_residual",
]
