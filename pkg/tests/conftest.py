"""
pytest configuration and fixtures.

Superpositions are built once per session; they are immutable, so tests
share them read-only.

Author: wavepath Team
Version: 1.0.0
"""

import math

import numpy as np
import pytest

from wavepath.ermakov import AxisDrive, OscillatorParams
from wavepath.wavepacket import make_superposition


@pytest.fixture(scope="session")
def static_params():
    """Undriven isotropic oscillator, m = hbar = 1, omega = 1."""
    return OscillatorParams(mass=1.0, hbar=1.0, x=AxisDrive(1.0), y=AxisDrive(1.0))


@pytest.fixture(scope="session")
def static_coherent(static_params):
    """Single coherent branch kicked along x: q(t) = (sin t, 0)."""
    return make_superposition(static_params, (0.0, 0.0), [(1.0, 0.0)], [1.0], 0.0, 4.0 * math.pi)


@pytest.fixture(scope="session")
def ground_state(static_params):
    return make_superposition(static_params, (0.0, 0.0), [(0.0, 0.0)], [1.0], 0.0, 2.0 * math.pi)


@pytest.fixture(scope="session")
def opposed_pair(static_params):
    """Opposite x kicks from the origin: psi(t0) is proportional to cos(x), zero at x = pi/2."""
    w = 1.0 / math.sqrt(2.0)
    return make_superposition(static_params, (0.0, 0.0), [(1.0, 0.0), (-1.0, 0.0)], [w, w], 0.0, 1.0)


@pytest.fixture(scope="session")
def two_branch_params():
    return OscillatorParams(mass=1.0, hbar=1.0, x=AxisDrive(1.0), y=AxisDrive(4.0))


@pytest.fixture(scope="session")
def two_branch_state(two_branch_params):
    """Two branches with opposite y kicks; they split and recombine."""
    w = 1.0 / math.sqrt(2.0)
    return make_superposition(two_branch_params, (0.0, 0.0), [(4.0, 4.0), (4.0, -4.0)], [w, w],
                              0.0, 2.5 * math.pi)


@pytest.fixture(scope="session")
def three_branch_params():
    return OscillatorParams(mass=10.0, hbar=1.0, x=AxisDrive(0.25), y=AxisDrive(2.25))


@pytest.fixture(scope="session")
def three_branch_state(three_branch_params):
    """Three well separated branches, heavy particle."""
    w = 1.0 / math.sqrt(3.0)
    return make_superposition(three_branch_params, (0.0, 0.0), [(30.0, 0.0), (0.0, 30.0), (-30.0, -30.0)],
                              [w, w, w], 0.0, 2.25 * math.pi)


@pytest.fixture(scope="session")
def mathieu_params():
    return OscillatorParams(mass=1.0, hbar=1.0, x=AxisDrive(1.0, 0.2, 1.0), y=AxisDrive(1.0, 0.2, 1.0))


@pytest.fixture(scope="session")
def mathieu_state(mathieu_params):
    """Driven three-branch superposition with interference everywhere."""
    w = 1.0 / math.sqrt(3.0)
    return make_superposition(mathieu_params, (0.0, 0.0), [(1.0, 0.0), (0.0, 1.0), (-1.0, -1.0)],
                              [w, w, w], 0.0, 4.0 * math.pi)


@pytest.fixture(scope="session")
def mathieu_single(mathieu_params):
    return make_superposition(mathieu_params, (0.2, -0.1), [(0.5, 0.3)], [1.0], 0.0, 4.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def static_config_dict():
    """Small static scenario used by the CLI tests."""
    return {
        "name": "static_small",
        "oscillator": {"x": {"v": 1.0}, "y": {"v": 1.0}},
        "branches": [{"p0": [1.0, 0.0]}],
        "time": {"t0": 0.0, "t1": 2.0, "n_steps": 20},
        "seed": 5,
        "wma_grid": {"x_range": [-2.0, 2.0], "y_range": [-1.5, 1.5], "nx": 9, "ny": 7,
                     "times": [0.5, 1.0]},
        "bohm": {"starts": [[0.0, 0.0], [0.5, -0.5]], "t1": 1.0},
        "ensemble": {"n": 100, "bins": 10, "t1": 0.2, "record_trajectories": 2},
        "weak_momentum": {"points": [[0.5, 0.3]], "t": 1.0, "eps": [0.01, 0.005]},
        "propagator_check": {"t0": 0.0, "t1": 0.7, "x_range": [-3.0, 3.0], "n_points": 21},
        "identity": {"times": [0.0, 1.0]},
    }
