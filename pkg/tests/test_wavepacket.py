"""
Wavepacket Tests
================

Gaussian branches, superpositions, closed-form moments and the
Schrodinger-equation residual.

Author: wavepath Team
Version: 1.0.0
"""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from tests.fixtures import split_step_1d
from wavepath.errors import OutOfRange
from wavepath.wavepacket import (
    LogQuadratic,
    bounding_grid,
    branch_expectations,
    density,
    evaluate,
    gaussian_window,
    jet,
    make_superposition,
    norm,
    tdse_residual,
)


class TestLogQuadratic:
    """Tests for the Gaussian moment algebra."""

    def test_window_integral(self):
        """Test int exp(-(x - c)^2 / w^2) = sqrt(pi) w and mean c."""
        g = gaussian_window(1.3, 0.4)
        assert g.integral() == pytest.approx(math.sqrt(math.pi) * 0.4)
        assert g.mean() == pytest.approx(1.3)

    def test_product_adds_coefficients(self):
        f = LogQuadratic(1.0 + 0.5j, 0.2j, 0.1)
        g = LogQuadratic(2.0, 1.0, -0.3)
        h = f * g
        x = np.linspace(-1.0, 1.0, 5)
        np.testing.assert_allclose(h(x), f(x) * g(x), rtol=1e-14)

    def test_complex_integral_against_quadrature(self):
        """Test the closed form against a dense trapezoid rule."""
        f = LogQuadratic(0.7 - 0.4j, 0.3 + 1.1j, 0.2j)
        x = np.linspace(-15.0, 15.0, 60001)
        numeric = trapezoid(f(x), x)
        assert abs(f.integral() - numeric) < 1e-10
        assert abs(f.first_moment() - trapezoid(x * f(x), x)) < 1e-10

    def test_broadcasting(self):
        g = gaussian_window(np.array([0.0, 1.0, 2.0]), 0.5)
        np.testing.assert_allclose(g.mean(), [0.0, 1.0, 2.0])


class TestSuperposition:
    """Tests for branch construction and evaluation."""

    def test_labels_and_lookup(self, mathieu_state):
        assert mathieu_state.labels == ["J1", "J2", "J3"]
        assert mathieu_state.branch("J2").label == "J2"
        with pytest.raises(KeyError):
            mathieu_state.branch("J9")

    def test_select_keeps_weights(self, mathieu_state):
        sub = mathieu_state.select(["J3"])
        assert sub.labels == ["J3"]
        assert sub.branches[0].weight == mathieu_state.branch("J3").weight

    def test_mismatched_lengths(self, static_params):
        with pytest.raises(ValueError):
            make_superposition(static_params, (0, 0), [(1, 0), (0, 1)], [1.0], 0.0, 1.0)

    def test_initial_state_is_plain_gaussian(self, static_coherent):
        """Test g(x, 0) = (1/pi)^(1/4) exp(-x^2/2 + i x) for the unit kick."""
        x = np.linspace(-3.0, 3.0, 13)
        r = np.stack([x, np.zeros_like(x)], axis=-1)
        expected = np.pi ** -0.5 * np.exp(-x ** 2 / 2.0 + 1j * x)
        np.testing.assert_allclose(evaluate(static_coherent, r, 0.0).value, expected, atol=1e-14)

    def test_rigid_transport(self, static_coherent):
        """Test that the coherent density moves rigidly with q(t) = (sin t, 0)."""
        t = 2.3
        r = np.array([[0.3, -0.2], [1.1, 0.4], [-0.5, 0.0]])
        rho = density(static_coherent, r, t).rho
        shifted = r - np.array([math.sin(t), 0.0])
        expected = np.exp(-np.sum(shifted ** 2, axis=-1)) / np.pi
        np.testing.assert_allclose(rho, expected, atol=1e-9)

    def test_analytic_derivatives(self, mathieu_state):
        """Test gradient and Laplacian against central differences."""
        r = np.array([0.4, -0.3])
        t, h = 1.7, 1e-4
        f = evaluate(mathieu_state, r, t)
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            plus = evaluate(mathieu_state, r + e, t).value
            minus = evaluate(mathieu_state, r - e, t).value
            assert abs((plus - minus) / (2 * h) - f.gradient[k]) < 1e-7
        lap = sum(
            (evaluate(mathieu_state, r + e, t).value - 2 * f.value
             + evaluate(mathieu_state, r - e, t).value) / h ** 2
            for e in (np.array([h, 0.0]), np.array([0.0, h]))
        )
        assert abs(lap - f.laplacian) < 1e-5

    def test_third_order_jet(self, mathieu_state):
        """Test d3 psi / dx2 dy against differences of the second-order jet."""
        r = np.array([0.1, 0.2])
        t, h = 0.9, 1e-4
        j3 = jet(mathieu_state, r, t, order=3)
        up = jet(mathieu_state, r + [0.0, h], t).d(2, 0)
        down = jet(mathieu_state, r - [0.0, h], t).d(2, 0)
        assert abs((up - down) / (2 * h) - j3.d(2, 1)) < 1e-6
        with pytest.raises(ValueError):
            jet(mathieu_state, r, t, order=2).d(2, 1)

    def test_vectorized_evaluation(self, two_branch_state):
        pts = np.random.default_rng(0).normal(size=(4, 3, 2))
        f = evaluate(two_branch_state, pts, 0.8)
        assert f.value.shape == (4, 3)
        assert f.gradient.shape == (4, 3, 2)
        np.testing.assert_allclose(f.value[2, 1], evaluate(two_branch_state, pts[2, 1], 0.8).value)

    def test_outside_span(self, static_coherent):
        with pytest.raises(OutOfRange):
            evaluate(static_coherent, np.zeros(2), 100.0)

    def test_far_field_is_singular(self, static_coherent):
        field = density(static_coherent, np.array([[0.0, 0.0], [12.0, 0.0]]), 0.0)
        assert field.singular.tolist() == [False, True]
        assert np.all(np.isnan(field.grad_log_rho[1]))
        assert field.any_singular


class TestNormAndMoments:
    """Tests for closed-form norms and expectation values."""

    def test_single_branch_norm(self, mathieu_single):
        for t in (0.0, 1.3, 3.9):
            assert norm(mathieu_single, t) == pytest.approx(1.0, abs=1e-9)

    def test_norm_is_conserved(self, two_branch_state):
        """Test that the total norm, cross terms included, is constant in time."""
        n0 = norm(two_branch_state, 0.0)
        for t in (0.5, 1.6, 3.1, 6.0):
            assert abs(norm(two_branch_state, t) - n0) < 1e-8

    def test_norm_against_grid(self, two_branch_state):
        """Test the closed-form norm against tensor trapezoid quadrature."""
        t = 1.1
        grid = bounding_grid(two_branch_state, t)
        rho = np.abs(evaluate(two_branch_state, grid.points(), t).value) ** 2
        assert abs(grid.integrate(rho) - norm(two_branch_state, t)) < 1e-9

    def test_coherent_expectations(self, static_coherent):
        """Test <r> = q(t) and <p> = p(t) for one branch."""
        exp = branch_expectations(static_coherent, 2.0)
        np.testing.assert_allclose(exp.position, [math.sin(2.0), 0.0], atol=1e-9)
        np.testing.assert_allclose(exp.momentum, [math.cos(2.0), 0.0], atol=1e-9)
        assert exp.norm == pytest.approx(1.0, abs=1e-9)

    def test_expectations_follow_ehrenfest(self, mathieu_state):
        """Test d<r>/dt = <p>/m for the interfering superposition."""
        t, h = 2.0, 1e-4
        plus = branch_expectations(mathieu_state, t + h).position
        minus = branch_expectations(mathieu_state, t - h).position
        mid = branch_expectations(mathieu_state, t).momentum
        np.testing.assert_allclose((plus - minus) / (2 * h), mid, atol=1e-6)

    def test_complex_weight_shifts_the_node(self, static_params, opposed_pair):
        """Test a relative phase i: psi(t0) ~ cos(x - pi/4), norm without cross terms."""
        w = 1.0 / math.sqrt(2.0)
        phased = make_superposition(static_params, (0.0, 0.0), [(1.0, 0.0), (-1.0, 0.0)],
                                    [w, 1j * w], 0.0, 1.0)
        assert phased.branches[1].weight == pytest.approx(1j * w)
        assert norm(opposed_pair, 0.0) == pytest.approx(1.0 + math.exp(-1.0), abs=1e-12)
        assert norm(phased, 0.0) == pytest.approx(1.0, abs=1e-12)
        assert bool(density(phased, np.array([0.75 * math.pi, 0.0]), 0.0).singular)
        assert not bool(density(phased, np.array([0.5 * math.pi, 0.0]), 0.0).singular)
        assert phased.to_dict()["branches"][1]["weight"] == pytest.approx([0.0, w])

    def test_to_dict(self, two_branch_state):
        data = branch_expectations(two_branch_state, 0.0).to_dict()
        assert set(data["branch_positions"]) == {"J1", "J2"}


class TestSchrodingerResidual:
    """Tests that superpositions solve the time-dependent Schrodinger equation."""

    @pytest.mark.parametrize("name", ["static_coherent", "two_branch_state", "mathieu_state"])
    def test_relative_residual(self, request, name):
        state = request.getfixturevalue(name)
        rng = np.random.default_rng(3)
        for t in (0.7, 2.2):
            center = state.branches[0].traj.position(t)
            pts = center + 0.5 * rng.standard_normal((20, 2))
            assert tdse_residual(state, pts, t).relative < 1e-6

    @pytest.mark.parametrize("state_name, t1, dt, tol", [
        ("static_coherent", 1.0, 5e-4, 1e-5),
        ("mathieu_single", 2.0, 1e-3, 1e-4),
    ])
    def test_split_step_oracle(self, request, state_name, t1, dt, tol):
        """Test the x factor against a split-step Fourier solution of the 1D TDSE."""
        state = request.getfixturevalue(state_name)
        branch = state.branches[0]
        params = state.params
        x = np.linspace(-20.0, 20.0, 2048, endpoint=False)
        psi0 = branch.axis_value("x", x, 0.0)
        psi = split_step_1d(psi0, x, params.mass, params.hbar, params.x.potential, 0.0, t1, dt=dt)
        exact = branch.axis_value("x", x, t1)
        assert np.max(np.abs(psi - exact)) < tol
