"""
Flow Tests
==========

Current, velocity field, quantum potential, Bohmian streamlines and
ensemble equivariance.

Author: wavepath Team
Version: 1.0.0
"""

import math

import numpy as np
import pytest

from wavepath.config import override_settings, settings
from wavepath.errors import SingularRegion
from wavepath.flow import (
    TerminationReason,
    binned_l1,
    classical_force,
    continuity_residual,
    current_density,
    equivariance_check,
    integrate_bohmian,
    newton_residual,
    no_coincidence,
    quantum_force,
    quantum_potential,
    run_ensemble,
    sample_density,
    sample_times,
    transport_ensemble,
    velocity_field,
    velocity_samples_consistent,
)
from wavepath.wavepacket import density, peak_density_bound


class TestFields:
    """Tests for the hydrodynamic fields."""

    def test_current_is_density_times_velocity(self, mathieu_state):
        pts = np.array([[0.2, 0.1], [-0.4, 0.5], [0.9, -0.3]])
        j = current_density(mathieu_state, pts, 1.4)
        rho = density(mathieu_state, pts, 1.4).rho
        v = velocity_field(mathieu_state, pts, 1.4)
        np.testing.assert_allclose(j, rho[:, None] * v, rtol=1e-12, atol=1e-14)

    def test_coherent_velocity_is_uniform(self, static_coherent):
        """Test v = p(t)/m everywhere for the undistorted coherent state."""
        t = 0.8
        pts = np.array([[0.0, 0.0], [1.0, -0.5], [-1.2, 0.7]])
        v = velocity_field(static_coherent, pts, t)
        np.testing.assert_allclose(v, np.tile([math.cos(t), 0.0], (3, 1)), atol=1e-9)

    def test_velocity_far_away_is_singular(self, static_coherent):
        with pytest.raises(SingularRegion) as exc:
            velocity_field(static_coherent, np.array([15.0, 0.0]), 0.0)
        assert exc.value.details["n_points"] == 1
        assert exc.value.details["first_point"] == [15.0, 0.0]

    def test_interference_node_is_singular(self, opposed_pair):
        """Test the exact zero of cos(x) exp(-r^2/2) at x = pi/2."""
        node = np.array([math.pi / 2.0, 0.0])
        assert bool(density(opposed_pair, node, 0.0).singular)
        with pytest.raises(SingularRegion):
            velocity_field(opposed_pair, node, 0.0)
        with pytest.raises(SingularRegion):
            quantum_potential(opposed_pair, node, 0.0)

    def test_quantum_potential_grows_toward_node(self, opposed_pair):
        """Test Q = -(x^2 - 3 + 2x tan x)/2 on y = 0 and its growth toward the node."""
        x = math.pi / 2.0 - np.array([0.3, 0.1, 0.03, 0.01])
        pts = np.stack([x, np.zeros_like(x)], axis=-1)
        q = quantum_potential(opposed_pair, pts, 0.0)
        np.testing.assert_allclose(q, -0.5 * (x ** 2 - 3.0 + 2.0 * x * np.tan(x)), rtol=1e-6)
        assert np.all(np.diff(np.abs(q)) > 0.0)

    def test_ground_state_quantum_potential(self, ground_state):
        """Test Q = hbar w - (m w^2 / 2) |r|^2 and grad Q = -m v r."""
        pts = np.array([[0.0, 0.0], [0.5, -0.3], [1.2, 0.4]])
        q = quantum_potential(ground_state, pts, 0.5)
        np.testing.assert_allclose(q, 1.0 - 0.5 * np.sum(pts ** 2, axis=-1), atol=1e-10)
        np.testing.assert_allclose(quantum_force(ground_state, pts, 0.5), -pts, atol=1e-10)

    def test_quantum_force_matches_gradient(self, two_branch_state):
        """Test the analytic grad Q against central differences of Q."""
        r, t, h = np.array([0.3, 0.1]), 0.0, 1e-5
        force = quantum_force(two_branch_state, r, t)
        for k in range(2):
            e = np.zeros(2)
            e[k] = h
            fd = (quantum_potential(two_branch_state, r + e, t)
                  - quantum_potential(two_branch_state, r - e, t)) / (2 * h)
            assert abs(fd - force[k]) < 1e-5 * max(1.0, abs(force[k]))

    def test_classical_force(self, mathieu_params, mathieu_state):
        r = np.array([0.5, -1.0])
        t = 0.3
        v = mathieu_params.x.potential(t)
        np.testing.assert_allclose(classical_force(mathieu_state, r, t), [0.5 * v, -1.0 * v])

    def test_continuity(self, mathieu_state):
        """Test d rho/dt + div j = 0 at interior points."""
        pts = np.random.default_rng(2).normal(scale=0.8, size=(50, 2))
        assert continuity_residual(mathieu_state, pts, 1.3).relative < 1e-6


class TestBohmian:
    """Tests for single streamlines."""

    def test_coherent_streamline_is_rigid(self, static_coherent):
        """Test x(t) = x0 + q(t) for the coherent state."""
        x0 = np.array([0.3, -0.4])
        tr = integrate_bohmian(static_coherent, x0, 0.0, 3.0)
        assert tr.termination is TerminationReason.TIME_REACHED
        assert tr.completed
        expected = x0 + np.stack([np.sin(tr.t), np.zeros_like(tr.t)], axis=-1)
        np.testing.assert_allclose(tr.position, expected, atol=1e-7)
        np.testing.assert_allclose(tr.t[[0, -1]], [0.0, 3.0])

    def test_single_branch_scaling(self, mathieu_single):
        """Test x(t) = q(t) + (x0 - q0) alpha(t) / alpha0 for one Gaussian."""
        traj = mathieu_single.branches[0].traj
        x0 = np.array([0.5, 0.1])
        tr = integrate_bohmian(mathieu_single, x0, 0.0, 3.0)
        q0 = traj.position(0.0)
        alpha = np.stack([traj.x.at(tr.t).alpha, traj.y.at(tr.t).alpha], axis=-1)
        alpha0 = np.array([traj.x.init.alpha, traj.y.init.alpha])
        expected = traj.position(tr.t) + (x0 - q0) * alpha / alpha0
        np.testing.assert_allclose(tr.position, expected, atol=1e-7)

    def test_backward_retraces_forward(self, mathieu_state):
        x0 = np.array([0.1, 0.2])
        fwd = integrate_bohmian(mathieu_state, x0, 0.0, 2.0)
        back = integrate_bohmian(mathieu_state, fwd.end_position, 2.0, 0.0)
        assert back.t_end == pytest.approx(0.0)
        np.testing.assert_allclose(back.end_position, x0, atol=1e-5)
        assert back.t[0] == pytest.approx(0.0)

    def test_newton_residual(self, mathieu_single):
        """Test m dv/dt = -grad(V + Q) along a finely sampled streamline."""
        tr = integrate_bohmian(mathieu_single, (0.4, -0.2), 0.0, 3.0, sample_dt=0.005)
        assert newton_residual(mathieu_single, tr).max_norm < 1e-4

    def test_recorded_velocity_matches_field(self, two_branch_state):
        tr = integrate_bohmian(two_branch_state, (0.01, 0.09), 0.0, 1.0)
        assert velocity_samples_consistent(two_branch_state, tr) < 1e-12

    def test_start_at_node_is_rejected(self, static_coherent):
        with pytest.raises(SingularRegion):
            integrate_bohmian(static_coherent, (20.0, 0.0), 0.0, 1.0)

    def test_distinct_streamlines_never_meet(self, two_branch_state):
        trajs = [integrate_bohmian(two_branch_state, x0, 0.0, 2.0) for x0 in [(0.01, 0.09), (0.01, -0.08)]]
        report = no_coincidence(trajs)
        assert report.ok
        assert report.min_distance > 1e-6
        assert report.pair == (0, 1)

    def test_sampled_streamlines_never_meet(self, two_branch_state):
        """Test every pair of twelve streamlines started from rho(t0)."""
        ens = run_ensemble(two_branch_state, 12, 0.0, 1.0, seed=17, threads=4)
        n = len(ens.trajectories)
        assert n * (n - 1) // 2 >= 50
        report = no_coincidence(ens.trajectories)
        assert report.ok
        assert report.min_distance > settings.crossing_delta

    def test_streamlines_keep_their_side(self, two_branch_state):
        """Test that v_y vanishes on y = 0, so sign(y) is fixed over the whole span."""
        t1 = two_branch_state.span[1]
        upper = integrate_bohmian(two_branch_state, (0.01, 0.09), 0.0, t1)
        lower = integrate_bohmian(two_branch_state, (0.01, -0.08), 0.0, t1)
        assert upper.completed and lower.completed
        assert upper.t[-1] == pytest.approx(t1)
        assert np.all(upper.position[:, 1] > 0.0)
        assert np.all(lower.position[:, 1] < 0.0)

    def test_stop_time_is_the_event_time(self, two_branch_state):
        """Test that a streamline stopped by the floor ends where rho crosses it."""
        # on y = 0, rho / bound = exp(-2 q_y^2) with q_y = 2 sin 2t
        t_cross = 0.5 * math.asin(math.sqrt(0.5 * math.log(1.0 / 0.3)) / 2.0)
        with override_settings(density_floor=0.3):
            tr = integrate_bohmian(two_branch_state, (0.0, 0.0), 0.0, 1.0)
            ratio = (density(two_branch_state, tr.end_position, tr.t_end).rho
                     / peak_density_bound(two_branch_state, tr.t_end))
        assert tr.termination is TerminationReason.SINGULAR_REGION
        assert tr.t_end == pytest.approx(t_cross, abs=1e-6)
        assert tr.t[-1] == tr.t_end
        assert np.all(np.diff(tr.t) > 0.0)
        assert float(ratio) == pytest.approx(0.3, rel=1e-6)

    def test_sample_times(self):
        np.testing.assert_allclose(sample_times(0.0, 0.25, 0.1), [0.0, 0.1, 0.2, 0.25])
        np.testing.assert_allclose(sample_times(1.0, 0.8, 0.1), [1.0, 0.9, 0.8])

    def test_to_dict(self, static_coherent):
        tr = integrate_bohmian(static_coherent, (0.0, 0.0), 0.0, 0.5, state_id="s0")
        data = tr.to_dict()
        assert data["termination"] == "time_reached"
        assert data["state_id"] == "s0"
        assert data["n_samples"] == 51


class TestEnsemble:
    """Tests for sampling, transport and equivariance."""

    def test_sampling_is_seeded(self, two_branch_state):
        a = sample_density(two_branch_state, 0.0, 300, np.random.default_rng(9))
        b = sample_density(two_branch_state, 0.0, 300, np.random.default_rng(9))
        assert a.shape == (300, 2)
        np.testing.assert_array_equal(a, b)

    def test_samples_follow_density(self, static_coherent):
        """Test the binned distance of many samples from rho is at sampling-noise level."""
        samples = sample_density(static_coherent, 0.0, 20000, np.random.default_rng(4))
        np.testing.assert_allclose(samples.mean(axis=0), [0.0, 0.0], atol=0.03)
        np.testing.assert_allclose(samples.std(axis=0), [math.sqrt(0.5)] * 2, atol=0.02)
        assert binned_l1(static_coherent, samples, 0.0, bins=10) < 0.1

    def test_transport_matches_single_streamlines(self, two_branch_state):
        pts = np.array([[0.01, 0.09], [0.2, -0.3]])
        joint = transport_ensemble(two_branch_state, pts, 0.0, 0.5)
        single = integrate_bohmian(two_branch_state, pts[1], 0.0, 0.5)
        assert joint.success
        assert joint.n_failed == 0
        np.testing.assert_allclose(joint.final[1], single.end_position, atol=1e-6)

    def test_equivariance(self, two_branch_state):
        """Test that transported samples score like fresh samples of rho(t1)."""
        report = equivariance_check(two_branch_state, 2000, 0.0, 0.5, seed=21, bins=40)
        assert report.n_failed == 0
        assert report.excess <= settings.equivariance_margin
        assert report.passed()
        assert report.to_dict()["passed"] is True
        assert report.details["final"].shape == (2000, 2)
        # binning noise alone is above the margin
        assert report.reference_l1 > settings.equivariance_margin
        assert report.baseline_l1 > settings.equivariance_margin

    def test_zero_interval_scores_at_baseline(self, static_coherent):
        report = equivariance_check(static_coherent, 500, 0.0, 0.0, seed=8, bins=10)
        assert report.l1_distance == report.baseline_l1
        np.testing.assert_array_equal(report.details["initial"], report.details["final"])

    def test_equivariance_needs_enough_samples(self, two_branch_state):
        with pytest.raises(ValueError):
            equivariance_check(two_branch_state, 10, 0.0, 0.5, seed=1)

    def test_run_ensemble_is_deterministic(self, static_coherent):
        """Test that results do not depend on the worker count."""
        one = run_ensemble(static_coherent, 6, 0.0, 0.5, seed=3, threads=1)
        four = run_ensemble(static_coherent, 6, 0.0, 0.5, seed=3, threads=4)
        np.testing.assert_array_equal(one.initial, four.initial)
        for a, b in zip(one.trajectories, four.trajectories):
            np.testing.assert_array_equal(a.position, b.position)
        assert one.n_terminated == 0
        assert one.to_dict()["n"] == 6
