"""
Momentum Weak Value Tests
=========================

Position-postselected momentum weak values, the two-point construction
and the expectation identity.

Author: wavepath Team
Version: 1.0.0
"""

import math

import numpy as np
import pytest

from wavepath.errors import SingularRegion
from wavepath.flow import velocity_field
from wavepath.wavepacket import density
from wavepath.weak import (
    Observable,
    expectation_identity_check,
    weak_momentum_two_point,
    weak_momentum_value,
    weak_position_before,
)


class TestWeakMomentum:
    """Tests for -i hbar grad psi / psi."""

    def test_real_and_imaginary_parts(self, two_branch_state):
        """Test Re = m v and Im = -hbar grad rho / 2 rho."""
        pts = np.array([[0.2, 0.3], [-0.4, 0.1], [0.7, -0.6]])
        t = 0.9
        p = weak_momentum_value(two_branch_state, pts, t)
        np.testing.assert_allclose(p.real, velocity_field(two_branch_state, pts, t), atol=1e-10)
        np.testing.assert_allclose(p.imag, -0.5 * density(two_branch_state, pts, t).grad_log_rho, atol=1e-10)

    def test_coherent_state(self, static_coherent):
        """Test p_W = p(t) + i (r - q(t)) for the undistorted coherent state."""
        t = 1.3
        r = np.array([0.4, -0.2])
        q = np.array([math.sin(t), 0.0])
        p = weak_momentum_value(static_coherent, r, t)
        np.testing.assert_allclose(p, [math.cos(t), 0.0] + 1j * (r - q), atol=1e-10)

    def test_node_is_singular(self, static_coherent):
        with pytest.raises(SingularRegion) as exc:
            weak_momentum_value(static_coherent, np.array([20.0, 0.0]), 0.0)
        assert exc.value.code == "singular_region"


class TestTwoPoint:
    """Tests for the two-point construction from an earlier position weak value."""

    @pytest.mark.parametrize("eps", [0.3, 0.05, 0.01])
    def test_static_heisenberg_form(self, static_coherent, eps):
        """Test <r(t - eps)>_W = r_f cos eps - <p>_W sin eps for omega = m = 1."""
        r_f, t = np.array([0.5, 0.3]), 2.0
        before = weak_position_before(static_coherent, r_f, t, eps)
        p_w = weak_momentum_value(static_coherent, r_f, t)
        np.testing.assert_allclose(before, r_f * math.cos(eps) - p_w * math.sin(eps), atol=1e-8)

    def test_first_order_convergence(self, static_coherent):
        r_f, t = np.array([0.5, 0.3]), 2.0
        exact = weak_momentum_value(static_coherent, r_f, t)
        errors = [np.max(np.abs(weak_momentum_two_point(static_coherent, r_f, t, eps) - exact))
                  for eps in (0.01, 0.005)]
        order = math.log(errors[0] / errors[1]) / math.log(2.0)
        assert order == pytest.approx(1.0, abs=0.05)

    def test_converges_on_interfering_state(self, mathieu_state):
        r_f, t = np.array([0.1, 0.2]), 2.0
        exact = weak_momentum_value(mathieu_state, r_f, t)
        two = weak_momentum_two_point(mathieu_state, r_f, t, 1e-4)
        assert np.max(np.abs(two - exact)) < 1e-2 * max(1.0, float(np.max(np.abs(exact))))

    def test_eps_must_be_positive(self, static_coherent):
        with pytest.raises(ValueError):
            weak_position_before(static_coherent, (0.0, 0.0), 1.0, 0.0)

    def test_node_is_singular(self, static_coherent):
        with pytest.raises(SingularRegion):
            weak_momentum_two_point(static_coherent, (20.0, 0.0), 1.0, 0.01)


class TestExpectationIdentity:
    """Tests for <A> = int rho Re<A>_W over position postselections."""

    @pytest.mark.parametrize("observable", [Observable.POSITION, Observable.MOMENTUM])
    @pytest.mark.parametrize("t", [0.0, 1.0, 2.7])
    def test_two_branch_state(self, two_branch_state, observable, t):
        res = expectation_identity_check(two_branch_state, t, observable)
        assert res.residual < 1e-8

    def test_driven_state(self, mathieu_state):
        res = expectation_identity_check(mathieu_state, 1.7, "momentum")
        assert res.residual < 1e-8
        assert res.to_dict()["observable"] == "momentum"
