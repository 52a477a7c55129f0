"""
WMA Sweep Tests
===============

Lattices, overlap flags, threaded sweeps and weak-trajectory assembly.

Author: wavepath Team
Version: 1.0.0
"""

import math

import numpy as np
import pytest

from wavepath.config import override_settings, settings
from wavepath.errors import UnassignedRecord
from wavepath.weak import (
    WMA,
    BranchMatched,
    MultiBranch,
    assemble_weak_trajectories,
    compare_path_with_wmas,
    overlap_flags,
    partition_records,
    postselected_bohmian,
    run_wma_grid,
    tube_distance,
    tube_reach,
    wma_lattice,
)

WIDTH = 0.289


@pytest.fixture(scope="module")
def recombining():
    c = 1.0 / math.sqrt(3.0)
    return MultiBranch((c, c, c), ((-30.0, 0.0), (0.0, -30.0), (30.0, 30.0)), (0.0, 0.0), 2.0 * math.pi)


@pytest.fixture(scope="module")
def full_sweep(three_branch_state, recombining):
    """One lattice over all three branches at t = 2."""
    wmas = wma_lattice((-7.0, 7.0), (-2.0, 2.0), 29, 17, [2.0], WIDTH)
    return run_wma_grid(three_branch_state, recombining, wmas)


class TestLattice:
    """Tests for WMA placement."""

    def test_lattice_ids_and_order(self):
        wmas = wma_lattice((0.0, 1.0), (-1.0, 1.0), 2, 3, [0.5, 1.5], 0.2)
        assert len(wmas) == 12
        assert wmas[0].id == "k000-i000-j000"
        assert wmas[-1].id == "k001-i001-j002"
        assert wmas[-1].R0 == (1.0, 1.0)
        assert {w.t_k for w in wmas} == {0.5, 1.5}

    def test_width_must_be_positive(self):
        with pytest.raises(ValueError):
            wma_lattice((0.0, 1.0), (0.0, 1.0), 2, 2, [1.0], 0.0)

    def test_overlap_flags(self, two_branch_state):
        """Test that windows where both branches are present get flagged."""
        R0 = np.array([[0.0, 0.0], [0.0, 5.0]])
        flags = overlap_flags(two_branch_state, R0, 0.0)
        assert flags.tolist() == [True, False]


class TestSweep:
    """Tests for run_wma_grid."""

    def test_one_record_per_wma_in_order(self, full_sweep):
        assert len(full_sweep) == 29 * 17
        assert full_sweep[0].wma_id == "k000-i000-j000"
        assert all(r.error is None for r in full_sweep)

    def test_nonvanishing_records_near_each_branch(self, full_sweep):
        labels = {r.branch for r in full_sweep if not r.vanishing}
        assert labels == {"J1", "J2", "J3"}

    def test_thread_count_does_not_change_results(self, two_branch_state):
        wmas = wma_lattice((-3.0, 3.0), (-3.0, 3.0), 7, 7, [0.5, 1.0, 1.5], 0.25)
        one = run_wma_grid(two_branch_state, BranchMatched("J1"), wmas, threads=1)
        four = run_wma_grid(two_branch_state, BranchMatched("J1"), wmas, threads=4)
        for a, b in zip(one, four):
            assert a.wma_id == b.wma_id
            np.testing.assert_array_equal(a.numerator, b.numerator)
            assert a.window_overlap == b.window_overlap

    def test_empty_sweep(self, two_branch_state):
        assert run_wma_grid(two_branch_state, BranchMatched("J1"), []) == []


class TestAssembly:
    """Tests for grouping records into weak trajectories."""

    def test_tube_reach(self):
        assert tube_reach(3, 1e-8) == pytest.approx(math.sqrt(2.0 * math.log(3e8)))

    def test_tube_distance_zero_on_guide(self, three_branch_state):
        q = three_branch_state.branch("J2").traj.position(2.0)
        z = tube_distance(three_branch_state, q, 2.0, WIDTH)
        assert z[1] == pytest.approx(0.0, abs=1e-12)
        assert z[0] > 5.0 and z[2] > 5.0

    def test_default_tube_assigns_every_record(self, three_branch_state, full_sweep):
        trajs = assemble_weak_trajectories(full_sweep, three_branch_state)
        assert [wt.label for wt in trajs] == ["J1", "J2", "J3"]
        assert sum(len(wt.records) for wt in trajs) == sum(
            1 for r in full_sweep if not r.vanishing and not r.overlap_flag)

    def test_narrow_tube_leaves_records_unassigned(self, three_branch_state, full_sweep):
        with pytest.raises(UnassignedRecord) as exc:
            assemble_weak_trajectories(full_sweep, three_branch_state, tube=0.5)
        assert exc.value.code == "unassigned_record"
        assert len(exc.value.records) > 0

    def test_summed_windows_recover_the_guide(self, three_branch_state):
        """Test that a dense lattice summed over its windows lands on q^J(t)."""
        t = 2.0
        wmas = wma_lattice((1.3, 8.8), (-3.0, 3.0), 22, 40, [t], WIDTH)
        with override_settings(compatibility_threshold=1e-14):
            records = run_wma_grid(three_branch_state, BranchMatched("J1"), wmas)
            assembly = partition_records(records, three_branch_state)
        assert not assembly.unassigned
        # faint records past the midpoint toward J2 land in the J2 tube
        j1 = next(wt for wt in assembly.trajectories if wt.label == "J1")
        times, pts = j1.points()
        np.testing.assert_allclose(times, [t])
        np.testing.assert_allclose(pts[0], three_branch_state.branch("J1").traj.position(t), atol=1e-6)

    def test_flagged_records_are_excluded(self, two_branch_state):
        wmas = wma_lattice((-1.0, 1.0), (-1.0, 1.0), 5, 5, [0.0], 0.25)
        records = run_wma_grid(two_branch_state, BranchMatched("J1"), wmas)
        assembly = partition_records(records, two_branch_state)
        n_flagged = sum(1 for r in records if r.overlap_flag and not r.vanishing)
        assert n_flagged > 0
        assert assembly.excluded_overlap == n_flagged


class TestPostselectedBohmian:
    """Tests for the backward streamline ending at a postselected guide point."""

    def test_path_follows_isolated_guide(self, three_branch_state):
        """Test that the path through q^J1(t_f) is q^J1 while J1 stays separated."""
        path = postselected_bohmian(three_branch_state, "J1", 2.0, t_stop=0.5)
        tr = path.trajectory
        guide = three_branch_state.branch("J1").traj
        assert tr.completed
        assert tr.t_start == pytest.approx(2.0)
        assert tr.t_end == pytest.approx(0.5)
        np.testing.assert_allclose(tr.position, guide.position(tr.t), atol=1e-5)
        np.testing.assert_allclose(path.position_at(2.0), guide.position(2.0), atol=1e-9)
        assert path.position_at(0.2) is None

    def test_path_stays_in_its_tube(self, three_branch_state):
        path = postselected_bohmian(three_branch_state, "J1", 2.0, t_stop=0.5)
        assert bool(np.all(path.inside))
        assert set(path.nearest) == {"J1"}
        assert path.visited() == ["J1"]
        assert path.tube_fraction() == 1.0
        assert path.tube == pytest.approx(tube_reach(3, settings.compatibility_threshold))
        rows = path.to_rows()
        assert len(rows) == len(path.trajectory.t)
        assert {row["nearest_branch"] for row in rows} == {"J1"}
        assert path.to_dict()["visited"] == ["J1"]

    def test_stop_must_precede_end(self, three_branch_state):
        with pytest.raises(ValueError):
            postselected_bohmian(three_branch_state, "J1", 1.0, t_stop=1.0)

    def test_unknown_label(self, three_branch_state):
        with pytest.raises(KeyError):
            postselected_bohmian(three_branch_state, "J9", 1.0)

    def test_comparison_with_sweep(self, three_branch_state, recombining):
        """Test which shaded WMAs the path passes and which it misses."""
        times = (1.0, 1.5, 2.0)
        j1 = three_branch_state.branch("J1").traj
        j2 = three_branch_state.branch("J2").traj
        on_j1 = [WMA(f"j1-{t}", tuple(j1.position(t)), WIDTH, t) for t in times]
        on_j2 = [WMA(f"j2-{t}", tuple(j2.position(t)), WIDTH, t) for t in times]
        q = j1.position(2.0)
        beside = WMA("j1-beside", (float(q[0]), float(q[1]) + 2.0 * WIDTH), WIDTH, 2.0)
        records = run_wma_grid(three_branch_state, recombining, on_j1 + on_j2 + [beside])
        assert not any(r.vanishing for r in records)

        path = postselected_bohmian(three_branch_state, "J1", 2.0, t_stop=0.5)
        result = compare_path_with_wmas(three_branch_state, path, records)
        ids = [w.id for w in on_j1]
        assert result.passed == ids
        assert result.passed_shaded == ids
        assert result.shaded_missed == ["j1-beside"]
        assert result.to_dict()["n_shaded_missed"] == 1

    def test_records_outside_span_are_ignored(self, three_branch_state, recombining):
        j1 = three_branch_state.branch("J1").traj
        records = run_wma_grid(three_branch_state, recombining,
                               [WMA("early", tuple(j1.position(0.3)), WIDTH, 0.3)])
        path = postselected_bohmian(three_branch_state, "J1", 2.0, t_stop=0.5)
        result = compare_path_with_wmas(three_branch_state, path, records)
        assert result.passed == [] and result.shaded_missed == []
