"""
Command Implementations
=======================

One function per CLI command. Each takes the resolved scenario and the
worker count and returns the tables to write plus a summary for the
manifest; nothing here touches the filesystem.

Author: wavepath Team
Version: 1.0.0
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from shared.contracts.scenario import PostselectionKindSpec, ScenarioConfig
from shared.schemas import Command
from wavepath.ermakov import (
    AXES,
    ermakov_residual,
    linear_equivalence_error,
    mathieu_form,
    state_at,
)
from wavepath.errors import SingularRegion, ValidationError
from wavepath.flow import (
    continuity_residual,
    equivariance_check,
    integrate_bohmian,
    newton_residual,
    no_coincidence,
    run_ensemble,
)
from wavepath.logging import get_logger
from wavepath.observables import (
    Region,
    classical_crossings,
    crossing_peak_bijection,
    recurrence_spectrum,
)
from wavepath.wavepacket import (
    Superposition,
    branch_expectations,
    classical_action,
    make_superposition,
    reproduce_wavefunction,
    tdse_residual,
)
from wavepath.weak import (
    WMA,
    BranchMatched,
    GaussianPacket,
    MultiBranch,
    Observable,
    PostselectionState,
    WeakMethod,
    WeakValueRecord,
    compare_path_with_wmas,
    expectation_identity_check,
    partition_records,
    postselected_bohmian,
    postselection_to_dict,
    run_wma_grid,
    weak_momentum_two_point,
    weak_momentum_value,
    wma_lattice,
)

logger = get_logger(__name__)

Rows = List[Dict[str, Any]]

# Random (r, t) samples used for the TDSE and continuity residuals of `simulate`
RESIDUAL_SAMPLES = 1000


@dataclass
class CommandResult:
    """Tables and summary of one command run."""
    command: Command
    tables: Dict[str, Rows] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    success: bool = True
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command.value,
            "tables": {name: len(rows) for name, rows in self.tables.items()},
            "summary": self.summary,
            "success": self.success,
            "error": self.error,
        }


# =============================================================================
# Helpers
# =============================================================================

def build_state(config: ScenarioConfig, t_end: Optional[float] = None) -> Superposition:
    """Preselected superposition on [time.t0, max(time.t1, t_end)]."""
    t1 = config.time.t1 if t_end is None else max(config.time.t1, t_end)
    return make_superposition(
        config.oscillator.to_params(),
        q0=config.q0,
        momenta=[b.p0 for b in config.branches],
        weights=[b.weight for b in config.branches],
        t0=config.time.t0,
        t1=t1,
        alpha0=config.alpha0,
        labels=config.labels,
        rtol=config.tolerances.rtol,
        atol=config.tolerances.atol,
    )


def build_postselection(config: ScenarioConfig) -> PostselectionState:
    spec = config.postselection
    if spec.kind is PostselectionKindSpec.BRANCH_MATCHED:
        return BranchMatched(spec.label)
    if spec.kind is PostselectionKindSpec.GAUSSIAN_PACKET:
        return GaussianPacket(tuple(spec.r_f), tuple(spec.p_f), spec.delta_f, spec.t_f)
    return MultiBranch(
        coefficients=tuple(complex(re, im) for re, im in spec.coefficients),
        momenta=tuple(tuple(p) for p in spec.momenta),
        r_f=tuple(spec.r_f),
        t_f=spec.t_f,
        delta_f=spec.delta_f,
    )


def _require_inside(config: ScenarioConfig, name: str, times: List[float]) -> None:
    bad = [t for t in times if t < config.time.t0]
    if bad:
        raise ValidationError(
            f"{name} times precede time.t0",
            {"violations": [{"loc": name, "msg": f"time {t} < t0", "type": "range"} for t in bad]},
        )


def _residual_samples(state: Superposition, rng: np.random.Generator, n: int):
    """(t, r) pairs spread over the branch envelopes, away from the span ends."""
    lo, hi = state.span
    pad = 1e-3 * (hi - lo)
    ts = rng.uniform(lo + pad, hi - pad, n)
    picks = rng.integers(0, len(state.branches), n)
    normals = rng.standard_normal((n, 2))
    for t, j, z in zip(ts, picks, normals):
        branch = state.branches[j]
        yield float(t), branch.traj.position(float(t)) + 1.5 * branch.sigma(float(t)) * z


# =============================================================================
# Commands
# =============================================================================

def run_simulate(config: ScenarioConfig, threads: int) -> CommandResult:
    state = build_state(config)
    grid = config.time.grid()
    params = state.params

    traj_rows: Rows = []
    for branch in state.branches:
        sx, sy = state_at(branch.traj, grid)
        for k, t in enumerate(grid):
            traj_rows.append({
                "branch": branch.label, "t": t,
                "qx": sx.q[k], "qy": sy.q[k], "px": sx.p[k], "py": sy.p[k],
                "alpha_x": sx.alpha[k], "alpha_y": sy.alpha[k],
                "alpha_dot_x": sx.alpha_dot[k], "alpha_dot_y": sy.alpha_dot[k],
                "phi_x": sx.phi[k], "phi_y": sy.phi[k],
            })

    moment_rows: Rows = []
    for t in grid:
        exp = branch_expectations(state, float(t))
        moment_rows.append({
            "t": t, "norm": exp.norm,
            "mean_x": exp.position[0], "mean_y": exp.position[1],
            "mean_px": exp.momentum[0], "mean_py": exp.momentum[1],
        })

    rng = np.random.default_rng(config.seed)
    tdse, continuity = 0.0, 0.0
    for t, r in _residual_samples(state, rng, RESIDUAL_SAMPLES):
        tdse = max(tdse, tdse_residual(state, r, t).relative)
        continuity = max(continuity, continuity_residual(state, r, t).relative)

    summary = {
        "branches": {
            b.label: {
                "amplitude_ratio": b.traj.amplitude_ratio,
                "bounded": b.traj.bounded,
                "ermakov_residual": {a.value: float(np.max(ermakov_residual(b.traj, a))) for a in AXES},
                "linear_equivalence_error": {a.value: linear_equivalence_error(b.traj, a) for a in AXES},
            }
            for b in state.branches
        },
        "mathieu_form": {a.value: mathieu_form(params, a) for a in AXES},
        "tdse_relative_residual": tdse,
        "continuity_relative_residual": continuity,
        "residual_samples": RESIDUAL_SAMPLES,
    }
    return CommandResult(Command.SIMULATE, {"trajectories": traj_rows, "moments": moment_rows}, summary)


def postselected_end_time(config: ScenarioConfig) -> float:
    """bohm.t_f, else the postselection time, else time.t1."""
    if config.bohm.t_f is not None:
        return config.bohm.t_f
    t_f = getattr(build_postselection(config), "t_f", None)
    return config.time.t1 if t_f is None else t_f


def run_bohm(config: ScenarioConfig, threads: int) -> CommandResult:
    t0 = config.time.t0
    t1 = config.bohm.t1 if config.bohm.t1 is not None else config.time.t1
    t_f = postselected_end_time(config) if config.bohm.end_branches else t1
    if not t_f > t0:
        raise ValidationError(
            "postselected streamlines must end after time.t0",
            {"violations": [{"loc": "bohm.t_f", "msg": f"t_f={t_f} <= t0={t0}", "type": "range"}]},
        )
    records: List[WeakValueRecord] = []
    if config.bohm.end_branches and config.bohm.compare_wmas:
        state, _, _, records = _weak_sweep(config, threads, max(t1, t_f))
    else:
        state = build_state(config, max(t1, t_f))

    trajs = [integrate_bohmian(state, start, t0, t1, state_id=f"bohm-{k}")
             for k, start in enumerate(config.bohm.starts)]

    rows: Rows = []
    summary_rows: Rows = []
    newton: Dict[str, Optional[float]] = {}
    for tr in trajs:
        for t, p, v in zip(tr.t, tr.position, tr.velocity):
            rows.append({"traj_id": tr.state_id, "t": t, "x": p[0], "y": p[1], "vx": v[0], "vy": v[1]})
        end = tr.end_position
        summary_rows.append({
            "traj_id": tr.state_id, "x0": tr.x0[0], "y0": tr.x0[1], "t_end": tr.t_end,
            "termination": tr.termination.value, "x_end": end[0], "y_end": end[1],
        })
        try:
            newton[tr.state_id] = newton_residual(state, tr).max_norm if len(tr.t) >= 3 else None
        except SingularRegion:
            newton[tr.state_id] = None

    summary = {
        "trajectories": [tr.to_dict() for tr in trajs],
        "newton_residual": newton,
        "coincidence": no_coincidence(trajs).to_dict(),
    }
    tables = {"bohm": rows, "bohm_summary": summary_rows}

    if config.bohm.end_branches:
        paths = [postselected_bohmian(state, label, t_f, t0) for label in config.bohm.end_branches]
        tables["bohm_postselected"] = [row for path in paths for row in path.to_rows()]
        summary["postselected"] = [path.to_dict() for path in paths]
        if config.bohm.compare_wmas:
            summary["wma_comparison"] = [
                compare_path_with_wmas(state, path, records).to_dict() for path in paths]
    return CommandResult(Command.BOHM, tables, summary)


def run_ensemble_command(config: ScenarioConfig, threads: int) -> CommandResult:
    spec = config.ensemble
    t0 = config.time.t0
    state = build_state(config, spec.t1)
    report = equivariance_check(state, spec.n, t0, spec.t1, config.seed, spec.bins)

    initial = report.details["initial"]
    final = report.details["final"]
    singular = report.details["singular"]
    rows: Rows = [
        {"member": k, "x0": initial[k, 0], "y0": initial[k, 1],
         "x1": final[k, 0], "y1": final[k, 1], "singular": int(singular[k])}
        for k in range(len(initial))
    ]
    tables = {
        "ensemble": rows,
        "equivariance": [{
            "n": report.n, "bins": report.bins, "seed": report.seed, "t0": report.t0,
            "t1": report.t1, "l1_distance": report.l1_distance,
            "baseline_l1": report.baseline_l1, "reference_l1": report.reference_l1,
            "excess": report.excess, "passed": int(report.passed()), "n_failed": report.n_failed,
        }],
    }
    if spec.record_trajectories:
        k = min(spec.record_trajectories, len(initial))
        members = run_ensemble(state, k, t0, spec.t1, config.seed, threads, initial=initial[:k])
        tables["ensemble_trajectories"] = [
            {"member": m, "t": t, "x": p[0], "y": p[1], "vx": v[0], "vy": v[1]}
            for m, tr in enumerate(members.trajectories)
            for t, p, v in zip(tr.t, tr.position, tr.velocity)
        ]
    return CommandResult(Command.ENSEMBLE, tables, {"equivariance": report.to_dict()})


def _weak_sweep(
    config: ScenarioConfig, threads: int, t_end: Optional[float] = None,
) -> Tuple[Superposition, PostselectionState, List[WMA], List[WeakValueRecord]]:
    """Run the configured WMA lattice against the configured postselection."""
    grid = config.wma_grid
    post = build_postselection(config)
    times = list(grid.times)
    _require_inside(config, "wma_grid.times", times)
    t_f = getattr(post, "t_f", None)
    if t_f is not None and max(times) > t_f:
        raise ValidationError(
            "interaction times must not exceed the postselection time",
            {"violations": [{"loc": "wma_grid.times", "msg": f"time > t_f={t_f}", "type": "range"}]},
        )
    ends = times + [t for t in (t_f, t_end) if t is not None]
    state = build_state(config, max(ends))

    wmas = wma_lattice(grid.x_range, grid.y_range, grid.nx, grid.ny, times, grid.width)
    records = run_wma_grid(state, post, wmas, WeakMethod(grid.method.value), threads)
    return state, post, wmas, records


def run_weak_traj(config: ScenarioConfig, threads: int) -> CommandResult:
    state, post, wmas, records = _weak_sweep(config, threads)
    assembly = partition_records(records, state)

    traj_rows: Rows = []
    deviation: Dict[str, float] = {}
    for wt in assembly.trajectories:
        t_pts, pts = wt.points()
        counts = {t: sum(1 for r in wt.records if r.t_k == t) for t in t_pts}
        guide = state.branch(wt.label).traj.position(t_pts)
        deviation[wt.label] = float(np.max(np.linalg.norm(pts - guide, axis=-1)))
        for t, p in zip(t_pts, pts):
            traj_rows.append({"branch": wt.label, "t_k": t, "Re_wx": p[0], "Re_wy": p[1],
                              "n_records": counts[t]})

    summary = {
        "postselection": postselection_to_dict(post),
        "n_wma": len(wmas),
        "n_nonvanishing": sum(1 for r in records if not r.vanishing),
        "n_overlap_flagged": sum(1 for r in records if r.overlap_flag),
        "n_failed": sum(1 for r in records if r.error),
        "n_unassigned": len(assembly.unassigned),
        "excluded_overlap": assembly.excluded_overlap,
        "trajectories": [wt.label for wt in assembly.trajectories],
        "max_deviation_from_guide": deviation,
    }
    tables = {"weak_traj": [r.to_row() for r in records], "weak_trajectories": traj_rows}
    return CommandResult(Command.WEAK_TRAJ, tables, summary)


def run_weak_momentum(config: ScenarioConfig, threads: int) -> CommandResult:
    spec = config.weak_momentum
    _require_inside(config, "weak_momentum.t", [spec.t - max(spec.eps)])
    state = build_state(config, spec.t)

    rows: Rows = []
    for k, point in enumerate(spec.points):
        direct = weak_momentum_value(state, np.asarray(point), spec.t)
        for eps in spec.eps:
            two = weak_momentum_two_point(state, point, spec.t, eps)
            rows.append({
                "point": k, "x": point[0], "y": point[1], "t": spec.t, "eps": eps,
                "Re_px": direct[0].real, "Im_px": direct[0].imag,
                "Re_py": direct[1].real, "Im_py": direct[1].imag,
                "Re_px_two_point": two[0].real, "Im_px_two_point": two[0].imag,
                "Re_py_two_point": two[1].real, "Im_py_two_point": two[1].imag,
                "abs_error": float(np.max(np.abs(two - direct))),
            })

    orders = {}
    for k in range(len(spec.points)):
        errs = [(r["eps"], r["abs_error"]) for r in rows if r["point"] == k]
        if len(errs) >= 2 and all(e > 0 for _, e in errs):
            eps_arr, err_arr = np.log([e for e, _ in errs]), np.log([e for _, e in errs])
            orders[str(k)] = float(np.polyfit(eps_arr, err_arr, 1)[0])
    return CommandResult(Command.WEAK_MOMENTUM, {"weak_momentum": rows}, {"observed_order": orders})


def run_recurrence(config: ScenarioConfig, threads: int) -> CommandResult:
    spec = config.recurrence
    state = build_state(config)
    region = Region(tuple(spec.center), spec.radius)
    t_grid = config.time.grid()
    spectrum = recurrence_spectrum(state, region, t_grid,
                                   prominence=config.tolerances.recurrence_prominence,
                                   threads=threads)
    crossings = classical_crossings([b.traj for b in state.branches], spec.center,
                                    (config.time.t0, config.time.t1), spec.radius)
    bijection = crossing_peak_bijection(spectrum, crossings, 2.0 * config.time.spacing)

    tables = {
        "recurrence": [{"t": t, "P": p} for t, p in zip(spectrum.t, spectrum.P)],
        "recurrence_peaks": [{"t_peak": p.t, "height": p.height, "prominence": p.prominence}
                             for p in spectrum.peaks],
        "recurrence_crossings": [{"t": c.t, "branch": c.branch, "distance": c.distance}
                                 for c in crossings],
    }
    summary = {"spectrum": spectrum.to_dict(), "bijection": bijection.to_dict()}
    return CommandResult(Command.RECURRENCE, tables, summary)


def _textbook_action(m: float, omega: float, x1: np.ndarray, x0: np.ndarray, T: float) -> np.ndarray:
    return m * omega / (2.0 * np.sin(omega * T)) * ((x1 ** 2 + x0 ** 2) * np.cos(omega * T) - 2.0 * x1 * x0)


def run_propagator_check(config: ScenarioConfig, threads: int) -> CommandResult:
    spec = config.propagator_check
    _require_inside(config, "propagator_check.t0", [spec.t0])
    if not spec.t1 > spec.t0:
        raise ValidationError("propagator_check.t1 must exceed t0",
                              {"violations": [{"loc": "propagator_check.t1", "msg": "t1 <= t0",
                                               "type": "range"}]})
    state = build_state(config, spec.t1)
    branch = state.branches[0]
    params = state.params
    x = np.linspace(spec.x_range[0], spec.x_range[1], spec.n_points)

    rows: Rows = []
    for axis in AXES:
        reproduced = reproduce_wavefunction(branch, branch.traj, axis, x, spec.t1, spec.t0)
        exact = branch.axis_value(axis, x, spec.t1)
        max_error = float(np.max(np.abs(reproduced - exact)))
        drive = params.axis(axis)
        static_error: Optional[float] = None
        if drive.is_static:
            X1, X0 = np.meshgrid(x, x, indexing="ij")
            ours = classical_action(branch.traj, axis, X1, X0, spec.t1, spec.t0)
            ref = _textbook_action(params.mass, np.sqrt(drive.v), X1, X0, spec.t1 - spec.t0)
            static_error = float(np.max(np.abs(ours - ref)))
        rows.append({"axis": axis.value, "t0": spec.t0, "t1": spec.t1,
                     "max_error": max_error, "static_action_error": static_error})

    summary = {"branch": branch.label, "max_error": max(r["max_error"] for r in rows)}
    return CommandResult(Command.PROPAGATOR_CHECK, {"propagator_check": rows}, summary)


def run_identity_check(config: ScenarioConfig, threads: int) -> CommandResult:
    times = list(config.identity.times)
    _require_inside(config, "identity.times", times)
    state = build_state(config, max(times))
    rows: Rows = []
    for t in times:
        for observable in Observable:
            res = expectation_identity_check(state, t, observable)
            rows.append({
                "t": t, "observable": observable.value,
                "direct_x": res.direct[0], "direct_y": res.direct[1],
                "weak_x": res.weak[0], "weak_y": res.weak[1], "residual": res.residual,
            })
    summary = {"max_residual": max(r["residual"] for r in rows)}
    return CommandResult(Command.IDENTITY_CHECK, {"identity": rows}, summary)


COMMANDS: Dict[Command, Callable[[ScenarioConfig, int], CommandResult]] = {
    Command.SIMULATE: run_simulate,
    Command.BOHM: run_bohm,
    Command.ENSEMBLE: run_ensemble_command,
    Command.WEAK_TRAJ: run_weak_traj,
    Command.WEAK_MOMENTUM: run_weak_momentum,
    Command.RECURRENCE: run_recurrence,
    Command.PROPAGATOR_CHECK: run_propagator_check,
    Command.IDENTITY_CHECK: run_identity_check,
}
