"""End-to-end run loop: integrate until steady or the step cap.

The loop is strictly sequential; states are immutable snapshots, so the
snapshot callback may hand them to another thread without synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import diagnostics, experiments, stepper
from .diagnostics import DiagRecord
from .errors import StepSolveError
from .experiments import RunConfig
from .stepper import RunState

EXIT_STEADY = "steady"
EXIT_MAX_STEPS = "max_steps"
EXIT_ERROR = "error"


@dataclass
class RunResult:
    state: RunState
    records: list[DiagRecord]
    exit_reason: str
    snapshot_steps: list[int]
    error: StepSolveError | None = None
    bound_exceeded: bool = False


def run(
    config: RunConfig,
    on_record: Callable[[DiagRecord], None] | None = None,
    on_snapshot: Callable[[RunState], None] | None = None,
) -> RunResult:
    """Integrate the configured experiment with the implicit stepper.

    A diagnostic record is emitted for every step (step 0 included); a
    snapshot is emitted at step 0, every ``snapshot_every`` steps, and at
    the final step.  A failed linear solve ends the run with exit reason
    "error" and the partial series preserved.
    """
    g, p, s, scfg, u0 = experiments.build_setup(config)
    state = RunState(u=u0, t=0.0, n=0)

    records: list[DiagRecord] = []
    snapshot_steps: list[int] = []
    bound_flagged = False

    def emit_record(rec: DiagRecord) -> None:
        records.append(rec)
        if on_record is not None:
            on_record(rec)

    def emit_snapshot(st: RunState) -> None:
        snapshot_steps.append(st.n)
        if on_snapshot is not None:
            on_snapshot(st)

    emit_record(diagnostics.record(state, g, p, s, solver_iterations=0))
    emit_snapshot(state)

    exit_reason = EXIT_MAX_STEPS
    error: StepSolveError | None = None
    for _ in range(scfg.max_steps):
        try:
            state, stats = stepper.step_convex_splitting(state, g, p, s, scfg)
        except StepSolveError as exc:
            exit_reason = EXIT_ERROR
            error = exc
            break
        bound_flagged = bound_flagged or state.bound_exceeded
        rec = diagnostics.record(state, g, p, s, solver_iterations=stats.iterations)
        emit_record(rec)
        if state.n % config.snapshot_every == 0:
            emit_snapshot(state)
        if rec.steady_residual <= scfg.steady_tol:
            exit_reason = EXIT_STEADY
            break

    if state.n not in snapshot_steps and exit_reason != EXIT_ERROR:
        emit_snapshot(state)

    return RunResult(
        state=state,
        records=records,
        exit_reason=exit_reason,
        snapshot_steps=snapshot_steps,
        error=error,
        bound_exceeded=bound_flagged,
    )
