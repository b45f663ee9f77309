"""Mass/energy bookkeeping and steady-state interface metrics.

All functions are pure; re-recording a state yields identical values.  The
mass fields are the same weighted means the stepper conserves (interior
mean for the bulk, chain mean for the trace).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import grid, model, stepper
from .errors import MetricUndefinedError
from .grid import GridSpec
from .model import ModelParams, SurfacePotentialSpec
from .stepper import RunState

# Per-step slack allowed before an energy increase counts as a violation.
ENERGY_DECAY_SLACK = 1e-10


@dataclass(frozen=True)
class DiagRecord:
    step: int
    time: float
    mass_bulk: float
    mass_surf: float
    energy_bulk: float
    energy_surf: float
    energy_total: float
    steady_residual: float
    solver_iterations: int


def record(
    state: RunState,
    g: GridSpec,
    p: ModelParams,
    s: SurfacePotentialSpec,
    solver_iterations: int = 0,
) -> DiagRecord:
    """Audit one state: masses, energies, and the projected residual."""
    e_bulk, e_surf, e_total = model.discrete_energy(g, p, s, state.u)
    return DiagRecord(
        step=state.n,
        time=state.t,
        mass_bulk=grid.bulk_mean(g, state.u[1:-1, 1:-1]),
        mass_surf=grid.boundary_mean(g, grid.trace(g, state.u)),
        energy_bulk=e_bulk,
        energy_surf=e_surf,
        energy_total=e_total,
        steady_residual=stepper.steady_residual(state, g, p, s),
        solver_iterations=solver_iterations,
    )


def audit_energy_decay(series: Sequence[DiagRecord]) -> list[int]:
    """Steps whose energy exceeds the previous one beyond the slack.

    Returns the ``step`` value of each violating record; an empty list means
    the series is nonincreasing up to slack ENERGY_DECAY_SLACK * (1 + |E|).
    """
    if len(series) == 0:
        raise ValueError("empty diagnostic series")
    bad = []
    for prev, cur in zip(series, series[1:]):
        if cur.energy_total > prev.energy_total + ENERGY_DECAY_SLACK * (
            1.0 + abs(prev.energy_total)
        ):
            bad.append(cur.step)
    return bad


def _axis_crossings(g: GridSpec, u: np.ndarray) -> list[tuple[float, float]]:
    """Sub-grid zero crossings of u along all grid rows and columns."""
    h = g.h
    pts = []
    for j in range(g.n + 1):
        row = u[j, :]
        for i in np.nonzero(row[:-1] * row[1:] < 0.0)[0]:
            t = row[i] / (row[i] - row[i + 1])
            pts.append(((i + t) * h, j * h))
    for i in range(g.n + 1):
        col = u[:, i]
        for j in np.nonzero(col[:-1] * col[1:] < 0.0)[0]:
            t = col[j] / (col[j] - col[j + 1])
            pts.append((i * h, (j + t) * h))
    return pts


def zero_level_radius_stats(state: RunState, g: GridSpec) -> tuple[float, float]:
    """Circularity of the zero level set around the domain center.

    Locates zero crossings by linear interpolation along grid rows and
    columns and measures their distances to (0.5, 0.5); returns the mean
    radius and the largest absolute deviation from it (domain lengths).
    """
    pts = _axis_crossings(g, state.u)
    if not pts:
        raise MetricUndefinedError("field has no zero level set")
    d = np.hypot(
        np.array([x for x, _ in pts]) - 0.5, np.array([y for _, y in pts]) - 0.5
    )
    mean = float(d.mean())
    return mean, float(np.max(np.abs(d - mean)))


def _row_crossings(u_row: np.ndarray, h: float) -> list[tuple[float, bool]]:
    """(x, rising) zero crossings along one grid row."""
    out = []
    for i in np.nonzero(u_row[:-1] * u_row[1:] < 0.0)[0]:
        t = u_row[i] / (u_row[i] - u_row[i + 1])
        out.append(((i + t) * h, u_row[i + 1] > u_row[i]))
    return out


def contact_angle(state: RunState, g: GridSpec, edge: str = "bottom") -> float:
    """Angle (degrees) between the zero contour and the bottom wall.

    Per contact side, the sub-grid contour crossing of each of the first
    five interior rows is collected (the leftmost rising crossing for the
    left contact line, the rightmost falling one for the right), a
    quadratic x(y) is fitted through them, and the angle of its tangent at
    the wall is measured through the positive phase.  The tangent at y = 0
    rather than the mean slope is used because steady caps are strongly
    curved over the five-row window, which would otherwise bias small
    angles up and large ones down by 10 degrees or more.  The available
    sides are averaged (a droplet contributes both contact points, a
    single tilted interface just one).
    """
    if edge != "bottom":
        raise ValueError(f"only the bottom edge is supported, got {edge!r}")
    left: list[tuple[float, float]] = []   # (y, x) along the left contact line
    right: list[tuple[float, float]] = []
    for j in range(1, min(5, g.n - 1) + 1):
        crossings = _row_crossings(state.u[j, :], g.h)
        ups = [x for x, up in crossings if up]
        downs = [x for x, up in crossings if not up]
        if ups:
            left.append((j * g.h, ups[0]))
        if downs:
            right.append((j * g.h, downs[-1]))

    angles = []
    for pts, into_positive in ((left, +1.0), (right, -1.0)):
        if len(pts) < 2:
            continue
        ys = np.array([y for y, _ in pts])
        xs = np.array([x for _, x in pts])
        coeffs = np.polyfit(ys, xs, 2 if len(pts) >= 3 else 1)
        slope_at_wall = np.polyder(np.poly1d(coeffs))(0.0)
        angles.append(np.degrees(np.arctan2(1.0, into_positive * slope_at_wall)))
    if not angles:
        raise MetricUndefinedError("no zero contour meets the bottom edge")
    return float(np.mean(angles))


def droplet_base_width(state: RunState, g: GridSpec) -> float:
    """Distance between the outermost zero crossings on the row y = h."""
    crossings = _row_crossings(state.u[1, :], g.h)
    if len(crossings) < 2:
        raise MetricUndefinedError("row y=h has fewer than two zero crossings")
    xs = [x for x, _ in crossings]
    return float(max(xs) - min(xs))
