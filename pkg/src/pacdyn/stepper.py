"""Time integration of the projected gradient flow.

One implicit convex-splitting step solves the coupled linear system

    (I + dt * Gamma * P * A_c) x = x_old + dt * Gamma * P * e(x_old)

over the combined (interior ⊕ chain) unknown, where A_c is the implicit
operator from :mod:`pacdyn.model`, e the explicit part, P the blockwise
mean-subtracting projection and Gamma the blockwise relaxation rates.  The
system is solved matrix-free with conjugate gradients.

Why CG applies: blockwise means are fixed points of the system operator
(the projected term has zero blockwise mean), so with an initial guess
whose means match the right-hand side all iterates stay in an affine space
on which the operator is self-adjoint positive definite in the inner
product weighted by (quadrature weight / gamma) per block.  Warm-starting
from the previous solution keeps iteration counts low near steady state.

An explicit Euler stepper of the same flow is provided purely as a
cross-validation oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import grid, model, projection
from .errors import StepSolveError
from .grid import Field, GridSpec
from .model import ModelParams, SurfacePotentialSpec


@dataclass(frozen=True)
class StepperConfig:
    """Time step, solver targets, and the stability monitor bound."""

    dt: float
    linear_tol: float = 1e-11
    linear_max_iter: int | None = None  # None means 10 * unknown count
    steady_tol: float = 1e-6
    max_steps: int = 10_000
    field_bound: float = 8.0

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if not 0.0 < self.linear_tol < 1.0:
            raise ValueError(f"linear_tol must lie in (0, 1), got {self.linear_tol}")
        if self.steady_tol <= 0.0:
            raise ValueError(f"steady_tol must be positive, got {self.steady_tol}")
        if self.max_steps < 0:
            raise ValueError(f"max_steps must be >= 0, got {self.max_steps}")


@dataclass(frozen=True, eq=False)
class RunState:
    """Immutable snapshot of the evolving solution (t = n * dt)."""

    u: Field
    t: float
    n: int
    bound_exceeded: bool = False


@dataclass
class LinearSolveStats:
    iterations: int
    residual: float  # relative, in the weighted norm
    converged: bool


@dataclass(frozen=True, eq=False)
class SchemeIncrement:
    """The bracketed implicit+explicit sums driving one step.

    nu_bulk / nu_chain collect -(A_c applied to the new state) plus the
    explicit part of the old state, blockwise; the step update is exactly
    x_new - x_old = dt * Gamma * P * nu, which makes the energy-decay
    argument a two-line inner-product computation.
    """

    nu_bulk: np.ndarray
    nu_chain: np.ndarray


def scheme_increment(
    g: GridSpec,
    p: ModelParams,
    s: SurfacePotentialSpec,
    x_old: np.ndarray,
    x_new: np.ndarray,
) -> SchemeIncrement:
    nu = model.explicit_part(g, p, s, x_old) - model.convex_split_apply(g, p, x_new)
    nu_bulk, nu_chain = grid.split_vector(g, nu)
    return SchemeIncrement(nu_bulk=nu_bulk, nu_chain=nu_chain)


def _solver_weights(g: GridSpec, p: ModelParams) -> np.ndarray:
    """Per-component weights (quadrature weight / gamma) of the CG inner product."""
    wi = np.full(g.num_interior, g.h * g.h / p.gamma1)
    wc = np.full(g.num_chain, g.h / p.gamma2)
    return np.concatenate([wi, wc])


def _gamma_project(g: GridSpec, p: ModelParams, x: np.ndarray) -> np.ndarray:
    xi, xc = grid.split_vector(g, x)
    return np.concatenate(
        [p.gamma1 * projection.project_bulk(g, xi), p.gamma2 * projection.project_boundary(g, xc)]
    )


def apply_system_operator(
    g: GridSpec, p: ModelParams, cfg: StepperConfig, x: np.ndarray
) -> np.ndarray:
    """Matrix-free application of I + dt * Gamma * P * A_c."""
    return x + cfg.dt * _gamma_project(g, p, model.convex_split_apply(g, p, x))


def solve_linear(
    apply_op: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    *,
    weights: np.ndarray,
    tol: float,
    max_iter: int,
    x0: np.ndarray | None = None,
) -> tuple[np.ndarray, LinearSolveStats]:
    """Conjugate gradients in the weighted inner product <a, b> = sum w a b.

    Convergence is declared on the true (recomputed) relative residual, so
    ``converged`` implies residual <= tol.  Deterministic for fixed inputs.
    """

    def wdot(a, b):
        return float(np.dot(weights * a, b))

    x = rhs.copy() if x0 is None else np.array(x0, dtype=float)
    r = rhs - apply_op(x)
    bnorm = np.sqrt(wdot(rhs, rhs))
    if bnorm == 0.0:
        return np.zeros_like(rhs), LinearSolveStats(0, 0.0, True)

    rs = wdot(r, r)
    p_dir = r.copy()
    iters = 0
    while iters < max_iter:
        rel = np.sqrt(rs) / bnorm
        if rel <= tol:
            # guard against recurrence drift before declaring victory
            r = rhs - apply_op(x)
            rs = wdot(r, r)
            if np.sqrt(rs) / bnorm <= tol:
                return x, LinearSolveStats(iters, np.sqrt(rs) / bnorm, True)
            p_dir = r.copy()
        ap = apply_op(p_dir)
        alpha = rs / wdot(p_dir, ap)
        x = x + alpha * p_dir
        r = r - alpha * ap
        rs_new = wdot(r, r)
        p_dir = r + (rs_new / rs) * p_dir
        rs = rs_new
        iters += 1

    r = rhs - apply_op(x)
    rel = np.sqrt(wdot(r, r)) / bnorm
    return x, LinearSolveStats(iters, rel, rel <= tol)


def step_convex_splitting(
    state: RunState,
    g: GridSpec,
    p: ModelParams,
    s: SurfacePotentialSpec,
    cfg: StepperConfig,
) -> tuple[RunState, LinearSolveStats]:
    """One unconditionally energy-stable implicit step.

    Raises :class:`StepSolveError` if the linear solve does not reach
    ``cfg.linear_tol`` within the iteration cap.  Exceeding the field bound
    only flags the returned state; it is not an error.
    """
    x_old = grid.field_to_vector(g, state.u)
    rhs = x_old + cfg.dt * _gamma_project(g, p, model.explicit_part(g, p, s, x_old))

    # Blockwise means are untouched by CG; pin the warm start's means to the
    # right-hand side's so the affine solution space is exact.
    ni = g.num_interior
    x0 = x_old.copy()
    x0[:ni] += grid.bulk_mean(g, rhs[:ni]) - grid.bulk_mean(g, x0[:ni])
    x0[ni:] += grid.boundary_mean(g, rhs[ni:]) - grid.boundary_mean(g, x0[ni:])

    max_iter = cfg.linear_max_iter or 10 * x_old.size
    x_new, stats = solve_linear(
        lambda vec: apply_system_operator(g, p, cfg, vec),
        rhs,
        weights=_solver_weights(g, p),
        tol=cfg.linear_tol,
        max_iter=max_iter,
        x0=x0,
    )
    if not stats.converged:
        raise StepSolveError(
            f"linear solve stalled at relative residual {stats.residual:.3e} "
            f"after {stats.iterations} iterations (tol {cfg.linear_tol:.1e})",
            stats=stats,
        )

    u_new = grid.vector_to_field(g, x_new)
    flagged = bool(np.max(np.abs(u_new)) > cfg.field_bound)
    new_state = RunState(u=u_new, t=state.t + cfg.dt, n=state.n + 1, bound_exceeded=flagged)
    return new_state, stats


def step_explicit_euler(
    state: RunState,
    g: GridSpec,
    p: ModelParams,
    s: SurfacePotentialSpec,
    dt: float,
) -> RunState:
    """Forward Euler on the projected flow; cross-validation oracle only.

    No stability safeguard: the caller owns the step size restriction.
    """
    x = grid.field_to_vector(g, state.u)
    x_new = x - dt * _gamma_project(g, p, model.chemical_potential_vector(g, p, s, x))
    return RunState(u=grid.vector_to_field(g, x_new), t=state.t + dt, n=state.n + 1)


def steady_residual(
    state: RunState, g: GridSpec, p: ModelParams, s: SurfacePotentialSpec
) -> float:
    """Sup norm of the projected chemical potentials.

    Zero exactly when mu is constant over the interior and mu_gamma constant
    along the chain, i.e. at constrained critical points of the energy;
    invariant under the time step size.
    """
    mu, mu_g = model.chemical_potentials(g, p, s, state.u)
    ri = np.max(np.abs(projection.project_bulk(g, mu.ravel())))
    rc = np.max(np.abs(projection.project_boundary(g, mu_g)))
    return float(max(ri, rc))
