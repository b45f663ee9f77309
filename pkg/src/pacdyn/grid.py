"""Vertex-centered discretization of the unit square and its boundary loop.

The domain is Omega = [0,1]^2 with N cells per side, h = 1/N, and (N+1)^2
vertices.  A field is stored as a (N+1, N+1) float array ``u`` with the
convention

    u[j, i] = value at (x, y) = (i*h, j*h),

so row j is the horizontal line y = j*h (this is also the row order of the
snapshot files).  The boundary Gamma is represented by the closed chain of
the 4N perimeter nodes, ordered counterclockwise starting at (0, 0); the
trace of a field lives on this chain.  Boundary nodes carry the surface
unknown directly, which makes the trace identification exact rather than
interpolated.

Quadrature is trapezoidal throughout: bulk node weights h^2 / h^2/2 / h^2/4
(interior / edge / corner), chain node weights h, and edge weights h^2 for
grid edges with at least one interior endpoint and h^2/2 for edges lying on
Gamma.  All constant-field integrals are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidGridError

Field = np.ndarray          # shape (N+1, N+1)
BoundaryField = np.ndarray  # shape (4N,), chain order


@dataclass(frozen=True, eq=False)
class GridSpec:
    """Immutable description of the grid; safe to share across threads."""

    n: int
    h: float
    node_weights: np.ndarray      # (N+1, N+1) trapezoidal bulk weights
    chain_rows: np.ndarray        # (4N,) j index of each chain node, ccw from (0,0)
    chain_cols: np.ndarray        # (4N,) i index of each chain node
    boundary_weights: np.ndarray  # (4N,) uniform h
    edge_weight_x: np.ndarray     # (N+1, N): weight of edge (i,j)-(i+1,j), indexed [j, i]
    edge_weight_y: np.ndarray     # (N, N+1): weight of edge (i,j)-(i,j+1), indexed [j, i]

    @property
    def num_nodes(self) -> int:
        return (self.n + 1) ** 2

    @property
    def num_interior(self) -> int:
        return (self.n - 1) ** 2

    @property
    def num_chain(self) -> int:
        return 4 * self.n

    @property
    def interior_weights(self) -> np.ndarray:
        return self.node_weights[1:-1, 1:-1]


def build_grid(n: int) -> GridSpec:
    """Build the grid for ``n`` cells per side (n >= 4).

    Node ordering is deterministic: row-major for the full grid (y-major,
    matching the array layout) and counterclockwise from (0,0) for the
    boundary chain.
    """
    if int(n) != n:
        raise InvalidGridError(f"cells per side must be an integer, got {n!r}")
    n = int(n)
    if n < 4:
        raise InvalidGridError(f"need at least 4 cells per side, got {n}")
    h = 1.0 / n

    w = np.full((n + 1, n + 1), h * h)
    w[[0, -1], :] /= 2.0
    w[:, [0, -1]] /= 2.0  # corners end up at h^2/4

    k = np.arange(n)
    chain_rows = np.concatenate([np.zeros(n, int), k, np.full(n, n), n - k])
    chain_cols = np.concatenate([k, np.full(n, n), n - k, np.zeros(n, int)])

    wx = np.full((n + 1, n), h * h)
    wx[[0, -1], :] /= 2.0  # x-edges lying on the bottom/top side of Gamma
    wy = np.full((n, n + 1), h * h)
    wy[:, [0, -1]] /= 2.0  # y-edges lying on the left/right side of Gamma

    return GridSpec(
        n=n,
        h=h,
        node_weights=w,
        chain_rows=chain_rows,
        chain_cols=chain_cols,
        boundary_weights=np.full(4 * n, h),
        edge_weight_x=wx,
        edge_weight_y=wy,
    )


def node_coordinates(g: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """(X, Y) coordinate arrays with the same [j, i] layout as fields."""
    xs = np.linspace(0.0, 1.0, g.n + 1)
    return np.meshgrid(xs, xs)


def _check_field(g: GridSpec, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (g.n + 1, g.n + 1):
        raise DimensionMismatchError(
            f"expected field of shape {(g.n + 1, g.n + 1)}, got {u.shape}"
        )
    return u


def _check_boundary(g: GridSpec, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.shape != (4 * g.n,):
        raise DimensionMismatchError(
            f"expected boundary field of length {4 * g.n}, got shape {v.shape}"
        )
    return v


def laplacian_bulk(g: GridSpec, u: Field) -> np.ndarray:
    """Five-point Laplacian on the (n-1)^2 interior nodes.

    Boundary values of ``u`` supply the stencil neighbors, so the result is
    exact for polynomials of degree <= 2 in x and y separately.
    """
    u = _check_field(g, u)
    return (
        u[1:-1, 2:] + u[1:-1, :-2] + u[2:, 1:-1] + u[:-2, 1:-1] - 4.0 * u[1:-1, 1:-1]
    ) / (g.h * g.h)


def laplacian_boundary(g: GridSpec, v: BoundaryField) -> BoundaryField:
    """Cyclic second difference along the boundary chain (corners included)."""
    v = _check_boundary(g, v)
    return (np.roll(v, -1) + np.roll(v, 1) - 2.0 * v) / (g.h * g.h)


def normal_derivative(g: GridSpec, u: Field) -> BoundaryField:
    """Outward normal derivative on the chain, for diagnostics only.

    Second-order one-sided difference (3*u0 - 4*u1 + u2) / (2h) along the
    inward grid line, negated so it points outward; each corner gets the
    average of its two edge-normal values.
    """
    u = _check_field(g, u)
    n, h = g.n, g.h

    def one_sided(u0, u1, u2):
        return (3.0 * u0 - 4.0 * u1 + u2) / (2.0 * h)

    out = np.empty(4 * n)
    k = np.arange(n)
    # bottom (j = 0), right (i = n), top (j = n), left (i = 0); same ccw
    # segments as the chain construction.
    out[0:n] = one_sided(u[0, k], u[1, k], u[2, k])
    out[n : 2 * n] = one_sided(u[k, n], u[k, n - 1], u[k, n - 2])
    out[2 * n : 3 * n] = one_sided(u[n, n - k], u[n - 1, n - k], u[n - 2, n - k])
    out[3 * n : 4 * n] = one_sided(u[n - k, 0], u[n - k, 1], u[n - k, 2])

    corner_other = {
        0: one_sided(u[0, 0], u[0, 1], u[0, 2]),          # (0,0): x-direction value
        n: one_sided(u[0, n], u[1, n], u[2, n]),          # (1,0): y-direction value
        2 * n: one_sided(u[n, n], u[n, n - 1], u[n, n - 2]),  # (1,1)
        3 * n: one_sided(u[n, 0], u[n - 1, 0], u[n - 2, 0]),  # (0,1)
    }
    for pos, other in corner_other.items():
        out[pos] = 0.5 * (out[pos] + other)
    return out


def trace(g: GridSpec, u: Field) -> BoundaryField:
    """Perimeter values of ``u`` in chain order."""
    u = _check_field(g, u)
    return u[g.chain_rows, g.chain_cols].copy()


def inject(g: GridSpec, u: Field, v: BoundaryField) -> Field:
    """Copy of ``u`` with its perimeter overwritten by ``v`` (chain order)."""
    u = _check_field(g, u)
    v = _check_boundary(g, v)
    out = u.copy()
    out[g.chain_rows, g.chain_cols] = v
    return out


def bulk_mean(g: GridSpec, interior: np.ndarray) -> float:
    """Quadrature-weighted mean over the interior nodes only."""
    interior = np.asarray(interior, dtype=float)
    if interior.size != g.num_interior:
        raise DimensionMismatchError(
            f"expected {g.num_interior} interior values, got {interior.size}"
        )
    w = g.interior_weights.ravel()
    return float(np.dot(w, interior.ravel()) / w.sum())


def boundary_mean(g: GridSpec, v: BoundaryField) -> float:
    """Chain-weighted mean over the boundary nodes."""
    v = _check_boundary(g, v)
    return float(np.dot(g.boundary_weights, v) / g.boundary_weights.sum())


# ---------------------------------------------------------------------------
# Combined (interior ⊕ chain) vector layout used by the implicit solver.
# Every grid node is either interior or on the chain, so the pair is a
# bijective re-indexing of the full field.

def field_to_vector(g: GridSpec, u: Field) -> np.ndarray:
    """Flatten a field into [interior (row-major), chain (ccw)] order."""
    u = _check_field(g, u)
    return np.concatenate([u[1:-1, 1:-1].ravel(), u[g.chain_rows, g.chain_cols]])


def vector_to_field(g: GridSpec, x: np.ndarray) -> Field:
    """Inverse of :func:`field_to_vector`."""
    x = np.asarray(x, dtype=float)
    ni = g.num_interior
    if x.shape != (ni + g.num_chain,):
        raise DimensionMismatchError(
            f"expected combined vector of length {ni + g.num_chain}, got {x.shape}"
        )
    u = np.empty((g.n + 1, g.n + 1))
    u[1:-1, 1:-1] = x[:ni].reshape(g.n - 1, g.n - 1)
    u[g.chain_rows, g.chain_cols] = x[ni:]
    return u


def split_vector(g: GridSpec, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ni = g.num_interior
    return x[:ni], x[ni:]
