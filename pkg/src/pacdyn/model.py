"""Potentials, discrete energies, chemical potentials, and the convex split.

The discrete total energy is

    E(u) = sum_edges  w_e * (kappa^2/2) * (du/h)^2      (bulk, forward diffs)
         + sum_nodes  w_n * F(u_n)                      (bulk double well)
         + sum_chain_edges h * (kappa^2/2) * (dv/h)^2   (surface)
         + sum_chain  h * G(v_k)                        (surface potential)

with v the boundary trace of u.  The chemical potentials are *defined* as
the exact weighted gradient of E:

    mu_n     = (1/w_n) dE/du_n   on interior nodes,
    mu_gam_k = (1/h)   dE/du_k   on chain nodes.

On interior nodes this reproduces the five-point -kappa^2*lap(u) + f(u)
identically; on the chain it produces the tangential second difference, the
surface potential derivative, and the normal-coupling term automatically
from the bulk edge terms that touch the boundary (no corner normal is ever
needed).  Because the potentials are exact gradients, the time-discrete
scheme inherits mass conservation and energy decay from the continuous
arguments with no truncation-error caveats.

The convex split writes E = E_c - E_e with E_c the quadratic part
(gradient terms plus S/2 * u^2, both convex) and E_e = S/2 * u^2 minus the
potential, convex wherever S >= (3*M^2 - 1)/2 bounds the field by M.  The
surface split uses the same structure for both the double-well and the
contact-line potential (the latter has bounded curvature, so S_2 dominates
it outright).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import grid
from .errors import PacdynError
from .grid import Field, GridSpec

SURFACE_DOUBLE_WELL = "double_well"
SURFACE_MOVING_CONTACT_LINE = "moving_contact_line"


@dataclass(frozen=True)
class SurfacePotentialSpec:
    """Selects the surface potential G.

    ``double_well``: G(v) = (v^2-1)^2 / 4.
    ``moving_contact_line``: G(v) = -(gamma_tilde/2) cos(theta_s) sin(pi v / 2)
    with theta_s the static contact angle in degrees.
    """

    variant: str = SURFACE_DOUBLE_WELL
    theta_s_deg: float = 90.0
    gamma_tilde: float = 1.0

    def __post_init__(self):
        if self.variant not in (SURFACE_DOUBLE_WELL, SURFACE_MOVING_CONTACT_LINE):
            raise PacdynError(f"unknown surface potential variant {self.variant!r}")
        if not 0.0 < self.theta_s_deg < 180.0:
            raise PacdynError(
                f"contact angle must lie in (0, 180) degrees, got {self.theta_s_deg}"
            )
        if self.gamma_tilde <= 0.0:
            raise PacdynError(f"gamma_tilde must be positive, got {self.gamma_tilde}")

    @classmethod
    def double_well(cls) -> "SurfacePotentialSpec":
        return cls(variant=SURFACE_DOUBLE_WELL)

    @classmethod
    def moving_contact_line(cls, theta_s_deg: float, gamma_tilde: float = 1.0):
        return cls(
            variant=SURFACE_MOVING_CONTACT_LINE,
            theta_s_deg=theta_s_deg,
            gamma_tilde=gamma_tilde,
        )


@dataclass(frozen=True)
class ModelParams:
    """Physical and stabilization constants.

    kappa is the interface width, gamma1/gamma2 the bulk/surface relaxation
    rates, S1/S2 the convex-splitting stabilization constants.
    """

    kappa: float
    gamma1: float = 100.0
    gamma2: float = 100.0
    S1: float = 100.0
    S2: float = 100.0

    def __post_init__(self):
        for name in ("kappa", "gamma1", "gamma2", "S1", "S2"):
            if getattr(self, name) <= 0.0:
                raise PacdynError(f"{name} must be positive, got {getattr(self, name)}")


def stability_field_bound(p: ModelParams) -> float:
    """Largest field bound M for which energy decay is guaranteed.

    The decay proof needs S >= (3*M^2 - 1)/2 for fields bounded by M, so
    M = sqrt((2*S + 1)/3) with S = min(S1, S2).  S1 = S2 = 100 gives
    M ~ 8.2, far outside the physical range [-1, 1].
    """
    s = min(p.S1, p.S2)
    return math.sqrt((2.0 * s + 1.0) / 3.0)


def check_field_bound(p: ModelParams, m: float) -> bool:
    """True when S1, S2 satisfy S >= (3*M^2 - 1)/2 for the monitor bound."""
    need = (3.0 * m * m - 1.0) / 2.0
    return p.S1 >= need and p.S2 >= need


def bulk_potential(phi):
    """Double well F(phi) = (phi^2-1)^2/4 and its derivative f = phi^3 - phi."""
    phi = np.asarray(phi, dtype=float)
    q = phi * phi - 1.0
    return 0.25 * q * q, phi * q


def surface_potential(spec: SurfacePotentialSpec, psi):
    """Surface potential G and its derivative g for the chosen variant."""
    psi = np.asarray(psi, dtype=float)
    if spec.variant == SURFACE_DOUBLE_WELL:
        q = psi * psi - 1.0
        return 0.25 * q * q, psi * q
    c = spec.gamma_tilde * math.cos(math.radians(spec.theta_s_deg))
    arg = 0.5 * math.pi * psi
    return -0.5 * c * np.sin(arg), -0.25 * math.pi * c * np.cos(arg)


def _gradient_energy_terms(g: GridSpec, p: ModelParams, u: Field):
    """Forward differences and per-edge weights of the gradient energies."""
    dx = u[:, 1:] - u[:, :-1]
    dy = u[1:, :] - u[:-1, :]
    v = u[g.chain_rows, g.chain_cols]
    dv = np.roll(v, -1) - v
    return dx, dy, v, dv


def discrete_energy(
    g: GridSpec, p: ModelParams, s: SurfacePotentialSpec, u: Field
) -> tuple[float, float, float]:
    """(bulk, surface, total) energy of the field ``u`` (trace included)."""
    u = grid._check_field(g, u)
    dx, dy, v, dv = _gradient_energy_terms(g, p, u)
    k2h2 = 0.5 * p.kappa**2 / (g.h * g.h)

    big_f, _ = bulk_potential(u)
    e_bulk = k2h2 * (
        np.sum(g.edge_weight_x * dx * dx) + np.sum(g.edge_weight_y * dy * dy)
    ) + np.sum(g.node_weights * big_f)

    big_g, _ = surface_potential(s, v)
    e_surf = 0.5 * p.kappa**2 / g.h * np.sum(dv * dv) + g.h * np.sum(big_g)
    return float(e_bulk), float(e_surf), float(e_bulk + e_surf)


def _scatter_gradient_quadratic(g: GridSpec, kappa: float, u: Field) -> Field:
    """d/du of both kappa^2-gradient energies, as a full-grid array."""
    k2h2 = kappa**2 / (g.h * g.h)
    out = np.zeros_like(u)

    gx = k2h2 * g.edge_weight_x * (u[:, 1:] - u[:, :-1])
    out[:, 1:] += gx
    out[:, :-1] -= gx
    gy = k2h2 * g.edge_weight_y * (u[1:, :] - u[:-1, :])
    out[1:, :] += gy
    out[:-1, :] -= gy

    v = u[g.chain_rows, g.chain_cols]
    ring = (kappa**2 / g.h) * (2.0 * v - np.roll(v, 1) - np.roll(v, -1))
    out[g.chain_rows, g.chain_cols] += ring
    return out


def _weighted(g: GridSpec, grad: Field) -> np.ndarray:
    """Divide a full-grid dE/du array by the node ownership weights."""
    interior = grad[1:-1, 1:-1] / g.interior_weights
    chain = grad[g.chain_rows, g.chain_cols] / g.h
    return np.concatenate([interior.ravel(), chain])


def chemical_potentials(
    g: GridSpec, p: ModelParams, s: SurfacePotentialSpec, u: Field
) -> tuple[np.ndarray, np.ndarray]:
    """Exact weighted gradient of the discrete energy.

    Returns (mu on interior nodes as an (n-1, n-1) array, mu_gamma on the
    chain).  The normal-coupling term in mu_gamma arises from the bulk edge
    terms touching the boundary; nothing is discretized twice.
    """
    u = grid._check_field(g, u)
    grad = _scatter_gradient_quadratic(g, p.kappa, u)
    _, f = bulk_potential(u)
    grad += g.node_weights * f
    v = u[g.chain_rows, g.chain_cols]
    _, gv = surface_potential(s, v)
    grad[g.chain_rows, g.chain_cols] += g.h * gv

    x = _weighted(g, grad)
    ni = g.num_interior
    return x[:ni].reshape(g.n - 1, g.n - 1), x[ni:]


def chemical_potential_vector(
    g: GridSpec, p: ModelParams, s: SurfacePotentialSpec, x: np.ndarray
) -> np.ndarray:
    """Combined-vector form of :func:`chemical_potentials`."""
    mu, mu_g = chemical_potentials(g, p, s, grid.vector_to_field(g, x))
    return np.concatenate([mu.ravel(), mu_g])


def convex_split_apply(g: GridSpec, p: ModelParams, x: np.ndarray) -> np.ndarray:
    """Implicit operator: weighted gradient of the quadratic part of E_c.

    Acts on a combined (interior ⊕ chain) vector and returns one; linear,
    self-adjoint and positive in the weight-induced inner product.  The
    cross couplings between interior and chain come from the shared kappa^2
    edge terms.
    """
    u = grid.vector_to_field(g, x)
    grad = _scatter_gradient_quadratic(g, p.kappa, u)
    grad += p.S1 * g.node_weights * u
    v = u[g.chain_rows, g.chain_cols]
    grad[g.chain_rows, g.chain_cols] += g.h * p.S2 * v
    return _weighted(g, grad)


def explicit_part(
    g: GridSpec, p: ModelParams, s: SurfacePotentialSpec, x: np.ndarray
) -> np.ndarray:
    """Weighted gradient of E_e, treated explicitly by the stepper.

    Per node this is S*u - (potential derivative); for the double well that
    is the familiar (S+1)*u - u^3.
    """
    u = grid.vector_to_field(g, x)
    _, f = bulk_potential(u)
    grad = g.node_weights * (p.S1 * u - f)
    v = u[g.chain_rows, g.chain_cols]
    _, gv = surface_potential(s, v)
    grad[g.chain_rows, g.chain_cols] += g.h * (p.S2 * v - gv)
    return _weighted(g, grad)


def split_energies(
    g: GridSpec, p: ModelParams, s: SurfacePotentialSpec, u: Field
) -> tuple[float, float]:
    """(E_c, E_e) with E_c - E_e = E_total identically.

    Constant offsets are assigned to make both parts match the convex forms
    used in the stability argument: the bulk keeps the +1/4 of the double
    well in E_c, and so does the surface in the double-well variant.
    """
    u = grid._check_field(g, u)
    dx, dy, v, dv = _gradient_energy_terms(g, p, u)
    k2h2 = 0.5 * p.kappa**2 / (g.h * g.h)
    quad = k2h2 * (
        np.sum(g.edge_weight_x * dx * dx) + np.sum(g.edge_weight_y * dy * dy)
    ) + 0.5 * p.kappa**2 / g.h * np.sum(dv * dv)

    w = g.node_weights
    e_c = quad + 0.5 * p.S1 * np.sum(w * u * u) + 0.5 * p.S2 * g.h * np.sum(v * v)
    e_c += 0.25 * np.sum(w)  # the constant part of F
    e_e = np.sum(w * (0.5 * (p.S1 + 1.0) * u * u - 0.25 * u**4))
    if s.variant == SURFACE_DOUBLE_WELL:
        e_c += 0.25 * np.sum(g.boundary_weights)
        e_e += g.h * np.sum(0.5 * (p.S2 + 1.0) * v * v - 0.25 * v**4)
    else:
        big_g, _ = surface_potential(s, v)
        e_e += g.h * np.sum(0.5 * p.S2 * v * v - big_g)
    return float(e_c), float(e_e)
