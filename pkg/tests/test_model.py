import math

import numpy as np
import pytest

from pacdyn import grid, model
from pacdyn.errors import PacdynError

from oracles import fd_chemical_potentials, loop_energy, reference_energy


def combined_wdot(g, p, a, b):
    """Weight-induced inner product on the combined (interior ⊕ chain) space."""
    w = np.concatenate(
        [np.full(g.num_interior, g.h * g.h), np.full(g.num_chain, g.h)]
    )
    return float(np.dot(w * a, b))


class TestPotentials:
    def test_bulk_values(self):
        big, little = model.bulk_potential(0.0)
        assert big == 0.25 and little == 0.0
        for c in (1.0, -1.0):
            big, little = model.bulk_potential(c)
            assert big == 0.0 and little == 0.0
        big, little = model.bulk_potential(2.0)
        assert big == pytest.approx(2.25) and little == pytest.approx(6.0)

    def test_surface_double_well(self, dw):
        big, little = model.surface_potential(dw, 0.0)
        assert big == 0.25 and little == 0.0

    def test_surface_mcl_neutral_angle(self):
        s = model.SurfacePotentialSpec.moving_contact_line(90.0)
        for psi in (-1.0, 0.0, 0.37, 2.0):
            big, little = model.surface_potential(s, psi)
            assert big == pytest.approx(0.0, abs=1e-16)
            assert little == pytest.approx(0.0, abs=1e-16)

    def test_surface_mcl_60deg(self):
        s = model.SurfacePotentialSpec.moving_contact_line(60.0, gamma_tilde=1.0)
        big, little = model.surface_potential(s, 0.0)
        assert big == pytest.approx(0.0, abs=1e-16)
        assert little == pytest.approx(-math.pi / 8.0)

    def test_derivative_matches_fd(self, dw, rng):
        s_mcl = model.SurfacePotentialSpec.moving_contact_line(30.0, 0.7)
        eps = 1e-6
        for spec in (dw, s_mcl):
            psi = rng.uniform(-2, 2, size=50)
            big_p, _ = model.surface_potential(spec, psi + eps)
            big_m, _ = model.surface_potential(spec, psi - eps)
            _, little = model.surface_potential(spec, psi)
            assert np.max(np.abs((big_p - big_m) / (2 * eps) - little)) <= 1e-8


class TestSpecValidation:
    def test_rejects_bad_angle(self):
        with pytest.raises(PacdynError):
            model.SurfacePotentialSpec.moving_contact_line(180.0)

    def test_rejects_bad_gamma(self):
        with pytest.raises(PacdynError):
            model.SurfacePotentialSpec.moving_contact_line(30.0, gamma_tilde=0.0)

    @pytest.mark.parametrize("field", ["kappa", "gamma1", "gamma2", "S1", "S2"])
    def test_params_positive(self, field):
        kwargs = {"kappa": 0.1, field: -1.0}
        with pytest.raises(PacdynError):
            model.ModelParams(**kwargs)

    def test_stability_bound_matches_reference_params(self):
        p = model.ModelParams(kappa=0.01)
        assert model.stability_field_bound(p) == pytest.approx(math.sqrt(201 / 3))
        assert model.check_field_bound(p, 8.0)
        assert not model.check_field_bound(p, 9.0)


class TestDiscreteEnergy:
    def test_uniform_wells(self, grid8, params8, dw):
        assert model.discrete_energy(grid8, params8, dw, np.ones((9, 9))) == (0, 0, 0)

    def test_uniform_zero(self, grid8, params8, dw):
        e_bulk, e_surf, e_total = model.discrete_energy(
            grid8, params8, dw, np.zeros((9, 9))
        )
        assert e_bulk == pytest.approx(0.25, abs=1e-15)
        assert e_surf == pytest.approx(1.0, abs=1e-15)
        assert e_total == pytest.approx(1.25, abs=1e-15)

    def test_matches_straight_loop_reference(self, grid8, params8, dw, rng):
        u = rng.uniform(-1, 1, size=(9, 9))
        ours = model.discrete_energy(grid8, params8, dw, u)
        theirs = loop_energy(8, params8.kappa, dw, u)
        for a, b in zip(ours, theirs):
            assert abs(a - b) <= 1e-13 * max(1.0, abs(b))

    def test_matches_loop_reference_mcl(self, grid8, params8, rng):
        s = model.SurfacePotentialSpec.moving_contact_line(150.0, 0.5)
        u = rng.uniform(-1.5, 1.5, size=(9, 9))
        ours = model.discrete_energy(grid8, params8, s, u)
        theirs = loop_energy(8, params8.kappa, s, u)
        for a, b in zip(ours, theirs):
            assert abs(a - b) <= 1e-13 * max(1.0, abs(b))

    def test_dihedral_symmetry(self, grid8, params8, dw, rng):
        u = rng.uniform(-1, 1, size=(9, 9))
        base = model.discrete_energy(grid8, params8, dw, u)[2]
        seen = []
        mat = u
        for _ in range(4):
            mat = np.rot90(mat)
            seen.append(mat)
            seen.append(mat.T)
        for v in seen:
            e = model.discrete_energy(grid8, params8, dw, np.ascontiguousarray(v))[2]
            assert abs(e - base) <= 1e-13 * max(1.0, abs(base))


class TestChemicalPotentials:
    def test_uniform_well_is_critical(self, grid8, params8, dw):
        mu, mu_g = model.chemical_potentials(grid8, params8, dw, np.ones((9, 9)))
        assert np.max(np.abs(mu)) == 0.0
        assert np.max(np.abs(mu_g)) == 0.0

    def test_uniform_zero(self, grid8, params8, dw):
        # f(0) = 0, so the bulk-potential trace term vanishes as well
        mu, mu_g = model.chemical_potentials(grid8, params8, dw, np.zeros((9, 9)))
        assert np.max(np.abs(mu)) == 0.0
        assert np.allclose(mu_g, 0.0)  # g(0) = 0 for the double well

    def test_general_constant(self, grid8, params8, dw):
        # interior: exactly f(c); chain: g(c) plus the quadrature trace term
        # (w_k/h) f(c), h/2 on edge nodes and h/4 at corners.
        c = 0.6
        mu, mu_g = model.chemical_potentials(grid8, params8, dw, np.full((9, 9), c))
        _, f_c = model.bulk_potential(c)
        _, g_c = model.surface_potential(dw, c)
        assert np.max(np.abs(mu - f_c)) <= 1e-14
        n = grid8.n
        corners = {0, n, 2 * n, 3 * n}
        for k in range(4 * n):
            w_over_h = grid8.h / 4.0 if k in corners else grid8.h / 2.0
            assert mu_g[k] == pytest.approx(g_c + w_over_h * f_c, abs=1e-14)

    def test_exact_gradient_n8(self, grid8, params8, dw, rng):
        u = rng.uniform(-1, 1, size=(9, 9))
        mu, mu_g = model.chemical_potentials(grid8, params8, dw, u)
        mu_fd, mu_g_fd = fd_chemical_potentials(8, params8.kappa, dw, u)
        assert np.max(np.abs(mu - mu_fd)) <= 1e-7
        assert np.max(np.abs(mu_g - mu_g_fd)) <= 1e-7

    def test_exact_gradient_mcl(self, grid8, params8, rng):
        s = model.SurfacePotentialSpec.moving_contact_line(150.0, 0.8)
        u = rng.uniform(-1, 1, size=(9, 9))
        mu, mu_g = model.chemical_potentials(grid8, params8, s, u)
        mu_fd, mu_g_fd = fd_chemical_potentials(8, params8.kappa, s, u)
        assert np.max(np.abs(mu - mu_fd)) <= 1e-7
        assert np.max(np.abs(mu_g - mu_g_fd)) <= 1e-7


class TestConvexSplit:
    def test_zero_maps_to_zero(self, grid8, params8, dw):
        x = np.zeros(grid8.num_interior + grid8.num_chain)
        assert np.max(np.abs(model.convex_split_apply(grid8, params8, x))) == 0.0
        assert np.max(np.abs(model.explicit_part(grid8, params8, dw, x))) == 0.0

    def test_interior_constant_away_from_boundary(self, grid8, params8):
        c = 1.3
        u = np.zeros((9, 9))
        u[1:-1, 1:-1] = c
        out = model.convex_split_apply(grid8, params8, grid.field_to_vector(grid8, u))
        field = grid.vector_to_field(grid8, out)
        # two cells away from the boundary the Laplacian of the constant is 0
        assert np.allclose(field[3:-3, 3:-3], params8.S1 * c)

    def test_self_adjoint_and_positive(self, grid8, params8, rng):
        size = grid8.num_interior + grid8.num_chain
        for _ in range(100):
            x = rng.normal(size=size)
            y = rng.normal(size=size)
            ax = model.convex_split_apply(grid8, params8, x)
            ay = model.convex_split_apply(grid8, params8, y)
            lhs = combined_wdot(grid8, params8, ax, y)
            rhs = combined_wdot(grid8, params8, x, ay)
            assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs), 1e-6)
            quad = combined_wdot(grid8, params8, ax, x)
            assert quad > 0.0

    def test_split_recombines_to_chemical_potentials(self, grid8, params8, dw, rng):
        u = rng.uniform(-1, 1, size=(9, 9))
        x = grid.field_to_vector(grid8, u)
        recombined = model.convex_split_apply(grid8, params8, x) - model.explicit_part(
            grid8, params8, dw, x
        )
        direct = model.chemical_potential_vector(grid8, params8, dw, x)
        assert np.max(np.abs(recombined - direct)) <= 1e-10 * max(
            1.0, np.max(np.abs(direct))
        )

    @pytest.mark.parametrize("variant", ["double_well", "mcl"])
    def test_energy_splitting_identity(self, grid8, params8, rng, variant):
        s = (
            model.SurfacePotentialSpec.double_well()
            if variant == "double_well"
            else model.SurfacePotentialSpec.moving_contact_line(30.0, 0.6)
        )
        for _ in range(20):
            u = rng.uniform(-8.0, 8.0, size=(9, 9))
            e_c, e_e = model.split_energies(grid8, params8, s, u)
            total = model.discrete_energy(grid8, params8, s, u)[2]
            assert abs((e_c - e_e) - total) <= 1e-12 * max(1.0, abs(e_c), abs(total))


def test_reference_energy_agrees_with_loop(grid8, params8, dw, rng):
    # ties the fast extended-precision oracle to the straight-loop one
    u = rng.uniform(-1, 1, size=(9, 9))
    fast = reference_energy(8, params8.kappa, dw, u)
    slow = loop_energy(8, params8.kappa, dw, u)
    for a, b in zip(fast, slow):
        assert abs(float(a) - b) <= 1e-13 * max(1.0, abs(b))
