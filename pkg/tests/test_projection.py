import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pacdyn import grid, projection


def wdot_interior(g, a, b):
    w = g.interior_weights.ravel()
    return float(np.dot(w * a.ravel(), b.ravel()))


def wdot_chain(g, a, b):
    return float(np.dot(g.boundary_weights * a, b))


class TestProjectBulk:
    def test_constants_vanish(self, grid8):
        assert np.max(np.abs(projection.project_bulk(grid8, np.full(49, 4.2)))) <= 1e-14

    def test_zero_mean_fixed_point(self, grid8, rng):
        u = rng.normal(size=49)
        u -= grid.bulk_mean(grid8, u)
        out = projection.project_bulk(grid8, u)
        assert np.max(np.abs(out - u)) <= 1e-13 * max(1.0, np.max(np.abs(u)))

    def test_one_to_nine(self):
        g = grid.build_grid(4)
        out = projection.project_bulk(g, np.arange(1.0, 10.0))
        assert np.allclose(out, np.arange(-4.0, 5.0))


class TestProjectBoundary:
    def test_constants_vanish(self, grid8):
        assert np.max(np.abs(projection.project_boundary(grid8, np.full(32, -2.0)))) <= 1e-14

    def test_sine_mode_unchanged(self, grid8):
        v = np.sin(2.0 * np.pi * np.arange(32) / 32.0)
        out = projection.project_boundary(grid8, v)
        assert np.max(np.abs(out - v)) <= 1e-12

    def test_single_spike_on_16_chain(self):
        g = grid.build_grid(4)
        v = np.zeros(16)
        v[0] = 2.0
        out = projection.project_boundary(g, v)
        assert out[0] == pytest.approx(2.0 - 0.125)
        assert np.allclose(out[1:], -0.125)


@pytest.mark.parametrize("which", ["bulk", "boundary"])
class TestProjectionProperties:
    """The four projection properties plus weighted self-adjointness,
    quantified over 100 random fields."""

    def _proj(self, g, which):
        if which == "bulk":
            return lambda u: projection.project_bulk(g, u), 49, (
                lambda a, b: wdot_interior(g, a, b)
            )
        return lambda u: projection.project_boundary(g, u), 32, (
            lambda a, b: wdot_chain(g, a, b)
        )

    def test_idempotent(self, grid8, rng, which):
        proj, size, _ = self._proj(grid8, which)
        for _ in range(100):
            u = rng.normal(size=size)
            once = proj(u)
            assert np.max(np.abs(proj(once) - once)) <= 1e-13 * max(
                1.0, np.max(np.abs(once))
            )

    def test_range_has_zero_mean(self, grid8, rng, which):
        proj, size, _ = self._proj(grid8, which)
        mean = grid.bulk_mean if which == "bulk" else grid.boundary_mean
        for _ in range(100):
            u = rng.normal(size=size)
            assert abs(mean(grid8, proj(u))) <= 1e-13 * max(1.0, np.max(np.abs(u)))

    def test_positive_semidefinite(self, grid8, rng, which):
        proj, size, dot = self._proj(grid8, which)
        for _ in range(100):
            u = rng.normal(size=size)
            assert dot(proj(u), u) >= -1e-12 * dot(u, u)

    def test_self_adjoint(self, grid8, rng, which):
        proj, size, dot = self._proj(grid8, which)
        for _ in range(100):
            u = rng.normal(size=size)
            w = rng.normal(size=size)
            lhs = dot(proj(u), w)
            rhs = dot(u, proj(w))
            scale = max(abs(lhs), abs(rhs), 1e-3)
            assert abs(lhs - rhs) <= 1e-12 * scale


@given(c=st.floats(-5, 5), seed=st.integers(0, 2**31))
@settings(max_examples=30, deadline=None)
def test_shift_by_constant_is_annihilated(c, seed):
    g = grid.build_grid(6)
    u = np.random.default_rng(seed).normal(size=25)
    a = projection.project_bulk(g, u + c)
    b = projection.project_bulk(g, u)
    assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, abs(c), np.max(np.abs(u)))
