"""Model right-hand sides: bracket, assemblies, slope equation."""

import numpy as np
import pytest

import plasmawave as pw
from plasmawave import Grid, ModelKind, RealField

from conftest import smooth_random_field

ALL_KINDS = (ModelKind.NONLOCAL, ModelKind.NONLOCAL_HIGHPASS, ModelKind.FORNBERG_WHITHAM)


class TestCommutatorTerm:
    def test_vanishes_on_constants(self, grid_small):
        for c in (0.0, 1.3, -0.4):
            f = RealField(grid_small, np.full(grid_small.n_points, c))
            assert np.max(np.abs(pw.commutator_term(f).values)) < 1e-14

    def test_even_field_gives_odd_bracket(self):
        g = Grid(1024, 20.0)
        h = RealField(g, np.exp(-g.x**2) + 0.3 * np.exp(-(g.x**2) / 4))
        comm = pw.commutator_term(h).values
        # x[0] is the unpaired leftmost node; mirror the rest
        mirrored = -comm[1:][::-1]
        assert np.max(np.abs(comm[1:] - mirrored)) < 1e-11

    def test_against_quadrature(self, grid_oracle):
        g = grid_oracle
        h = RealField(g, np.exp(-g.x**2))
        hx = RealField(g, -2.0 * g.x * np.exp(-g.x**2))  # analytic derivative
        shx = pw.convolve_direct(hx)
        sh = pw.convolve_direct(h)
        p1 = RealField(g, shx.values * h.values)
        oracle = pw.convolve_direct(p1).values - shx.values * sh.values
        comm = pw.commutator_term(h).values
        assert np.max(np.abs(comm - oracle)) < 1e-5

    def test_quadratic_homogeneity(self, grid_small, rng):
        h = smooth_random_field(grid_small, rng)
        base = pw.commutator_term(h).values
        for a in (0.5, 2.0, -3.0):
            scaled = pw.commutator_term(RealField(grid_small, a * h.values)).values
            assert np.max(np.abs(scaled - a**2 * base)) < 1e-10 * max(
                1.0, a**2 * np.max(np.abs(base))
            )

    def test_derivative_supnorm_scaling(self):
        g = Grid(1024, 12.0)
        base = RealField(g, np.exp(-g.x**2 / 2))
        v1 = pw.commutator_derivative_supnorm(base)
        for a in (0.5, 2.0, 4.0):
            va = pw.commutator_derivative_supnorm(RealField(g, a * base.values))
            assert va == pytest.approx(a**2 * v1, rel=0.05)

    def test_derivative_supnorm_trivial(self, grid_small):
        z = RealField(grid_small, np.zeros(grid_small.n_points))
        assert pw.commutator_derivative_supnorm(z) == 0.0
        c = RealField(grid_small, np.full(grid_small.n_points, 2.0))
        assert pw.commutator_derivative_supnorm(c) < 1e-14


class TestRhs:
    def test_zero_fixed_point(self, grid_small):
        z = RealField(grid_small, np.zeros(grid_small.n_points))
        for kind in ALL_KINDS:
            assert np.max(np.abs(pw.rhs(z, kind).values)) == 0.0

    def test_constants_are_steady(self, grid_small):
        c = RealField(grid_small, np.full(grid_small.n_points, 0.7))
        for kind in ALL_KINDS:
            assert np.max(np.abs(pw.rhs(c, kind).values)) < 1e-13

    def test_form_equivalence(self, grid_small, rng):
        for _ in range(20):
            h = smooth_random_field(grid_small, rng)
            a = pw.rhs(h, ModelKind.NONLOCAL).values
            b = pw.rhs(h, ModelKind.NONLOCAL_HIGHPASS).values
            assert np.max(np.abs(a - b)) < 1e-11

    def test_difference_to_fornberg_whitham(self, grid_small, rng):
        h = smooth_random_field(grid_small, rng)
        nl = pw.rhs(h, ModelKind.NONLOCAL).values
        fw = pw.rhs(h, ModelKind.FORNBERG_WHITHAM).values
        expected = (
            -0.5 * pw.smoothed_dx(h).values
            + 0.5 * pw.ddx(h).values
            - 0.5 * pw.commutator_term(h).values
        )
        assert np.max(np.abs((nl - fw) - expected)) < 1e-12

    def test_mass_compatibility(self, grid_small, rng):
        for _ in range(10):
            h = smooth_random_field(grid_small, rng)
            out = pw.rhs(h, ModelKind.NONLOCAL).values
            scale = np.linalg.norm(h.values)
            assert abs(grid_small.dx * out.sum()) < 1e-12 * (1 + scale)

    def test_energy_compatibility(self, grid_small, rng):
        for _ in range(10):
            h = smooth_random_field(grid_small, rng)
            out = pw.rhs(h, ModelKind.NONLOCAL).values
            scale = float(np.sum(h.values**2))
            assert abs(grid_small.dx * np.sum(h.values * out)) < 1e-10 * (1 + scale)

    def test_nonfinite_rejected(self, grid_small):
        bad = RealField(grid_small, np.zeros(grid_small.n_points))
        bad.values[0] = np.inf
        with pytest.raises(pw.NumericalFailureError):
            pw.rhs(bad, ModelKind.NONLOCAL)


class TestSlopeRhs:
    def test_trivial_states(self, grid_small):
        z = RealField(grid_small, np.zeros(grid_small.n_points))
        assert np.max(np.abs(pw.slope_rhs(z).values)) == 0.0
        c = RealField(grid_small, np.full(grid_small.n_points, 1.1))
        assert np.max(np.abs(pw.slope_rhs(c).values)) < 1e-13

    def test_commutes_with_derivative(self, grid_oracle, rng):
        g = grid_oracle
        h = RealField(g, 0.8 * np.exp(-g.x**2 / 2))
        direct = pw.slope_rhs(h).values
        via_rhs = pw.ddx(pw.rhs(h, ModelKind.NONLOCAL)).values
        assert np.max(np.abs(direct - via_rhs)) < 1e-10

    def test_commutes_on_random_fields(self, grid_small, rng):
        for _ in range(5):
            h = smooth_random_field(grid_small, rng)
            direct = pw.slope_rhs(h).values
            via_rhs = pw.ddx(pw.rhs(h, ModelKind.NONLOCAL)).values
            assert np.max(np.abs(direct - via_rhs)) < 1e-10
