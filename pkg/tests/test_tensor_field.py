import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from divfree.tensor_field import (GridSpec, SymTensorField, det_power,
                                  discrete_divergence, measure_norm,
                                  positivity_report, schur_stress,
                                  slice_measure_norm, space_time_integral)


def make_grid(n_t=16, n_x=32, d=1, t_range=(0.0, 1.0), x_range=(-2.0, 2.0)):
    return GridSpec(d, t_range, x_range, n_t, n_x)


def constant_field(grid, mat):
    vals = np.broadcast_to(np.asarray(mat, dtype=float),
                           (*grid.shape, *np.shape(mat))).copy()
    return SymTensorField(grid, vals)


class TestGridSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            GridSpec(3, (0, 1), (-1, 1), 8, 8)
        with pytest.raises(ValueError):
            GridSpec(1, (1, 0), (-1, 1), 8, 8)
        with pytest.raises(ValueError):
            GridSpec(1, (0, 1), (-1, 1), 1, 8)
        with pytest.raises(ValueError):
            GridSpec(1, (0, 1), (1, -1), 8, 8)

    def test_geometry(self):
        g = make_grid(10, 20)
        assert g.shape == (10, 20)
        assert g.dt == pytest.approx(0.1)
        assert g.dx[0] == pytest.approx(0.2)
        assert g.t_centers[0] == pytest.approx(0.05)
        assert g.cell_volume == pytest.approx(0.02)
        g2 = GridSpec(2, (0, 1), ((-1, 1), (0, 2)), 4, (6, 8))
        assert g2.shape == (4, 6, 8)
        assert g2.points().shape == (4, 6, 8, 3)


class TestDivergence:
    def test_constant_is_exactly_zero(self):
        S = constant_field(make_grid(), np.eye(2))
        assert np.all(discrete_divergence(S) == 0.0)

    def test_affine_example(self):
        # S = [[x, -t], [-t, 0]]: row 0 divergence 0, row 1 constant -1
        grid = make_grid()

        def fn(pts):
            t, x = pts[..., 0], pts[..., 1]
            out = np.zeros((*t.shape, 2, 2))
            out[..., 0, 0] = x
            out[..., 0, 1] = out[..., 1, 0] = -t
            return out

        S = SymTensorField.from_function(grid, fn)
        div = discrete_divergence(S)
        assert np.all(div[..., 0] == 0.0)
        assert np.all(div[..., 1] == -1.0)

    def test_smooth_convergence_rate(self):
        # analytic divergence of a smooth non-divergence-free field
        def fn(pts):
            t, x = pts[..., 0], pts[..., 1]
            out = np.empty((*t.shape, 2, 2))
            out[..., 0, 0] = np.sin(t + x)
            out[..., 0, 1] = out[..., 1, 0] = np.cos(t - x)
            out[..., 1, 1] = np.sin(2 * t) * np.cos(x)
            return out

        def exact_div(pts):
            t, x = pts[..., 0], pts[..., 1]
            row0 = np.cos(t + x) + np.sin(t - x)
            row1 = -np.sin(t - x) - np.sin(2 * t) * np.sin(x)
            return np.stack([row0, row1], axis=-1)

        errs, hs = [], []
        for n in (32, 64, 128):
            grid = make_grid(n, n)
            S = SymTensorField.from_function(grid, fn)
            err = discrete_divergence(S) - exact_div(grid.points())
            # interior only: boundary stencils are first order
            errs.append(float(np.abs(err[1:-1, 1:-1]).max()))
            hs.append(grid.dt)
        slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
        assert slope >= 1.9

    def test_linearity_exact(self, rng):
        # integer-valued fields on power-of-two spacings: exact arithmetic
        grid = GridSpec(1, (0.0, 2.0), (-2.0, 2.0), 8, 16)
        v1 = rng.integers(-5, 6, size=(*grid.shape, 2, 2)).astype(float)
        v2 = rng.integers(-5, 6, size=(*grid.shape, 2, 2)).astype(float)
        v1 = v1 + np.swapaxes(v1, -1, -2)
        v2 = v2 + np.swapaxes(v2, -1, -2)
        S1, S2 = SymTensorField(grid, v1), SymTensorField(grid, v2)
        a, b = 3.0, -2.0
        lhs = discrete_divergence(SymTensorField(grid, a * v1 + b * v2))
        rhs = a * discrete_divergence(S1) + b * discrete_divergence(S2)
        assert np.array_equal(lhs, rhs)

    def test_periodic_axis_wraps(self):
        grid = GridSpec(1, (0.0, 1.0), (0.0, 1.0), 16, 16, periodic=True)

        def fn(pts):
            x = pts[..., 1]
            out = np.zeros((*x.shape, 2, 2))
            out[..., 0, 1] = out[..., 1, 0] = np.sin(2 * np.pi * x)
            return out

        S = SymTensorField.from_function(grid, fn)
        div = discrete_divergence(S)
        x = grid.points()[..., 1]
        # wrapped central difference of sin(2 pi x) with step h is exactly
        # cos(2 pi x) sin(2 pi h)/h, boundary rows included
        h = 1.0 / 16
        err = div[..., 0] - np.cos(2 * np.pi * x) * np.sin(2 * np.pi * h) / h
        assert np.abs(err).max() < 1e-12


class TestPositivity:
    def test_identity(self):
        rep = positivity_report(constant_field(make_grid(), np.eye(2)))
        assert rep.min_eigenvalue == pytest.approx(1.0)
        assert rep.fraction_psd == 1.0

    def test_indefinite_constant(self):
        g = GridSpec(2, (0, 1), ((-1, 1), (-1, 1)), 4, (4, 4))
        rep = positivity_report(constant_field(g, np.diag([1.0, -1.0, 1.0])))
        assert rep.fraction_psd == 0.0
        assert rep.min_eigenvalue == pytest.approx(-1.0)

    def test_congruence_preserves_signature(self, rng):
        # min-eigenvalue sign is invariant under S -> P S P^T
        grid = make_grid(4, 4)
        for _ in range(20):
            A = rng.normal(size=(*grid.shape, 2, 2))
            S = SymTensorField(grid, A + np.swapaxes(A, -1, -2))
            P = rng.normal(size=(2, 2))
            while abs(np.linalg.det(P)) < 0.1:
                P = rng.normal(size=(2, 2))
            S2 = SymTensorField(grid, np.einsum("ij,...jk,lk->...il", P, S.values, P))
            s1 = np.sign(positivity_report(S).min_eig_field)
            s2 = np.sign(positivity_report(S2).min_eig_field)
            mask = np.abs(positivity_report(S).min_eig_field) > 1e-9
            assert np.array_equal(s1[mask], s2[mask])


class TestDetPower:
    def test_identity(self):
        g = make_grid(4, 4)
        out = det_power(constant_field(g, np.eye(2)), 1.0)
        assert np.all(out == 1.0)

    def test_clamping_tally(self):
        g = make_grid(4, 4)
        field, n_clamped = det_power(constant_field(g, np.diag([1.0, -1.0])),
                                     0.5, return_clamp_count=True)
        assert np.all(field == 0.0)
        assert n_clamped == 16

    def test_eigenvalue_product(self, rng):
        g = make_grid(6, 6)
        A = rng.normal(size=(*g.shape, 2, 2))
        S = SymTensorField(g, A + np.swapaxes(A, -1, -2) + 4 * np.eye(2))
        direct = det_power(S, 1.0)
        prod = np.prod(np.linalg.eigvalsh(S.values), axis=-1)
        assert np.allclose(direct, np.maximum(prod, 0.0), rtol=1e-10, atol=1e-12)


@settings(max_examples=50, deadline=None)
@given(a=st.floats(0.1, 3.0), b=st.floats(-2.0, 2.0), c=st.floats(0.1, 3.0))
def test_det_power_matches_eigenvalues_hypothesis(a, b, c):
    g = GridSpec(1, (0.0, 1.0), (0.0, 1.0), 2, 2)
    vals = np.broadcast_to(np.array([[a, b], [b, c]]), (2, 2, 2, 2)).copy()
    S = SymTensorField(g, vals)
    direct = det_power(S, 1.0)
    eigs = np.linalg.eigvalsh(S.values)
    prod = np.prod(eigs, axis=-1)
    assert np.allclose(direct, np.maximum(prod, 0.0), rtol=1e-10, atol=1e-12)


class TestIntegrals:
    def test_unit_cube(self):
        g = GridSpec(1, (0.0, 1.0), (0.0, 1.0), 8, 8)
        assert space_time_integral(np.ones(g.shape), g) == pytest.approx(1.0)

    def test_time_weight_is_exact_for_midpoint(self):
        g = GridSpec(1, (0.0, 1.0), (0.0, 1.0), 8, 8)
        assert space_time_integral(np.ones(g.shape), g, "t") == pytest.approx(0.5)

    def test_quadrature_convergence(self):
        def smooth(grid):
            pts = grid.points()
            return np.exp(-pts[..., 0]) * np.cos(pts[..., 1])

        vals = []
        for n in (16, 64):
            g = make_grid(n, n)
            vals.append(space_time_integral(smooth(g), g))
        exact = (1 - np.exp(-1.0)) * 2 * np.sin(2.0)
        assert abs(vals[1] - exact) < 0.01 * abs(exact)
        assert abs(vals[1] - exact) < abs(vals[0] - exact)

    def test_measure_norms(self):
        g = GridSpec(1, (0.0, 1.0), (0.0, 1.0), 4, 4)
        vec = np.ones((*g.shape, 2)) * np.array([3.0, 4.0])
        assert measure_norm(vec, g) == pytest.approx(5.0)
        assert slice_measure_norm(vec[0], g) == pytest.approx(5.0)


class TestSchur:
    def test_complement(self):
        g = make_grid(4, 4)

        def fn(pts):
            t = pts[..., 0]
            out = np.empty((*t.shape, 2, 2))
            out[..., 0, 0] = 2.0
            out[..., 0, 1] = out[..., 1, 0] = 1.0
            out[..., 1, 1] = 3.0
            return out

        S = SymTensorField.from_function(g, fn)
        sigma = schur_stress(S)
        assert np.allclose(sigma[..., 0, 0], 3.0 - 0.5)


def test_solver_field_quadrature_refinement():
    # rho^(1/d) p integrated over space-time: refined-grid agreement within 1%
    from divfree.corpus import corpus_flow
    vals = []
    for n in (256, 512):
        fl = corpus_flow("bump-d1-monoatomic", n)
        p = 0.5 * (fl.pressure()[:-1] + fl.pressure()[1:])
        rho = 0.5 * (fl.rho[:-1] + fl.rho[1:])
        vals.append(space_time_integral(rho ** (1.0 / fl.d) * p, fl.grid))
    assert abs(vals[1] - vals[0]) <= 0.01 * abs(vals[0])
