"""Tests for the interval mesh, P1 assembly, interpolation, and solves."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subdelay.fem import (
    FEFunction,
    Mesh1D,
    TridiagonalMatrix,
    assemble_mass,
    assemble_stiffness,
    interpolate,
    l2_norm,
    solve_tridiagonal,
    uniform_mesh,
)


class TestMesh:
    def test_uniform_mesh_basics(self):
        mesh = uniform_mesh(1.0, 4)
        assert mesh.node_coords == pytest.approx([0.0, 0.25, 0.5, 0.75, 1.0])
        assert mesh.h_max == pytest.approx(0.25)
        assert mesh.n_interior == 3
        assert mesh.interior_coords == pytest.approx([0.25, 0.5, 0.75])

    def test_nonuniform_accepted_within_ratio(self):
        nodes = np.array([0.0, 0.1, 0.35, 0.6, 1.0])
        mesh = Mesh1D(L=1.0, node_coords=nodes)
        assert mesh.h_max == pytest.approx(0.4)

    def test_rejects_quasi_uniformity_violation(self):
        nodes = np.array([0.0, 0.001, 0.5, 1.0])
        with pytest.raises(ValueError, match="quasi-uniform"):
            Mesh1D(L=1.0, node_coords=nodes)

    def test_rejects_bad_endpoints_and_ordering(self):
        with pytest.raises(ValueError):
            Mesh1D(L=1.0, node_coords=np.array([0.1, 0.5, 1.0]))
        with pytest.raises(ValueError):
            Mesh1D(L=1.0, node_coords=np.array([0.0, 0.5, 0.9]))
        with pytest.raises(ValueError):
            Mesh1D(L=1.0, node_coords=np.array([0.0, 0.6, 0.4, 1.0]))
        with pytest.raises(ValueError):
            Mesh1D(L=-1.0, node_coords=np.array([0.0, -0.5, -1.0]))
        with pytest.raises(ValueError):
            uniform_mesh(1.0, 1)

    def test_nodes_read_only(self):
        mesh = uniform_mesh(1.0, 8)
        with pytest.raises(ValueError):
            mesh.node_coords[0] = 5.0


class TestMassMatrix:
    def test_uniform_interior_row(self):
        mesh = uniform_mesh(1.0, 10)
        M = assemble_mass(mesh)
        h = 0.1
        assert M.diag == pytest.approx(np.full(9, 4.0 * h / 6.0))
        assert M.upper == pytest.approx(np.full(8, h / 6.0))
        assert M.lower == pytest.approx(M.upper)

    def test_total_mass_is_domain_length(self):
        # full assembly including boundary rows integrates 1*1 over (0, L);
        # the interior block reaches L after adding the boundary-row parts
        L = 2.5
        mesh = uniform_mesh(L, 16)
        M = assemble_mass(mesh)
        h = mesh.element_lengths
        interior_total = float(M.diag.sum() + M.lower.sum() + M.upper.sum())
        # each boundary node carries h/3 on the diagonal plus h/6 in its row
        # and h/6 in its column, 2h/3 in total
        boundary = 2.0 * (h[0] + h[-1]) / 3.0
        assert interior_total + boundary == pytest.approx(L, rel=1e-13)

    def test_nonuniform_entries(self):
        nodes = np.array([0.0, 0.2, 0.5, 1.0])
        M = assemble_mass(Mesh1D(L=1.0, node_coords=nodes))
        assert M.diag == pytest.approx([(0.2 + 0.3) / 3.0, (0.3 + 0.5) / 3.0])
        assert M.upper == pytest.approx([0.3 / 6.0])

    def test_spd(self):
        rng = np.random.default_rng(0)
        M = assemble_mass(uniform_mesh(1.0, 30))
        for _ in range(5):
            v = rng.standard_normal(29)
            assert float(np.dot(v, M.matvec(v))) > 0.0

    def test_diagonally_dominant(self):
        M = assemble_mass(uniform_mesh(1.0, 12))
        off = np.zeros(M.n)
        off[:-1] += np.abs(M.upper)
        off[1:] += np.abs(M.lower)
        assert np.all(M.diag > off)


class TestStiffnessMatrix:
    def test_uniform_interior_row(self):
        mesh = uniform_mesh(1.0, 4)
        S = assemble_stiffness(mesh)
        assert S.diag == pytest.approx([8.0, 8.0, 8.0])
        assert S.upper == pytest.approx([-4.0, -4.0])

    def test_interior_row_sums_zero(self):
        S = assemble_stiffness(uniform_mesh(1.0, 10))
        # rows not adjacent to the boundary annihilate constants
        v = np.ones(S.n)
        prod = S.matvec(v)
        assert prod[1:-1] == pytest.approx(np.zeros(S.n - 2), abs=1e-12)

    def test_psd(self):
        rng = np.random.default_rng(1)
        S = assemble_stiffness(uniform_mesh(1.0, 25))
        for _ in range(5):
            v = rng.standard_normal(24)
            assert float(np.dot(v, S.matvec(v))) >= 0.0

    def test_dirichlet_block_positive_definite(self):
        # after boundary elimination even constants cost energy
        S = assemble_stiffness(uniform_mesh(1.0, 25))
        v = np.ones(24)
        assert float(np.dot(v, S.matvec(v))) > 0.0


class TestInterpolate:
    def test_zero_function(self):
        f = interpolate(lambda x: 0.0, uniform_mesh(1.0, 8))
        assert f.values == pytest.approx(np.zeros(7))

    def test_sine_quarter_mesh(self):
        f = interpolate(lambda x: math.sin(math.pi * x), uniform_mesh(1.0, 4))
        r = math.sqrt(2.0) / 2.0
        assert f.values == pytest.approx([r, 1.0, r], rel=1e-15)

    def test_interpolation_error_second_order(self):
        # reference L2 error of the interpolant via fine composite Simpson
        def err(n_cells):
            mesh = uniform_mesh(1.0, n_cells)
            f = interpolate(lambda x: math.sin(math.pi * x), mesh)
            full = np.concatenate(([0.0], f.values, [0.0]))
            xs = np.linspace(0.0, 1.0, 4097)
            lin = np.interp(xs, mesh.node_coords, full)
            diff2 = (lin - np.sin(np.pi * xs)) ** 2
            from scipy.integrate import simpson

            return math.sqrt(simpson(diff2, x=xs))

        e1, e2, e3 = err(8), err(16), err(32)
        assert 1.9 <= math.log2(e1 / e2) <= 2.1
        assert 1.9 <= math.log2(e2 / e3) <= 2.1

    def test_warns_on_nonzero_boundary(self):
        with pytest.warns(UserWarning, match="boundary"):
            interpolate(lambda x: x + 1.0, uniform_mesh(1.0, 4))

    def test_raises_on_nonfinite(self):
        with pytest.raises(ValueError, match="finite"):
            interpolate(lambda x: math.inf, uniform_mesh(1.0, 4))


class TestL2Norm:
    def test_zero(self):
        f = FEFunction(uniform_mesh(1.0, 6), np.zeros(5))
        assert l2_norm(f) == 0.0

    def test_sine_norm(self):
        f = interpolate(lambda x: math.sin(math.pi * x), uniform_mesh(1.0, 1000))
        assert l2_norm(f) == pytest.approx(math.sqrt(0.5), abs=1e-5)

    def test_hat_function_exact(self):
        # single hat of height 1 on a uniform mesh: ||.||^2 = 2h/3
        mesh = uniform_mesh(1.0, 8)
        v = np.zeros(7)
        v[3] = 1.0
        f = FEFunction(mesh, v)
        assert l2_norm(f) == pytest.approx(math.sqrt(2.0 * 0.125 / 3.0), rel=1e-14)

    @settings(max_examples=25, deadline=None)
    @given(c=st.floats(-100.0, 100.0, allow_nan=False))
    def test_homogeneity(self, c):
        rng = np.random.default_rng(5)
        mesh = uniform_mesh(1.0, 20)
        v = rng.standard_normal(19)
        base = l2_norm(FEFunction(mesh, v))
        scaled = l2_norm(FEFunction(mesh, c * v))
        assert scaled == pytest.approx(abs(c) * base, rel=1e-12, abs=1e-13)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(9)
        mesh = uniform_mesh(1.0, 15)
        u = rng.standard_normal(14)
        v = rng.standard_normal(14)
        lhs = l2_norm(FEFunction(mesh, u + v))
        rhs = l2_norm(FEFunction(mesh, u)) + l2_norm(FEFunction(mesh, v))
        assert lhs <= rhs + 1e-12


class TestSolve:
    def test_identity_returns_rhs(self):
        A = TridiagonalMatrix(lower=np.zeros(4), diag=np.ones(5), upper=np.zeros(4))
        rhs = np.array([1.0, -2.0, 3.0, 0.5, 0.0])
        assert solve_tridiagonal(A, rhs) == pytest.approx(rhs)

    def test_random_spd_round_trip(self):
        rng = np.random.default_rng(21)
        n = 50
        off = rng.uniform(-0.4, 0.4, n - 1)
        diag = 1.0 + np.abs(rng.standard_normal(n))
        A = TridiagonalMatrix(lower=off, diag=diag, upper=off)
        rhs = rng.standard_normal(n)
        x = solve_tridiagonal(A, rhs)
        res = float(np.abs(A.matvec(x) - rhs).max())
        assert res <= 1e-10 * float(np.abs(rhs).max())

    def test_mass_consistency(self):
        mesh = uniform_mesh(1.0, 40)
        M = assemble_mass(mesh)
        rhs = M.matvec(np.ones(M.n))
        x = solve_tridiagonal(M, rhs)
        assert x == pytest.approx(np.ones(M.n), rel=1e-12)

    def test_singular_raises(self):
        A = TridiagonalMatrix(lower=np.zeros(2), diag=np.zeros(3), upper=np.zeros(2))
        with pytest.raises(ValueError, match="singular"):
            solve_tridiagonal(A, np.ones(3))

    def test_shape_mismatch(self):
        A = TridiagonalMatrix(lower=np.zeros(2), diag=np.ones(3), upper=np.zeros(2))
        with pytest.raises(ValueError):
            solve_tridiagonal(A, np.ones(4))


class TestTridiagonalType:
    def test_matvec_against_dense(self):
        rng = np.random.default_rng(2)
        lower = rng.standard_normal(4)
        diag = rng.standard_normal(5)
        upper = rng.standard_normal(4)
        A = TridiagonalMatrix(lower=lower, diag=diag, upper=upper)
        dense = np.diag(diag) + np.diag(lower, -1) + np.diag(upper, 1)
        v = rng.standard_normal(5)
        assert A.matvec(v) == pytest.approx(dense @ v)

    def test_scaled_add(self):
        mesh = uniform_mesh(1.0, 6)
        M = assemble_mass(mesh)
        S = assemble_stiffness(mesh)
        C = M.scaled_add(2.0, S, -0.5)
        assert C.diag == pytest.approx(2.0 * M.diag - 0.5 * S.diag)
        assert C.upper == pytest.approx(2.0 * M.upper - 0.5 * S.upper)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix(lower=np.zeros(3), diag=np.ones(3), upper=np.zeros(2))
        with pytest.raises(ValueError):
            TridiagonalMatrix(lower=np.zeros(0), diag=np.ones(0), upper=np.zeros(0))

    def test_symmetry_of_assembled(self):
        mesh = uniform_mesh(1.0, 9)
        for A in (assemble_mass(mesh), assemble_stiffness(mesh)):
            assert A.lower == pytest.approx(A.upper)
