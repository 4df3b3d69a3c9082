import numpy as np
import pytest
import scipy.linalg as sla
import scipy.special

from frackappa.fracop import (
    gl_weights,
    inner_product,
    left_matrix,
    riesz_matrix,
    right_matrix,
)
from frackappa.grid import Grid1D


def unit_grid(n):
    return Grid1D.from_wall(0.0, float(n + 1), n)


class TestGlWeights:
    def test_integer_order_binomial(self):
        w = gl_weights(2.0, 3)
        assert w.tolist() == [1.0, -2.0, 1.0, 0.0]

    def test_recurrence_arithmetic(self):
        w = gl_weights(1.5, 2)
        assert w.tolist() == [1.0, -1.5, 0.375]

    @pytest.mark.parametrize("beta", [1.2, 1.5, 1.85])
    def test_matches_binomial_oracle(self, beta):
        w = gl_weights(beta, 50)
        oracle = np.array(
            [(-1.0) ** k * scipy.special.binom(beta, k) for k in range(51)]
        )
        assert np.allclose(w, oracle, rtol=1e-12, atol=1e-15)

    def test_partial_sum_decays(self):
        w = gl_weights(1.8, 2000)
        # Direct-summation oracle for the zero-sum property.
        assert abs(float(np.sum(w))) < 1e-2
        partial = np.cumsum(w)
        assert np.all(np.abs(partial[2:]) <= np.abs(partial[1:-1]) + 1e-15)

    def test_signs(self):
        beta = 1.7
        w = gl_weights(beta, 40)
        assert w[0] == 1.0
        assert w[1] == pytest.approx(-beta, rel=1e-15)
        assert np.all(w[2:] > 0.0)

    @pytest.mark.parametrize("beta", [1.0, 0.5, 2.5, 3.0])
    def test_rejects_out_of_range_order(self, beta):
        with pytest.raises(ValueError):
            gl_weights(beta, 10)

    def test_rejects_short_count(self):
        with pytest.raises(ValueError):
            gl_weights(1.5, 1)


class TestOneSidedMatrices:
    def test_beta2_rows_are_central_stencil(self):
        grid = unit_grid(10)
        left = left_matrix(grid, 2.0).entries
        for i in range(1, grid.n - 1):
            row = np.zeros(grid.n)
            row[i - 1 : i + 2] = [1.0, -2.0, 1.0]
            assert np.array_equal(left[i], row)

    def test_right_is_transpose_of_left(self):
        grid = Grid1D.from_wall(-1.0, 7.0, 30)
        left = left_matrix(grid, 1.6).entries
        right = right_matrix(grid, 1.6).entries
        assert np.array_equal(right, left.T)

    @pytest.mark.parametrize("builder", [left_matrix, right_matrix])
    def test_interior_second_derivative_of_x_squared(self, builder):
        grid = Grid1D.from_wall(0.0, 10.0, 199)
        f = grid.x**2
        result = builder(grid, 2.0).entries @ f
        # The stencil is exact on quadratics away from the walls.
        assert np.allclose(result[2:-2], 2.0, rtol=1e-9)


class TestRieszMatrix:
    def test_beta2_equals_laplacian_bitwise(self):
        grid = unit_grid(8)
        d = riesz_matrix(grid, 2.0).entries
        n = grid.n
        ref = (
            np.diag(-2.0 * np.ones(n))
            + np.diag(np.ones(n - 1), 1)
            + np.diag(np.ones(n - 1), -1)
        ) / grid.dx**2
        assert np.array_equal(d, ref)

    @pytest.mark.parametrize("beta", [1.1, 1.3, 1.6, 1.9, 2.0])
    def test_exactly_symmetric(self, beta):
        grid = Grid1D.from_wall(0.0, 5.0, 60)
        d = riesz_matrix(grid, beta).entries
        assert np.abs(d - d.T).max() == 0.0

    @pytest.mark.parametrize("beta", [1.2, 1.6, 2.0])
    def test_negative_semidefinite(self, beta):
        grid = Grid1D.from_wall(0.0, 20.0, 400)
        d = riesz_matrix(grid, beta).entries
        eigenvalues = sla.eigvalsh(d)
        norm = np.abs(eigenvalues).max()
        assert eigenvalues[-1] <= 1e-10 * norm

    def test_rejects_beta_one(self):
        grid = unit_grid(10)
        with pytest.raises(ValueError):
            riesz_matrix(grid, 1.0)

    def test_grid_refinement_convergence(self):
        # Apply D to samples of exp(-x^2) and compare against a fixed
        # reference on a 4x finer grid; observed order must be >= 1.
        beta = 1.5
        width = 16.0
        n0 = 200
        levels = [n0, 2 * n0 + 1, 4 * n0 + 3]
        results = []
        for n in levels:
            grid = Grid1D.symmetric(width, n)
            f = np.exp(-(grid.x**2))
            results.append(riesz_matrix(grid, beta).entries @ f)

        def restrict(fine, factor, count):
            # Coarse point i coincides with fine point factor*(i+1)-1.
            return fine[factor - 1 :: factor][:count]

        err0 = np.abs(results[0] - restrict(results[2], 4, n0)).max()
        err1 = np.abs(results[1] - restrict(results[2], 2, 2 * n0 + 1)).max()
        order = np.log2(err0 / err1)
        assert order >= 1.0


class TestInnerProduct:
    def test_constant_function_measures_box(self):
        grid = Grid1D.from_wall(0.0, 10.0, 99)
        ones = np.ones(grid.n)
        assert inner_product(ones, ones, grid) == pytest.approx(grid.n * grid.dx)

    def test_normalized_vector(self):
        grid = Grid1D.from_wall(0.0, 10.0, 99)
        v = np.random.default_rng(7).normal(size=grid.n)
        v /= np.sqrt(np.dot(v, v) * grid.dx)
        assert inner_product(v, v, grid) == pytest.approx(1.0, abs=1e-12)

    def test_sine_pair_integral(self):
        length = 4.0
        grid = Grid1D.from_wall(0.0, length, 999)
        f = np.sin(np.pi * grid.x / length)
        value = inner_product(f, f, grid)
        assert value == pytest.approx(length / 2.0, abs=1e-4)

    def test_length_mismatch(self):
        grid = Grid1D.from_wall(0.0, 10.0, 64)
        with pytest.raises(ValueError):
            inner_product(np.ones(64), np.ones(63), grid)


class TestGrid:
    def test_invariants(self):
        with pytest.raises(ValueError):
            Grid1D(x_min=0.0, dx=-0.1, n=64)
        with pytest.raises(ValueError):
            Grid1D(x_min=0.0, dx=0.1, n=4)

    def test_from_wall_layout(self):
        grid = Grid1D.from_wall(-2.0, 8.0, 15)
        assert grid.left_wall == pytest.approx(-2.0)
        assert grid.right_wall == pytest.approx(6.0)
        assert grid.x[0] == pytest.approx(-2.0 + grid.dx)
        assert grid.width == pytest.approx(8.0)

    def test_symmetric_points_mirror_to_rounding(self):
        grid = Grid1D.symmetric(12.0, 101)
        eps = np.finfo(float).eps
        assert np.abs(grid.x + grid.x[::-1]).max() <= 8 * eps * grid.width
