import math

import numpy as np
import pytest
from scipy.integrate import quad

from hypverify.radial import (
    RadialFunction,
    RadialGrid,
    _fornberg_weights,
    as_callable,
    convolve_with_kernel,
    integrate_radial,
    lp_norm,
    make_radial_grid,
    radial_convolution,
    radial_laplacian,
    sphere_area,
)


class TestSphereArea:
    def test_known_values(self):
        assert sphere_area(1) == pytest.approx(2.0)
        assert sphere_area(2) == pytest.approx(2.0 * math.pi)
        assert sphere_area(3) == pytest.approx(4.0 * math.pi)
        assert sphere_area(4) == pytest.approx(2.0 * math.pi**2)
        with pytest.raises(ValueError):
            sphere_area(0)


class TestGrid:
    def test_structure(self):
        g = make_radial_grid(rho_max=10.0, num_nodes=256)
        assert g.size <= 256
        assert g.nodes[0] > 0
        assert np.all(np.diff(g.nodes) > 0)
        assert g.nodes[-1] < 10.0
        assert np.all(g.weights > 0)
        # weights sum to the interval length
        assert g.weights.sum() == pytest.approx(10.0, rel=1e-13)

    def test_uniform_kind(self):
        g = make_radial_grid(rho_max=8.0, num_nodes=64, kind="uniform")
        assert g.size == 64
        assert np.allclose(np.diff(g.nodes), 0.125)
        assert np.allclose(g.weights, 0.125)

    def test_small_rho_max(self):
        g = make_radial_grid(rho_max=0.5, num_nodes=128)
        assert g.nodes[-1] < 0.5
        assert g.weights.sum() == pytest.approx(0.5, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            make_radial_grid(rho_max=-1.0)
        with pytest.raises(ValueError):
            make_radial_grid(kind="chebyshev")
        with pytest.raises(ValueError):
            RadialGrid(np.array([0.2, 0.1]), np.array([1.0, 1.0]), 1.0)
        with pytest.raises(ValueError):
            RadialGrid(np.array([0.1, 0.2]), np.array([1.0, -1.0]), 1.0)


class TestIntegration:
    def test_sinh_square_closed_form(self):
        # int_0^R sinh^2 = sinh(2R)/4 - R/2, times |S^2|
        g = make_radial_grid(rho_max=5.0, num_nodes=512)
        got = integrate_radial(np.ones(g.size), g, 3)
        want = 4.0 * math.pi * (math.sinh(10.0) / 4.0 - 2.5)
        assert got == pytest.approx(want, rel=1e-12)

    def test_gaussian_n3(self, grid12):
        vals = np.exp(-(grid12.nodes**2))
        want = math.pi**1.5 * (math.e - 1.0)
        assert integrate_radial(vals, grid12, 3) == pytest.approx(want, rel=1e-12)

    @pytest.mark.parametrize("n", [2, 4, 5])
    def test_gaussian_other_dims(self, n, grid12):
        vals = np.exp(-(grid12.nodes**2))
        oracle, err = quad(
            lambda r: math.exp(-(r**2)) * math.sinh(r) ** (n - 1), 0, 12.0
        )
        assert integrate_radial(vals, grid12, n) == pytest.approx(
            sphere_area(n) * oracle, rel=1e-10
        )

    def test_batched(self, grid12):
        vals = np.stack([np.exp(-(grid12.nodes**2)), np.exp(-grid12.nodes) * 0.0])
        out = integrate_radial(vals, grid12, 3)
        assert out.shape == (2,)
        assert out[1] == 0.0

    def test_lp_norms(self, grid12):
        vals = np.exp(-(grid12.nodes**2))
        l2 = lp_norm(vals, grid12, 3, 2.0)
        direct = math.sqrt(integrate_radial(vals**2, grid12, 3))
        assert l2 == pytest.approx(direct, rel=1e-14)
        assert lp_norm(vals, grid12, 3, np.inf) == pytest.approx(vals.max())
        with pytest.raises(ValueError):
            lp_norm(vals, grid12, 3, 0.0)


class TestInterpolation:
    def test_reproduces_nodes(self, grid12):
        vals = np.exp(-(grid12.nodes**2) / 2.0)
        f = as_callable(vals, grid12)
        assert np.allclose(f(grid12.nodes), vals, rtol=1e-12, atol=1e-14)

    def test_midpoints(self, grid12):
        vals = np.exp(-(grid12.nodes**2) / 2.0)
        f = as_callable(vals, grid12)
        mid = 0.5 * (grid12.nodes[:-1] + grid12.nodes[1:])
        exact = np.exp(-(mid**2) / 2.0)
        err = np.max(np.abs(f(mid) - exact))
        assert err < 1e-7

    def test_zero_beyond_support(self, grid12):
        f = as_callable(np.ones(grid12.size), grid12)
        assert f(15.0) == 0.0
        out = f(np.array([1.0, 20.0]))
        assert out[1] == 0.0 and out[0] == pytest.approx(1.0)


class TestFornberg:
    def test_uniform_second_derivative(self):
        w = _fornberg_weights(0.0, np.array([-1.0, 0.0, 1.0]), 2)
        assert np.allclose(w[:, 2], [1.0, -2.0, 1.0])
        assert np.allclose(w[:, 1], [-0.5, 0.0, 0.5])
        assert np.allclose(w[:, 0], [0.0, 1.0, 0.0])

    def test_polynomial_exactness(self):
        rng = np.random.default_rng(0)
        xs = np.sort(rng.uniform(-1.0, 1.0, size=7))
        x0 = 0.1
        w = _fornberg_weights(x0, xs, 2)
        for deg in range(7):
            vals = xs**deg
            d1 = deg * x0 ** (deg - 1) if deg >= 1 else 0.0
            d2 = deg * (deg - 1) * x0 ** (deg - 2) if deg >= 2 else 0.0
            assert float(w[:, 1] @ vals) == pytest.approx(d1, abs=1e-9)
            assert float(w[:, 2] @ vals) == pytest.approx(d2, abs=1e-8)


class TestRadialLaplacian:
    def test_gaussian(self, grid12):
        rho = grid12.nodes
        f = np.exp(-(rho**2))
        got = radial_laplacian(f, grid12, 3)
        want = (4.0 * rho**2 - 2.0 - 4.0 * rho * np.cosh(rho) / np.sinh(rho)) * f
        err = np.max(np.abs(got - want)) / np.max(np.abs(want))
        assert err < 1e-6

    def test_sech_cubed_n4(self, grid12):
        # in dimension 4 the sech^3 profile has Laplacian -12 sech^5
        f = np.cosh(grid12.nodes) ** -3.0
        got = radial_laplacian(f, grid12, 4)
        want = -12.0 * np.cosh(grid12.nodes) ** -5.0
        err = np.max(np.abs(got - want)) / np.max(np.abs(want))
        assert err < 1e-6

    def test_near_zero_is_clean(self, grid12):
        # the even fit must not blow up 1/rho at the innermost nodes
        rho = grid12.nodes
        f = np.exp(-(rho**2))
        got = radial_laplacian(f, grid12, 5)
        inner = rho < 1e-3
        want = (4.0 * rho**2 - 2.0 - 8.0 * rho / np.tanh(rho)) * f
        assert np.max(np.abs(got[inner] - want[inner])) < 1e-8

    def test_convergence_order_two(self):
        # classical 3-point stencil on a uniformly refined grid: the
        # sup error away from the edges must drop by ~4 per halving
        errs = []
        for num in (256, 512):
            g = make_radial_grid(rho_max=12.0, num_nodes=num, kind="uniform")
            rho = g.nodes
            f = np.exp(-(rho**2) / 4.0)
            got = radial_laplacian(f, g, 3, order=2)
            want = (rho**2 / 4.0 - 0.5 - (rho / np.tanh(rho))) * f
            sel = (rho > 0.5) & (rho < 9.0)
            errs.append(np.max(np.abs(got - want)[sel]))
        assert errs[0] / errs[1] > 3.5

    def test_rejects_bad_order(self, grid12):
        with pytest.raises(ValueError):
            radial_laplacian(np.ones(grid12.size), grid12, 3, order=4)

    def test_rejects_shape_mismatch(self, grid12):
        with pytest.raises(ValueError):
            radial_laplacian(np.ones(3), grid12, 3)


def _abel_oracle_n3(f_vals, inner_antideriv, grid):
    """For n=3 the angular integral collapses; with E an antiderivative
    of g(d) sinh(d) the convolution is
    (2 pi / sinh rx) * int f(ry) sinh(ry) [E(rx+ry) - E(|rx-ry|)] dry."""
    rho = grid.nodes
    w = grid.weights * f_vals * np.sinh(rho)
    out = np.empty(grid.size)
    for i, rx in enumerate(rho):
        upper = inner_antideriv(rx + rho)
        lower = inner_antideriv(np.abs(rx - rho))
        out[i] = 2.0 * math.pi / math.sinh(rx) * float(w @ (upper - lower))
    return out


class TestConvolution:
    def test_against_abel_reduction(self, grid_conv):
        # g = exp(-2(cosh d - 1)): g sinh d integrates in closed form
        rho = grid_conv.nodes
        f = np.exp(-(rho**2))
        g = np.exp(-2.0 * (np.cosh(rho) - 1.0))
        got = radial_convolution(f, g, grid_conv, 3)
        want = _abel_oracle_n3(
            f, lambda r: -np.exp(-2.0 * (np.cosh(r) - 1.0)) / 2.0, grid_conv
        )
        err = np.max(np.abs(got - want)) / np.max(np.abs(want))
        assert err < 1e-6

    def test_symmetry(self, grid_conv):
        rho = grid_conv.nodes
        f = np.exp(-(rho**2))
        g = np.exp(-2.0 * (np.cosh(rho) - 1.0))
        fg = radial_convolution(f, g, grid_conv, 3)
        gf = radial_convolution(g, f, grid_conv, 3)
        scale = np.max(np.abs(fg))
        # both orders interpolate one factor, so symmetry holds to the
        # spline resolution, not to machine precision
        assert np.max(np.abs(fg - gf)) / scale < 1e-6

    def test_dimension_two_works(self, grid_conv):
        # n = 2 has sin^0 angular weight; just exercise the path
        rho = grid_conv.nodes
        f = np.exp(-(rho**2))
        out = radial_convolution(f, f, grid_conv, 2)
        assert np.all(np.isfinite(out))
        assert out[0] > 0

    def test_kernel_callable_smooth_agrees(self, grid_conv):
        rho = grid_conv.nodes
        f = np.exp(-(rho**2))
        g = np.exp(-2.0 * (np.cosh(rho) - 1.0))
        via_grid = radial_convolution(f, g, grid_conv, 3)
        via_kernel = convolve_with_kernel(
            f, lambda d: np.exp(-2.0 * (np.cosh(d) - 1.0)), grid_conv, 3
        )
        scale = np.max(np.abs(via_grid))
        assert np.max(np.abs(via_grid - via_kernel)) / scale < 1e-6

    def test_singular_kernel_against_oracle(self, grid_conv):
        # kernel 1/(2 sinh(d/2)) is singular at d = 0; its product with
        # sinh d is cosh(d/2), antiderivative 2 sinh(d/2)
        rho = grid_conv.nodes
        f = np.exp(-(rho**2))
        got = convolve_with_kernel(
            f, lambda d: 1.0 / (2.0 * np.sinh(d / 2.0)), grid_conv, 3
        )
        want = _abel_oracle_n3(f, lambda r: 2.0 * np.sinh(r / 2.0), grid_conv)
        err = np.max(np.abs(got - want)) / np.max(np.abs(want))
        assert err < 1e-6


class TestRadialFunction:
    def test_roundtrip(self, grid12):
        rf = RadialFunction.from_callable(grid12, lambda r: np.exp(-(r**2)), 3)
        assert rf.integral() == pytest.approx(math.pi**1.5 * (math.e - 1.0), rel=1e-12)
        assert rf.lp(2.0) > 0
        assert rf(0.5) == pytest.approx(math.exp(-0.25), rel=1e-8)
        lap = rf.laplacian()
        assert lap.grid is grid12

    def test_shape_guard(self, grid12):
        with pytest.raises(ValueError):
            RadialFunction(grid12, np.ones(3), 3)
