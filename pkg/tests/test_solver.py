import math

import numpy as np
import pytest

from liebeq.quadrature import QuadratureSpec, integrate
from liebeq.regularity import Domain1D, weighted_norm
from liebeq.solver import (Diverged, NonPositive, SolverConfig, graded_grid,
                           picard_solve, product_integration_matrix,
                           residual_on_points)
from liebeq.specfun import Params


@pytest.fixture(scope="module")
def converged():
    p = Params(1, 0.5)
    cfg = SolverConfig(domain=Domain1D.interval(-1.0, 1.0), grid_size=129,
                       stop_tol=1e-8)
    solution, trace = picard_solve(cfg, p, init=1.0)
    return p, cfg, solution, trace


class TestDiscretization:
    def test_graded_grid_shape(self):
        x = graded_grid(-1.0, 1.0, 65, 2.0)
        assert x[0] == -1.0 and x[-1] == 1.0
        assert np.all(np.diff(x) > 0)
        assert np.max(np.abs(x + x[::-1])) == 0.0  # symmetric
        # clustering toward the endpoints
        assert x[1] - x[0] < (x[33] - x[32]) / 4

    def test_matrix_against_closed_form(self):
        lam = 0.5
        x = graded_grid(-1.0, 1.0, 65, 2.0)
        W = product_integration_matrix(x, lam)
        exact = 2.0 * (np.sqrt(np.maximum(1 - x, 0)) + np.sqrt(np.maximum(1 + x, 0)))
        assert np.max(np.abs(W @ np.ones_like(x) - exact)) < 1e-13

    def test_matrix_against_quadrature(self):
        # independent oracle: the adaptive engine integrates the same
        # piecewise-linear integrand
        lam = 0.6
        x = graded_grid(-1.0, 1.0, 33, 1.5)
        W = product_integration_matrix(x, lam)
        u = 1.0 + x / 3.0
        lin = lambda s: np.interp(s, x, u)
        for i in (0, 7, 16, 28):
            spec = QuadratureSpec(split_points=tuple(
                s for s in ([x[i]] if -1 < x[i] < 1 else [])))
            val = integrate(lambda s: np.abs(x[i] - s) ** -lam * lin(s),
                            -1.0, 1.0, spec).value
            assert (W @ u)[i] == pytest.approx(val, rel=1e-7)

    def test_lambda_window(self):
        x = graded_grid(0.0, 1.0, 9, 1.0)
        with pytest.raises(ValueError):
            product_integration_matrix(x, 1.0)


class TestNewtonScheme:
    def test_converges(self, converged):
        _, cfg, _, trace = converged
        assert trace.converged
        assert trace.residuals[-1] <= cfg.stop_tol
        assert trace.iterations <= cfg.max_iters

    def test_residual_decreases_after_burn_in(self, converged):
        _, _, _, trace = converged
        rs = trace.residuals
        tail = rs[len(rs) // 2:]
        assert min(tail) == tail[-1] or tail[-1] <= 10 * min(tail)
        assert rs[-1] < 1e-2 * rs[0]

    def test_positivity(self, converged):
        _, _, solution, trace = converged
        assert min(solution.values) > 0.0
        assert all(m > 0.0 for m in trace.minima)

    def test_fixed_point_consistency(self, converged):
        # one undamped sweep through the explicit map leaves the converged
        # solution unchanged to within the stopping tolerance
        p, cfg, solution, _ = converged
        x = np.asarray(solution.x)
        u = np.asarray(solution.values)
        W = product_integration_matrix(x, p.lam)
        swept = (W @ u) ** (1.0 / p.pm1)
        assert np.max(np.abs(swept - u)) / np.max(u) <= 10 * cfg.stop_tol

    def test_collocation_residual_at_nodes(self, converged):
        p, _, solution, _ = converged
        probes = np.asarray(solution.x)[4:-4:8]
        assert residual_on_points(solution, probes) <= 1e-8

    def test_weighted_norm_finite(self, converged):
        p, cfg, solution, _ = converged
        res = weighted_norm(solution, 1, p.lam, cfg.domain)
        assert not res.unbounded and res.total < math.inf

    @pytest.mark.xfail(reason="off-grid residual is dominated by interpolation "
                       "error near the mesh-scale concentration peak; the "
                       "bounded-domain problem at the conjugate exponent is "
                       "critical and its discrete solutions concentrate",
                       strict=True)
    def test_off_grid_residual_within_ten_stop_tols(self, converged):
        p, cfg, solution, _ = converged
        probes = np.linspace(-0.9, 0.9, 21)
        assert residual_on_points(solution, probes) <= 10 * cfg.stop_tol

    def test_positive_init_required(self, converged):
        p, cfg, _, _ = converged
        with pytest.raises(NonPositive):
            picard_solve(cfg, p, init=-1.0)

    def test_profile_interface(self, converged):
        _, _, solution, _ = converged
        mid = solution.value(0.0)
        assert mid == pytest.approx(max(solution.values), rel=1e-6)
        d = solution.derivative(0.5)
        assert np.isfinite(d)


class TestDirectScheme:
    def test_diverges_from_constant_init(self):
        p = Params(1, 0.5)
        cfg = SolverConfig(domain=Domain1D.interval(-1.0, 1.0), grid_size=65,
                           scheme="direct", max_iters=60)
        with pytest.raises(Diverged):
            picard_solve(cfg, p, init=1.0)

    def test_growth_streak_detection(self):
        # small damping slows the blow-up enough to observe five consecutive
        # residual increases before overflow
        p = Params(1, 0.5)
        cfg = SolverConfig(domain=Domain1D.interval(-1.0, 1.0), grid_size=65,
                           scheme="direct", damping=0.02, max_iters=200)
        with pytest.raises(Diverged) as err:
            picard_solve(cfg, p, init=1.0)
        assert err.value.trace is not None
        assert len(err.value.trace.residuals) >= 5


class TestConfig:
    def test_validation(self):
        G = Domain1D.interval(-1.0, 1.0)
        with pytest.raises(ValueError):
            SolverConfig(domain=G, grid_size=3)
        with pytest.raises(ValueError):
            SolverConfig(domain=G, grading_exponent=0.5)
        with pytest.raises(ValueError):
            SolverConfig(domain=G, damping=0.0)
        with pytest.raises(ValueError):
            SolverConfig(domain=G, scheme="magic")
        with pytest.raises(ValueError):
            SolverConfig(domain=G, stop_tol=0.0)

    def test_dimension_guard(self):
        cfg = SolverConfig(domain=Domain1D.interval(-1.0, 1.0))
        with pytest.raises(ValueError):
            picard_solve(cfg, Params(3, 1.0))
