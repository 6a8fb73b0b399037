import math

import numpy as np
import pytest

from liebeq.quadrature import (DivergentTail, NonConvergent, QuadratureSpec,
                               SingularityBudget, convergence_screen, integrate)


def log_beta(a, b):
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def half_beta(a, b):
    """int_0^inf r^(a-1) (1+r^2)^(-b) dr = B(a/2, b - a/2) / 2."""
    return 0.5 * math.exp(log_beta(a / 2.0, b - a / 2.0))


# Closed-form oracle corpus: endpoint/interior algebraic singularities,
# logarithmic singularities, power-law and fast tails.
CORPUS = [
    ("sqrt_endpoint", lambda s: s ** -0.5, 0, 1, (), None, 2.0),
    ("strong_endpoint", lambda s: s ** -0.9, 0, 1, (), None, 10.0),
    ("mild_endpoint", lambda s: s ** -0.1, 0, 1, (), None, 1.0 / 0.9),
    ("right_endpoint", lambda s: (1 - s) ** -0.3, 0, 1, (), None, 1.0 / 0.7),
    ("both_endpoints", lambda s: s ** -0.25 * (1 - s) ** -0.5,
     0, 1, (), None, math.exp(log_beta(0.75, 0.5))),
    ("interior_split", lambda s: np.abs(s - 0.5) ** -0.5,
     0, 1, (0.5,), None, 2.0 * math.sqrt(2.0)),
    ("log_singularity", lambda s: np.log(1.0 / s), 0, 1, (), None, 1.0),
    ("log_times_power", lambda s: s ** -0.5 * np.log(1.0 / s), 0, 1, (), None, 4.0),
    ("smooth_poly", lambda s: 3.0 * s * s, 0, 1, (), None, 1.0),
    ("smooth_cos", lambda s: np.cos(s), 0, math.pi / 2, (), None, 1.0),
    ("gauss_like", lambda s: np.exp(-s * s), 0, math.inf, (), None, math.sqrt(math.pi) / 2),
    ("exp_tail", lambda s: np.exp(-s), 0, math.inf, (), None, 1.0),
    ("power_tail", lambda s: s ** -2.0, 1, math.inf, (), -2.0, 1.0),
    ("slow_power_tail", lambda s: s ** -1.25, 1, math.inf, (), -1.25, 4.0),
    ("lorentzian", lambda s: 1.0 / (1.0 + s * s), 0, math.inf, (), -2.0, math.pi / 2),
    ("beta_2_3", lambda s: s ** 1.0 * (1 + s * s) ** -3.0, 0, math.inf, (), -5.0,
     half_beta(2.0, 3.0)),
    ("beta_half_2", lambda s: s ** -0.5 * (1 + s * s) ** -2.0, 0, math.inf, (), -4.5,
     half_beta(0.5, 2.0)),
    ("beta_slow", lambda s: s ** 0.25 * (1 + s * s) ** -1.0, 0, math.inf, (), -1.75,
     half_beta(1.25, 1.0)),
    ("shifted_power", lambda s: s ** -0.5 / (1.0 + s) ** 2, 0, math.inf, (), -2.5,
     # int_0^inf s^(a-1)(1+s)^(-a-b) ds = B(a, b) with a = 1/2, b = 3/2
     math.exp(log_beta(0.5, 1.5))),
    ("singular_plus_tail", lambda s: s ** -0.75 * np.exp(-s), 0, math.inf, (), None,
     math.gamma(0.25)),
    ("offset_interior", lambda s: np.abs(s - 2.0) ** -0.5, 0, 3, (2.0,), None,
     2.0 * math.sqrt(2.0) + 2.0),
]
@pytest.mark.parametrize("case", CORPUS, ids=[c[0] for c in CORPUS])
def test_oracle_corpus(case):
    name, f, a, b, splits, tail, exact = case
    spec = QuadratureSpec(split_points=splits, tail_exponent_hint=tail)
    value, err = integrate(f, a, b, spec)
    actual = abs(value - exact)
    assert actual <= max(spec.rel_tol * abs(exact), spec.abs_tol) * 5
    assert err >= actual or actual < 1e-14


def test_riesz_composition_line_integral():
    # int over R of |1-y|^(-3/4) |y|^(-3/4) dy = sqrt(pi) (G(1/8)/G(3/8))^2,
    # frozen from a 50-digit evaluation; strong interior singularity plus
    # slow power tails in one integral
    expected = 17.904528926373967
    f = lambda y: np.abs(1.0 - y) ** -0.75 * np.abs(y) ** -0.75
    plus = integrate(f, 0, math.inf,
                     QuadratureSpec(split_points=(1.0,), tail_exponent_hint=-1.5))
    minus = integrate(lambda t: f(-np.asarray(t, dtype=float)), 0, math.inf,
                      QuadratureSpec(tail_exponent_hint=-1.5))
    assert plus.value + minus.value == pytest.approx(expected, rel=2e-9)


def test_corpus_is_large_enough():
    assert len(CORPUS) >= 20


def test_trivial_examples():
    assert integrate(lambda s: s ** -0.5, 0, 1).value == pytest.approx(2.0, rel=1e-9)
    spec = QuadratureSpec(split_points=(0.5,))
    assert integrate(lambda s: np.abs(s - 0.5) ** -0.5, 0, 1, spec).value == \
        pytest.approx(2.0 * math.sqrt(2.0), rel=1e-9)
    assert integrate(lambda s: s ** -2.0, 1, math.inf).value == pytest.approx(1.0, rel=1e-9)


def test_linearity_within_three_tolerances():
    spec = QuadratureSpec()
    f = lambda s: np.exp(-s) * np.cos(3 * s)
    g = lambda s: 1.0 / (1.0 + s * s)
    a_coef, b_coef = 2.5, -1.25
    combo = lambda s: a_coef * f(s) + b_coef * g(s)
    lhs = integrate(combo, 0, 10, spec).value
    rhs = a_coef * integrate(f, 0, 10, spec).value + b_coef * integrate(g, 0, 10, spec).value
    assert abs(lhs - rhs) <= 3 * max(spec.rel_tol * abs(rhs), spec.abs_tol)


def test_redundant_split_invariance():
    f = lambda s: np.exp(-s * s)
    base = integrate(f, 0, 2)
    split = integrate(f, 0, 2, QuadratureSpec(split_points=(0.7,)))
    assert abs(base.value - split.value) <= 2 * max(base.error, split.error)


def test_determinism_bitwise():
    spec = QuadratureSpec(split_points=(0.5,))
    f = lambda s: np.abs(s - 0.5) ** -0.3 * np.exp(-s)
    r1 = integrate(f, 0, math.inf, spec.with_tail(-10.0))
    r2 = integrate(f, 0, math.inf, spec.with_tail(-10.0))
    assert r1.value == r2.value and r1.error == r2.error


def test_divergent_tail_probe():
    with pytest.raises(DivergentTail):
        integrate(lambda s: 1.0 / s, 1, math.inf)
    with pytest.raises(DivergentTail):
        integrate(lambda s: s ** -0.5, 1, math.inf)


def test_divergent_tail_hint():
    with pytest.raises(DivergentTail):
        integrate(lambda s: s ** -2.0, 1, math.inf, QuadratureSpec(tail_exponent_hint=-1.0))


def test_nonconvergent_on_divergent_singularity():
    with pytest.raises(NonConvergent):
        integrate(lambda s: s ** -1.2, 0, 1, QuadratureSpec(max_subdivisions=300))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(rel_tol=0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadratureSpec(split_points=(0.5, 0.4))
    with pytest.raises(ValueError):
        integrate(lambda s: s, 1.0, 0.5)


def test_error_estimate_is_conservative_on_smooth():
    res = integrate(lambda s: np.sin(s), 0, math.pi)
    assert abs(res.value - 2.0) <= max(res.error, 1e-14)


# -- convergence screen ------------------------------------------------------

def test_screen_borderline_is_divergent():
    # the order-zero singular-solution self pairing in n = 1: exponent at the
    # origin is exactly -1, the logarithmic borderline
    budget = SingularityBudget(((0.0, -1.0), (math.inf, -1.5)))
    res = convergence_screen(budget)
    assert not res.convergent and res.failing_location == 0.0


def test_screen_convergent_cross_pair():
    n, lam = 3, 1.0
    at_zero = -(n - lam / 2) + (n - 1)
    at_inf = -(n + lam / 2) + (n - 1)
    res = convergence_screen(SingularityBudget(((0.0, at_zero), (math.inf, at_inf))))
    assert res.convergent and res.failing_location is None


def test_screen_empty_budget_convergent():
    assert convergence_screen(SingularityBudget()).convergent


def test_screen_divergent_at_infinity():
    res = convergence_screen(SingularityBudget(((0.0, 0.5), (math.inf, -1.0))))
    assert not res.convergent and math.isinf(res.failing_location)


def test_screen_reports_first_failure():
    res = convergence_screen(SingularityBudget(((0.0, -2.0), (1.0, -3.0))))
    assert res.failing_location == 0.0
