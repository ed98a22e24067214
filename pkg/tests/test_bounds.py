"""Regime parameters, rate-function roots, and the bound formulas."""

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from mdim.bounds import (
    BoundReport,
    binary_entropy,
    compute_regime,
    diameter_power_lower_bound,
    predicted_shell_tolerance,
    q_value,
    rate_function,
    simple_diameter_lower_bound,
    solve_alpha_beta,
    regime_bounds,
)
from mdim.errors import ParameterError


def test_binary_entropy_values():
    assert binary_entropy(0.5) == pytest.approx(math.log(2), abs=1e-15)
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    # -e^-1 ln e^-1 - (1-e^-1) ln(1-e^-1), evaluated at full precision
    y = math.exp(-1)
    direct = -y * math.log(y) - (1 - y) * math.log(1 - y)
    assert direct == pytest.approx(0.6578174, abs=1e-7)
    assert binary_entropy(y) == pytest.approx(direct, abs=1e-15)
    with pytest.raises(ParameterError):
        binary_entropy(-0.1)
    with pytest.raises(ParameterError):
        binary_entropy(1.1)


def test_binary_entropy_symmetry_and_concavity():
    ys = np.linspace(0.0, 1.0, 201)
    for y in ys:
        assert binary_entropy(float(y)) == pytest.approx(
            binary_entropy(float(1 - y)), abs=1e-12
        )
        assert binary_entropy(float(y)) <= math.log(2) + 1e-15
    # midpoint concavity on a grid
    for a, b in zip(ys[:-2:2], ys[2::2]):
        mid = binary_entropy(float((a + b) / 2))
        assert mid >= 0.5 * (binary_entropy(float(a)) + binary_entropy(float(b))) - 1e-12


def test_rate_function_values_and_shape():
    assert rate_function(1.0) == 0.0
    assert rate_function(2.0) == pytest.approx(2 * math.log(2) - 1, abs=1e-15)
    assert rate_function(1e-12) == pytest.approx(1.0, abs=1e-9)
    with pytest.raises(ParameterError):
        rate_function(0.0)
    grid = np.linspace(0.01, 0.99, 99)
    vals = [rate_function(float(x)) for x in grid]
    assert all(a > b for a, b in zip(vals, vals[1:]))  # decreasing below 1
    grid = np.linspace(1.01, 8.0, 100)
    vals = [rate_function(float(x)) for x in grid]
    assert all(a < b for a, b in zip(vals, vals[1:]))  # increasing above 1


def test_solve_alpha_beta_against_brentq():
    for c in (1.21, 4.0, 100.0):
        target = 1 / math.sqrt(c)
        alpha, beta = solve_alpha_beta(c)
        a_ref = brentq(lambda x: rate_function(x) - target, 1e-12, 1.0, xtol=1e-14)
        b_hi = 2.0
        while rate_function(b_hi) < target:
            b_hi *= 2
        b_ref = brentq(lambda x: rate_function(x) - target, 1.0, b_hi, xtol=1e-14)
        assert alpha == pytest.approx(a_ref, abs=1e-9)
        assert beta == pytest.approx(b_ref, abs=1e-9)
    alpha, beta = solve_alpha_beta(4.0)
    assert alpha == pytest.approx(0.1866, abs=2e-3)
    assert beta == pytest.approx(2.16, abs=2e-2)


def test_solve_alpha_beta_tolerance_and_monotonicity():
    rng = np.random.default_rng(23)
    cs = np.exp(rng.uniform(np.log(1.01), np.log(1e6), size=100))
    prev_alpha, prev_beta, prev_c = None, None, None
    for c in np.sort(cs):
        alpha, beta = solve_alpha_beta(float(c))
        target = 1 / math.sqrt(c)
        assert abs(rate_function(alpha) - target) <= 1e-12
        assert abs(rate_function(beta) - target) <= 1e-12
        assert 0 < alpha < 1 < beta
        if prev_c is not None and c > prev_c:
            assert alpha >= prev_alpha  # alpha increases with c
            assert beta <= prev_beta  # beta decreases with c
        prev_alpha, prev_beta, prev_c = alpha, beta, c
    with pytest.raises(ParameterError):
        solve_alpha_beta(1.0)


def test_compute_regime_examples():
    r = compute_regime(1000, 10.0)
    assert (r.t_star, r.gamma) == (2, 1.0)
    r = compute_regime(500, 10.0)
    assert (r.t_star, r.gamma) == (2, 2.0)
    r = compute_regime(100, 10.0)
    assert (r.t_star, r.gamma) == (1, 1.0)
    with pytest.raises(ParameterError):
        compute_regime(100, 1.0)


def test_compute_regime_invariants_random():
    rng = np.random.default_rng(31)
    for _ in range(1000):
        n = int(rng.integers(10, 100_000))
        # keep c = d/ln n above 1 so the root solve applies
        d = float(rng.uniform(1.001, 4.0)) * math.log(n)
        if d >= n:
            continue
        r = compute_regime(n, d)
        assert d**r.t_star < n <= d ** (r.t_star + 1) * (1 + 1e-9)
        assert 1.0 <= r.gamma < r.d
        assert r.case_label in ("case1", "case2")
        assert (r.case_label == "case1") == (r.gamma <= r.gamma_threshold)


def test_compute_regime_forced_unit():
    r = compute_regime(1000, 10.0, force_unit_alpha_beta=True)
    assert r.alpha == 1.0 and r.beta == 1.0
    q = q_value(r.alpha, r.beta, r.gamma)
    g = r.gamma
    assert q == pytest.approx(math.exp(-g) ** 2 + (1 - math.exp(-g)) ** 2, abs=1e-15)


def test_q_value():
    assert q_value(1, 1, 1.0) == pytest.approx(0.534911, abs=1e-6)
    assert q_value(0.5, 2.0, 1e6) == pytest.approx(1.0, abs=1e-12)
    for g in np.linspace(0.05, 40, 100):
        assert q_value(1, 1, float(g)) >= 0.5 - 1e-15
    with pytest.raises(ParameterError):
        q_value(2.0, 1.0, 1.0)


def test_q_at_least_quarter_over_grid():
    # beta >= alpha forces q >= 1/2; the reporter still flags < 1/4
    rng = np.random.default_rng(5)
    for _ in range(500):
        a = float(rng.uniform(0.01, 1.0))
        b = float(rng.uniform(1.0, 4.0))
        g = float(rng.uniform(0.05, 30.0))
        assert q_value(a, b, g) >= 0.25


def test_case1_log2n_specialization():
    # alpha = beta = 1 and gamma = ln 2 puts the entropy peak at 1/2
    r = compute_regime(4096, 2.0, force_unit_alpha_beta=True)
    assert r.gamma != math.log(2)  # regime of this instance is irrelevant here
    report = regime_bounds(
        type(r)(
            n=10**6,
            d=50.0,
            c=50 / math.log(10**6),
            t_star=3,
            gamma=math.log(2.0),
            alpha=1.0,
            beta=1.0,
            case_label="case1",
            gamma_threshold=8.0,
        )
    )
    assert report.lb_entropy_formula == pytest.approx(
        math.log(10**6) / math.log(2), rel=1e-12
    )


def test_regime_bounds_worked_example():
    from mdim.bounds import RegimeParams

    r = RegimeParams(
        n=10**6,
        d=100.0,
        c=100 / math.log(10**6),
        t_star=2,
        gamma=1.0,
        alpha=1.0,
        beta=1.0,
        case_label="case1",
        gamma_threshold=8.0,
    )
    report = regime_bounds(r)
    assert report.lb_entropy_formula == pytest.approx(21.00, abs=0.01)
    assert report.ub_q_formula == pytest.approx(44.16, abs=0.01)
    assert report.q_value == pytest.approx(0.534911, abs=1e-6)


def test_regime_bounds_case2_limit_profile():
    from mdim.bounds import RegimeParams

    # gamma large with gamma/d small: both case-2 denominators shrink,
    # bounds blow up, but their ratio stays finite
    r = RegimeParams(
        n=10**6,
        d=10**7,
        c=10**7 / math.log(10**6),
        t_star=1,
        gamma=50.0,
        alpha=1.0,
        beta=1.0,
        case_label="case2",
        gamma_threshold=8.0,
    )
    report = regime_bounds(r)
    ln_n = math.log(r.n)
    assert report.lb_case2 > 100 * ln_n
    assert report.ub_case2 > 100 * ln_n
    assert math.isfinite(report.ub_case2 / report.lb_case2)


def test_inner_max_dominates_endpoints():
    rng = np.random.default_rng(9)
    from mdim.bounds import RegimeParams

    for _ in range(200):
        alpha = float(rng.uniform(0.05, 1.0))
        beta = float(rng.uniform(1.0, 3.0))
        gamma = float(rng.uniform(0.2, 12.0))
        r = RegimeParams(
            n=1000,
            d=30.0,
            c=30 / math.log(1000),
            t_star=1,
            gamma=gamma,
            alpha=alpha,
            beta=beta,
            case_label="case1",
            gamma_threshold=8.0,
        )
        report = regime_bounds(r)  # the assertion runs inside
        assert isinstance(report, BoundReport)


def test_diameter_power_bound():
    assert diameter_power_lower_bound(10, 2) == 3
    assert diameter_power_lower_bound(5, 4) == 1
    assert diameter_power_lower_bound(2, 1) == 1
    assert diameter_power_lower_bound(7, 1) == 6  # complete-graph diameter


def test_simple_diameter_bound():
    assert simple_diameter_lower_bound(8, 1) == pytest.approx(3.0, abs=1e-12)
    assert simple_diameter_lower_bound(5, 4) == pytest.approx(1.0, abs=1e-12)
    assert simple_diameter_lower_bound(100, 9) == pytest.approx(2.0, abs=1e-12)


def test_predicted_shell_tolerance():
    assert predicted_shell_tolerance(50, 1, 0.7) == 0.7  # exponent 0 at t=1
    n = 55  # ln n close to 4; check exact exponent structure
    ln_n = math.log(n)
    assert predicted_shell_tolerance(n, 3, 1.0) == pytest.approx(1 / ln_n, rel=1e-12)
    assert predicted_shell_tolerance(n, 5, 2.0) == pytest.approx(2 / ln_n**2, rel=1e-12)
