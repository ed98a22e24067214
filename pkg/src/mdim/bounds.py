"""Closed-form quantities for the sparse random-graph regime.

Everything here is pure real arithmetic on (n, d): the regime parameters
t* and gamma, the large-deviation rate function and its sub-/super-unity
roots alpha and beta, binary entropy, the collision probability q, and the
four bound formulas (two per case), plus the classical diameter-based
lower bounds. All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConvergenceError, ParameterError

#: Relative slack subtracted before integer ceilings so float noise just
#: above an exact integer does not bump the result (documented in reports).
CEIL_SLACK = 1e-9


def ceil_with_slack(x: float) -> int:
    """Smallest integer >= x, forgiving ~1e-9 relative float noise."""
    return math.ceil(x * (1.0 - CEIL_SLACK))


def binary_entropy(y: float) -> float:
    """H(y) = -y ln y - (1-y) ln(1-y) in nats, with 0 ln 0 := 0."""
    if not 0.0 <= y <= 1.0:
        raise ParameterError(f"binary entropy needs y in [0,1], got {y}")
    if y == 0.0 or y == 1.0:
        return 0.0
    return -y * math.log(y) - (1.0 - y) * math.log(1.0 - y)


def rate_function(x: float) -> float:
    """Large-deviation rate f(x) = 1 - x + x ln x for x > 0.

    Strictly decreasing on (0,1), zero at 1, strictly increasing beyond.
    """
    if x <= 0.0:
        raise ParameterError(f"rate function needs x > 0, got {x}")
    return 1.0 - x + x * math.log(x)


def solve_alpha_beta(
    c: float, tol: float = 1e-12, max_iter: int = 200
) -> tuple[float, float]:
    """Roots alpha < 1 < beta of f(x) = 1/sqrt(c), by bisection.

    c is the degree coefficient d / ln n; c > 1 makes the target level
    1/sqrt(c) < 1 so both roots exist. Tolerance is on |f(x) - target|.
    """
    if c <= 1.0:
        raise ParameterError(
            f"degree coefficient must exceed 1 (connectivity regime), got {c}"
        )
    if tol <= 0.0:
        raise ParameterError("tolerance must be positive")
    target = 1.0 / math.sqrt(c)
    alpha = _bisect_rate(1e-300, 1.0, target, decreasing=True, tol=tol, max_iter=max_iter)
    hi = 2.0
    while rate_function(hi) <= target:
        hi *= 2.0
        if hi > 1e30:
            raise ConvergenceError("failed to bracket beta")
    beta = _bisect_rate(1.0, hi, target, decreasing=False, tol=tol, max_iter=max_iter)
    return alpha, beta


def _bisect_rate(
    lo: float, hi: float, target: float, decreasing: bool, tol: float, max_iter: int
) -> float:
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        val = rate_function(mid)
        if abs(val - target) <= tol:
            return mid
        if (val > target) == decreasing:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not reach |f - {target:.3g}| <= {tol:.3g} "
        f"in {max_iter} iterations"
    )


@dataclass(frozen=True)
class RegimeParams:
    """Finite-n realization of the regime quantities for one (n, d).

    t_star is the largest t >= 1 with d^t < n, so gamma = d^(t_star+1)/n
    lies in [1, d). The case label compares gamma against a configurable
    threshold (the asymptotic bounded/growing dichotomy is not decidable
    from a single instance, so the threshold is disclosed alongside).
    """

    n: int
    d: float
    c: float
    t_star: int
    gamma: float
    alpha: float
    beta: float
    case_label: str
    gamma_threshold: float


def compute_regime(
    n: int,
    d: float,
    gamma_threshold: float = 8.0,
    tol: float = 1e-12,
    force_unit_alpha_beta: bool = False,
) -> RegimeParams:
    """Regime parameters (t*, gamma, c, alpha, beta) for one instance.

    With ``force_unit_alpha_beta`` the degree-fluctuation constants are
    pinned to 1, which specializes q(alpha, beta) to the dense-regime q.
    """
    if n < 3:
        raise ParameterError(f"n must be >= 3, got {n}")
    if d <= 1.0:
        raise ParameterError(f"mean degree must exceed 1, got {d}")
    if d >= n:
        raise ParameterError(f"mean degree must be below n, got d={d}, n={n}")
    t_star, gamma = _t_star_and_gamma(n, d)
    c = d / math.log(n)
    if force_unit_alpha_beta:
        alpha = beta = 1.0
    else:
        alpha, beta = solve_alpha_beta(c, tol=tol)
    case_label = "case1" if gamma <= gamma_threshold else "case2"
    return RegimeParams(
        n=n,
        d=float(d),
        c=c,
        t_star=t_star,
        gamma=gamma,
        alpha=alpha,
        beta=beta,
        case_label=case_label,
        gamma_threshold=gamma_threshold,
    )


def _t_star_and_gamma(n: int, d: float) -> tuple[int, float]:
    """Largest t >= 1 with d^t < n (strict), and gamma = d^(t+1)/n.

    Integral d gets exact integer power comparisons; otherwise powers are
    compared in log space (ties have measure zero off the integer grid)
    and evaluated via exp when t ln d would overflow.
    """
    if float(d).is_integer():
        di = int(d)
        t = 1
        power = di  # d^t
        while power * di < n:
            power *= di
            t += 1
        gamma = (power * di) / n
        return t, float(gamma)
    ln_d = math.log(d)
    ln_n = math.log(n)
    t = max(1, int(ln_n / ln_d))
    while (t + 1) * ln_d < ln_n:
        t += 1
    while t > 1 and not (t * ln_d < ln_n):
        t -= 1
    log_gamma = (t + 1) * ln_d - ln_n
    gamma = math.exp(log_gamma) if log_gamma < 700 else math.inf
    if 1.0 - 1e-9 < gamma < 1.0:
        gamma = 1.0  # float noise at an exact power boundary
    return t, gamma


def q_value(alpha: float, beta: float, gamma: float) -> float:
    """Collision probability q(alpha, beta) = 1 - 2(1-e^{-a g}) e^{-b g}.

    At alpha = beta = 1 this equals (e^{-g})^2 + (1-e^{-g})^2.
    """
    if not 0 < alpha <= beta:
        raise ParameterError(f"need 0 < alpha <= beta, got {alpha}, {beta}")
    if gamma <= 0:
        raise ParameterError(f"gamma must be positive, got {gamma}")
    return 1.0 - 2.0 * (1.0 - math.exp(-alpha * gamma)) * math.exp(-beta * gamma)


@dataclass(frozen=True)
class BoundReport:
    """All bound values for one instance.

    The case-1 pair is (lb_entropy_formula, ub_q_formula) and the case-2
    pair is (lb_case2, ub_case2); both pairs are always evaluated. The
    diameter-based integers are filled only when a diameter is supplied.
    """

    lb_entropy_formula: float
    ub_q_formula: float
    lb_case2: float
    ub_case2: float
    q_value: float
    diam_power_lb: int | None = None
    simple_diam_lb: float | None = None
    warnings: tuple[str, ...] = field(default=())


def regime_bounds(r: RegimeParams, diam: int | None = None) -> BoundReport:
    """Evaluate the four bound formulas at the given regime parameters.

    The inner maximization of the case-1 lower bound is solved in closed
    form: H(e^{-x gamma}) is unimodal in x with peak at x0 = ln 2 / gamma,
    so the maximizer over [alpha, beta] is clamp(x0, alpha, beta).
    """
    ln_n = math.log(r.n)
    warnings: list[str] = []

    x_peak = math.log(2.0) / r.gamma
    x_star = min(max(x_peak, r.alpha), r.beta)
    h_star = binary_entropy(math.exp(-x_star * r.gamma))
    # unimodality check: the clamped peak dominates both endpoints
    h_lo = binary_entropy(math.exp(-r.alpha * r.gamma))
    h_hi = binary_entropy(math.exp(-r.beta * r.gamma))
    assert h_star >= h_lo - 1e-12 and h_star >= h_hi - 1e-12
    lb1 = ln_n / h_star

    q = q_value(r.alpha, r.beta, r.gamma)
    if q < 0.25:
        warnings.append(
            f"q={q:.6g} < 1/4: case-1 upper bound drops below the lower bound"
        )
    if q >= 1.0:
        warnings.append("q rounded to 1 (gamma too large); case-1 upper bound infinite")
        ub1 = math.inf
    else:
        ub1 = 2.0 * ln_n / (-math.log(q))

    bg_over_d = r.beta * r.gamma / r.d
    den_lb2 = -bg_over_d * math.log(bg_over_d) + r.gamma * math.exp(-r.alpha * r.gamma)
    if den_lb2 <= 0.0:
        warnings.append(
            "case-2 lower-bound denominator nonpositive at these finite "
            "parameters (beta*gamma/d >= 1); reporting infinity"
        )
        lb2 = math.inf
    else:
        lb2 = ln_n / den_lb2
    ub2 = ln_n / (r.alpha * r.gamma / r.d + math.exp(-r.beta * r.gamma))

    diam_power = diameter_power_lower_bound(r.n, diam) if diam is not None else None
    simple = simple_diameter_lower_bound(r.n, diam) if diam is not None else None
    return BoundReport(
        lb_entropy_formula=lb1,
        ub_q_formula=ub1,
        lb_case2=lb2,
        ub_case2=ub2,
        q_value=q,
        diam_power_lb=diam_power,
        simple_diam_lb=simple,
        warnings=tuple(warnings),
    )


def diameter_power_lower_bound(n: int, diam: int) -> int:
    """Smallest m >= 1 with diam^m + m >= n (exact integer arithmetic)."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if diam < 1:
        raise ParameterError(f"diameter must be >= 1, got {diam}")
    if diam == 1:
        return n - 1
    m = 1
    while diam**m + m < n:
        m += 1
    return m


def simple_diameter_lower_bound(n: int, diam: int) -> float:
    """ln n / ln(diam + 1): the alphabet-size entropy bound."""
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    if diam < 1:
        raise ParameterError(f"diameter must be >= 1, got {diam}")
    return math.log(n) / math.log(diam + 1)


def predicted_shell_tolerance(n: int, t: int, a: float) -> float:
    """Expected relative shell deviation a * (ln n)^{-(t-1)/2}.

    The constant ``a`` is a fit parameter of the harness, not a prediction.
    """
    if n < 3:
        raise ParameterError(f"n must be >= 3, got {n}")
    if t < 1:
        raise ParameterError(f"shell index must be >= 1, got {t}")
    if a <= 0:
        raise ParameterError(f"constant must be positive, got {a}")
    return a * math.log(n) ** (-(t - 1) / 2.0)
