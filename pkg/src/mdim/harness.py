"""Seeded Monte-Carlo experiment engine over (n, d) grids.

A sweep is a grid of cells (one per (n, degree) combination) times a
trial count. Each trial generates one G(n, d/n) sample from a seed
derived from (master seed, cell, trial), so results are a pure function
of the configuration regardless of how many workers execute it.
Disconnected samples are recorded as such and skipped by the dependent
analyses, mirroring the usual conditioning on connectivity; the connected
fraction is itself a reported statistic.

Finite-size tolerance windows for the shell-growth, shell-fraction,
diameter, and degree checks are configuration, not theory: the asymptotic
statements carry 1 +- o(1) factors that have no canonical value at fixed
n, so every window is disclosed in the output records.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import separator as sep
from .bounds import compute_regime, regime_bounds
from .entropy import certify_md_lower_bound
from .errors import (
    BudgetExhaustedError,
    ConstructionFailureError,
    MdimError,
    ParameterError,
)
from .exact import exact_md, greedy_separator
from .graph import (
    GnpParams,
    Graph,
    count_pairs_with_three_common_neighbors,
    diameter as graph_diameter,
    distance_matrix,
    generate_gnp,
    is_connected,
)
from .graph import _MATRIX_N_LIMIT

ALL_MODES = frozenset({"bounds", "certify", "construct", "exact", "validate"})


@dataclass(frozen=True)
class ExperimentConfig:
    """Sweep definition plus every tolerance the analyses depend on."""

    n_values: tuple[int, ...]
    c_values: tuple[float, ...] | None = None
    d_values: tuple[float, ...] | None = None
    trials: int = 1
    master_seed: int = 0
    modes: frozenset = frozenset({"bounds", "certify"})
    workers: int = 1
    gamma_threshold: float = 8.0
    force_unit_alpha_beta: bool = False
    shell_ratio_window: tuple[float, float] = (0.5, 1.6)
    shell_fraction_slack: float = 0.1
    degree_window_factors: tuple[float, float] = (0.9, 1.1)
    sym_diff_ratio_window: tuple[float, float] = (0.5, 1.6)
    sym_diff_pair_sample: int = 1000
    sigma_pair_budget: int = sep.DEFAULT_PAIR_BUDGET
    sigma_sample_pairs: int = sep.DEFAULT_SAMPLE_PAIRS
    construct_max_retries: int = sep.DEFAULT_MAX_RETRIES
    exact_budget: int = 100_000_000
    exact_n_limit: int = 20

    def __post_init__(self):
        if not self.n_values:
            raise ParameterError("n_values must be non-empty")
        if (self.c_values is None) == (self.d_values is None):
            raise ParameterError("give exactly one of c_values / d_values")
        if self.trials < 0:
            raise ParameterError("trials must be >= 0")
        if self.master_seed < 0:
            raise ParameterError("master_seed must be non-negative")
        if self.workers < 1:
            raise ParameterError("workers must be >= 1")
        unknown = set(self.modes) - ALL_MODES
        if unknown:
            raise ParameterError(f"unknown modes: {sorted(unknown)}")
        for n, d in self.cells():
            if not 1.0 < d < n:
                raise ParameterError(
                    f"every cell needs 1 < d < n, got n={n}, d={d:.4g}"
                )

    def cells(self) -> list[tuple[int, float]]:
        """(n, d) combinations in deterministic grid order."""
        out = []
        for n in self.n_values:
            if self.c_values is not None:
                for c in self.c_values:
                    out.append((n, c * math.log(n)))
            else:
                for d in self.d_values:
                    out.append((n, float(d)))
        return out

    @classmethod
    def from_mapping(cls, m: Mapping[str, object]) -> "ExperimentConfig":
        """Build from a flat mapping of strings (config file / CLI flags)."""
        kw: dict = {}
        conv = {
            "n_values": lambda v: tuple(int(x) for x in _split(v)),
            "c_values": lambda v: tuple(float(x) for x in _split(v)),
            "d_values": lambda v: tuple(float(x) for x in _split(v)),
            "trials": int,
            "master_seed": int,
            "modes": lambda v: frozenset(_split(v)),
            "workers": int,
            "gamma_threshold": float,
            "force_unit_alpha_beta": _parse_bool,
            "shell_ratio_window": lambda v: _pair_of_floats(v),
            "shell_fraction_slack": float,
            "degree_window_factors": lambda v: _pair_of_floats(v),
            "sym_diff_ratio_window": lambda v: _pair_of_floats(v),
            "sym_diff_pair_sample": int,
            "sigma_pair_budget": int,
            "sigma_sample_pairs": int,
            "construct_max_retries": int,
            "exact_budget": int,
            "exact_n_limit": int,
        }
        for key, value in m.items():
            if key not in conv:
                raise ParameterError(f"unknown config key: {key}")
            kw[key] = conv[key](value)
        return cls(**kw)


def _split(value) -> list[str]:
    if isinstance(value, (list, tuple)):
        return [str(x) for x in value]
    return [part.strip() for part in str(value).split(",") if part.strip()]


def _pair_of_floats(value) -> tuple[float, float]:
    parts = _split(value)
    if len(parts) != 2:
        raise ParameterError(f"expected two comma-separated numbers, got {value!r}")
    return (float(parts[0]), float(parts[1]))


def _parse_bool(value) -> bool:
    if isinstance(value, bool):
        return value
    s = str(value).strip().lower()
    if s in ("true", "1", "yes", "on"):
        return True
    if s in ("false", "0", "no", "off"):
        return False
    raise ParameterError(f"not a boolean: {value!r}")


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; '#' starts a comment."""
    out: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"config line needs 'key = value': {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


@dataclass
class TrialRecord:
    """Everything measured on one generated instance.

    Optional fields stay None when their mode did not run, the sample was
    disconnected, or the quantity errored (see ``error``). CSV columns
    follow this field order exactly.
    """

    cell: int
    trial: int
    n: int
    d: float
    c: float
    seed: int
    connected: bool
    t_star: Optional[int] = None
    gamma: Optional[float] = None
    alpha: Optional[float] = None
    beta: Optional[float] = None
    case_label: Optional[str] = None
    diameter: Optional[int] = None
    entropic_lb: Optional[int] = None
    entropic_bound_real: Optional[float] = None
    greedy_ub: Optional[int] = None
    constructed_z: Optional[int] = None
    distinct_landmarks: Optional[int] = None
    verified: Optional[bool] = None
    sigma: Optional[float] = None
    sigma_exact: Optional[bool] = None
    construct_trials: Optional[int] = None
    exact_md: Optional[int] = None
    case1_lb: Optional[float] = None
    case1_ub: Optional[float] = None
    case2_lb: Optional[float] = None
    case2_ub: Optional[float] = None
    q_value: Optional[float] = None
    diam_power_lb: Optional[int] = None
    simple_diam_lb: Optional[float] = None
    shell_growth_pass: Optional[bool] = None
    diameter_pass: Optional[bool] = None
    shell_fraction_pass: Optional[bool] = None
    sym_diff_pass: Optional[bool] = None
    degree_window_pass: Optional[bool] = None
    k23_pass: Optional[bool] = None
    shell_ratio_min: Optional[float] = None
    shell_ratio_max: Optional[float] = None
    shell_pairs_in_window: Optional[int] = None
    shell_pairs_total: Optional[int] = None
    frac_tp1_min: Optional[float] = None
    frac_tp1_max: Optional[float] = None
    frac_tp2_min: Optional[float] = None
    frac_tp2_max: Optional[float] = None
    sym_diff_ratio_min: Optional[float] = None
    sym_diff_ratio_max: Optional[float] = None
    sym_diff_pairs_in_window: Optional[int] = None
    sym_diff_pairs_total: Optional[int] = None
    deg_min: Optional[int] = None
    deg_max: Optional[int] = None
    k23_count: Optional[int] = None
    k23_expected: Optional[float] = None
    error: str = ""


def trial_seeds(master_seed: int, cell: int, trial: int) -> tuple[int, int, int, int]:
    """(graph, construct, sigma, pair-sample) seeds for one trial."""
    words = np.random.SeedSequence([master_seed, cell, trial]).generate_state(
        4, dtype=np.uint64
    )
    return tuple(int(w) for w in words)


def shell_count_matrix(distances: np.ndarray, width: int) -> np.ndarray:
    """Per-source shell sizes: row w holds |V_t(w)| for t = 0..width-1."""
    n = distances.shape[0]
    out = np.zeros((n, width), dtype=np.int64)
    for w in range(n):
        counts = np.bincount(distances[w], minlength=width)
        out[w] = counts[:width]
    return out


def validate_predictions(
    g: Graph,
    regime,
    cfg: ExperimentConfig,
    distances: np.ndarray,
    pair_seed: int,
) -> dict:
    """Raw finite-n statistics behind the prediction flags, for one instance.

    Returns only raw numbers (extrema, window counts); the pass/fail flags
    are derived afterwards by :func:`prediction_flags_from_raws` so they can be
    recomputed identically from a persisted record.
    """
    n = g.n
    t_star = regime.t_star
    diam = int(distances.max())
    width = max(diam + 1, t_star + 3)
    counts = shell_count_matrix(distances, width)
    degrees = counts[:, 1] if width > 1 else np.zeros(n, dtype=np.int64)

    raws: dict = {}
    raws["deg_min"] = int(degrees.min())
    raws["deg_max"] = int(degrees.max())

    # shell growth |V_t(w)| / (d^(t-1) deg w) for 1 <= t <= t_star
    lo, hi = cfg.shell_ratio_window
    ratio_min, ratio_max = math.inf, -math.inf
    in_window = 0
    total = 0
    for t in range(1, t_star + 1):
        denom = regime.d ** (t - 1) * degrees
        ratios = counts[:, t] / denom
        ratio_min = min(ratio_min, float(ratios.min()))
        ratio_max = max(ratio_max, float(ratios.max()))
        in_window += int(np.count_nonzero((ratios >= lo) & (ratios <= hi)))
        total += n
    raws["shell_ratio_min"] = ratio_min
    raws["shell_ratio_max"] = ratio_max
    raws["shell_pairs_in_window"] = in_window
    raws["shell_pairs_total"] = total

    frac_tp1 = counts[:, t_star + 1] / n
    frac_tp2 = counts[:, t_star + 2] / n
    raws["frac_tp1_min"] = float(frac_tp1.min())
    raws["frac_tp1_max"] = float(frac_tp1.max())
    raws["frac_tp2_min"] = float(frac_tp2.min())
    raws["frac_tp2_max"] = float(frac_tp2.max())

    # symmetric shell difference at t_star on sampled pairs,
    # against d^(t_star - 1) (deg u + deg v)
    rng = np.random.default_rng(pair_seed)
    want = min(cfg.sym_diff_pair_sample, n * (n - 1) // 2)
    pairs = set()
    while len(pairs) < want:
        us = rng.integers(0, n, size=4 * want)
        vs = rng.integers(0, n, size=4 * want)
        for a, b in zip(us.tolist(), vs.tolist()):
            if a != b:
                pairs.add((min(a, b), max(a, b)))
                if len(pairs) >= want:
                    break
    dlo, dhi = cfg.sym_diff_ratio_window
    scale = regime.d ** (t_star - 1)
    d_min, d_max = math.inf, -math.inf
    d_in = 0
    shell_t = distances == t_star
    for a, b in sorted(pairs):
        delta = int(np.count_nonzero(shell_t[a] ^ shell_t[b]))
        ratio = float(delta / (scale * (degrees[a] + degrees[b])))
        d_min = min(d_min, ratio)
        d_max = max(d_max, ratio)
        if dlo <= ratio <= dhi:
            d_in += 1
    raws["sym_diff_ratio_min"] = d_min
    raws["sym_diff_ratio_max"] = d_max
    raws["sym_diff_pairs_in_window"] = d_in
    raws["sym_diff_pairs_total"] = len(pairs)

    raws["k23_count"] = count_pairs_with_three_common_neighbors(g)
    p = regime.d / n
    raws["k23_expected"] = float(
        math.comb(n, 2) * math.comb(n - 2, 3) * p**6
    )
    return raws


def prediction_flags_from_raws(rec: TrialRecord, cfg: ExperimentConfig) -> dict:
    """Pass/fail flags as a pure function of persisted raw statistics."""
    flags: dict = {}
    if rec.shell_pairs_total is not None:
        flags["shell_growth_pass"] = rec.shell_pairs_in_window == rec.shell_pairs_total
    if rec.diameter is not None and rec.t_star is not None:
        slack_shells = 3 if rec.case_label == "case1" else 2
        flags["diameter_pass"] = rec.diameter <= rec.t_star + slack_shells
    if rec.frac_tp1_min is not None:
        s = cfg.shell_fraction_slack
        e_a = math.exp(-rec.alpha * rec.gamma)
        e_b = math.exp(-rec.beta * rec.gamma)
        if rec.case_label == "case1":
            flags["shell_fraction_pass"] = (
                rec.frac_tp1_min >= 1 - e_a - s
                and rec.frac_tp1_max <= 1 - e_b + s
                and rec.frac_tp2_min >= e_b - s
                and rec.frac_tp2_max <= e_a + s
            )
        else:
            floor = 1 - (rec.beta * rec.gamma / rec.d + e_a) - s
            flags["shell_fraction_pass"] = rec.frac_tp1_min >= floor
    if rec.sym_diff_pairs_total is not None:
        flags["sym_diff_pass"] = rec.sym_diff_pairs_in_window == rec.sym_diff_pairs_total
    if rec.deg_min is not None and rec.alpha is not None:
        f_lo, f_hi = cfg.degree_window_factors
        flags["degree_window_pass"] = (
            rec.deg_min >= f_lo * rec.alpha * rec.d
            and rec.deg_max <= f_hi * rec.beta * rec.d
        )
    if rec.k23_expected is not None:
        if rec.k23_expected >= 1.0:
            flags["k23_pass"] = (
                rec.k23_expected / 10 <= rec.k23_count <= rec.k23_expected * 10
            )
        else:
            flags["k23_pass"] = None  # first moment not informative this small
    return flags


def run_single(
    cfg: ExperimentConfig, cell: int, trial: int, n: int, d: float
) -> TrialRecord:
    """Generate one instance and fill every requested field.

    Module errors never abort a sweep: they are recorded in the trial's
    ``error`` column and the remaining analyses still run.
    """
    graph_seed, construct_seed, sigma_seed, pair_seed = trial_seeds(
        cfg.master_seed, cell, trial
    )
    rec = TrialRecord(
        cell=cell,
        trial=trial,
        n=n,
        d=d,
        c=d / math.log(n),
        seed=graph_seed,
        connected=False,
    )
    errors: list[str] = []
    try:
        g = generate_gnp(GnpParams(n=n, d=d, seed=graph_seed))
    except MdimError as err:
        rec.error = f"generate: {err}"
        return rec
    rec.connected = is_connected(g)
    if not rec.connected:
        return rec

    regime = None
    if cfg.modes & {"bounds", "validate"}:
        try:
            regime = compute_regime(
                n,
                d,
                gamma_threshold=cfg.gamma_threshold,
                force_unit_alpha_beta=cfg.force_unit_alpha_beta,
            )
            rec.t_star = regime.t_star
            rec.gamma = regime.gamma
            rec.alpha = regime.alpha
            rec.beta = regime.beta
            rec.case_label = regime.case_label
        except MdimError as err:
            errors.append(f"regime: {err}")

    needs_matrix = bool(
        cfg.modes & {"certify", "construct", "exact", "validate"}
    )
    dist = None
    if needs_matrix and n <= _MATRIX_N_LIMIT:
        dist = distance_matrix(g)

    if cfg.modes & {"bounds", "validate"}:
        rec.diameter = int(dist.max()) if dist is not None else graph_diameter(g)

    if "bounds" in cfg.modes and regime is not None:
        try:
            report = regime_bounds(regime, diam=rec.diameter)
            rec.case1_lb = report.lb_entropy_formula
            rec.case1_ub = report.ub_q_formula
            rec.case2_lb = report.lb_case2
            rec.case2_ub = report.ub_case2
            rec.q_value = report.q_value
            rec.diam_power_lb = report.diam_power_lb
            rec.simple_diam_lb = report.simple_diam_lb
            if report.warnings:
                errors.extend(f"bounds-warning: {w}" for w in report.warnings)
        except MdimError as err:
            errors.append(f"bounds: {err}")

    if "certify" in cfg.modes:
        try:
            cert = certify_md_lower_bound(g, keep_per_vertex=False, distances=dist)
            rec.entropic_lb = cert.lower_bound
            rec.entropic_bound_real = cert.bound_real
            rec.greedy_ub = len(greedy_separator(g, distances=dist))
        except MdimError as err:
            errors.append(f"certify: {err}")

    if "construct" in cfg.modes:
        try:
            cert = sep.construct_separator(
                g,
                seed=construct_seed,
                max_retries=cfg.construct_max_retries,
                pair_budget=cfg.sigma_pair_budget,
                sample_pairs=cfg.sigma_sample_pairs,
                distances=dist,
            )
            rec.constructed_z = cert.z
            rec.distinct_landmarks = len(cert.distinct_landmarks)
            rec.verified = cert.verified
            rec.sigma = cert.sigma_used
            rec.sigma_exact = cert.sigma_exact
            rec.construct_trials = cert.trials_used
        except ConstructionFailureError as err:
            rec.constructed_z = err.z
            rec.sigma = err.sigma
            rec.sigma_exact = err.sigma_exact
            rec.verified = False
            errors.append(f"construct: {err}")
        except MdimError as err:
            errors.append(f"construct: {err}")

    if "exact" in cfg.modes:
        if n <= cfg.exact_n_limit:
            try:
                rec.exact_md = exact_md(g, budget=cfg.exact_budget)
            except BudgetExhaustedError as err:
                errors.append(f"exact: {err}")
            except MdimError as err:
                errors.append(f"exact: {err}")
        else:
            errors.append(f"exact: skipped (n={n} > limit {cfg.exact_n_limit})")

    if "validate" in cfg.modes and regime is not None:
        if dist is None:
            errors.append(
                f"validate: skipped (n={n} exceeds the distance-matrix limit)"
            )
        else:
            try:
                raws = validate_predictions(g, regime, cfg, dist, pair_seed)
                for key, value in raws.items():
                    setattr(rec, key, value)
                for key, value in prediction_flags_from_raws(rec, cfg).items():
                    setattr(rec, key, value)
            except MdimError as err:
                errors.append(f"validate: {err}")

    rec.error = "; ".join(errors)
    return rec


@dataclass(frozen=True)
class CellSummary:
    """Aggregates over the trials of one sweep cell."""

    cell: int
    n: int
    d: float
    c: float
    trials: int
    connected_fraction: float
    shell_growth_rate: Optional[float] = None
    diameter_rate: Optional[float] = None
    shell_fraction_rate: Optional[float] = None
    sym_diff_rate: Optional[float] = None
    degree_window_rate: Optional[float] = None
    k23_rate: Optional[float] = None
    entropic_lb_mean: Optional[float] = None
    entropic_lb_q25: Optional[float] = None
    entropic_lb_q50: Optional[float] = None
    entropic_lb_q75: Optional[float] = None
    greedy_ub_mean: Optional[float] = None
    greedy_ub_q25: Optional[float] = None
    greedy_ub_q50: Optional[float] = None
    greedy_ub_q75: Optional[float] = None
    z_mean: Optional[float] = None
    z_q25: Optional[float] = None
    z_q50: Optional[float] = None
    z_q75: Optional[float] = None


def _rate(values: list) -> Optional[float]:
    known = [v for v in values if v is not None]
    if not known:
        return None
    return sum(1 for v in known if v) / len(known)


def _quartiles(values: list) -> tuple:
    known = [v for v in values if v is not None]
    if not known:
        return (None, None, None, None)
    arr = np.asarray(known, dtype=np.float64)
    q25, q50, q75 = np.percentile(arr, [25, 50, 75])
    return (float(arr.mean()), float(q25), float(q50), float(q75))


def summarize_cell(cell: int, n: int, d: float, records: list[TrialRecord]) -> CellSummary:
    connected = [r for r in records if r.connected]
    mean_e, q25_e, q50_e, q75_e = _quartiles([r.entropic_lb for r in connected])
    mean_g, q25_g, q50_g, q75_g = _quartiles([r.greedy_ub for r in connected])
    mean_z, q25_z, q50_z, q75_z = _quartiles([r.constructed_z for r in connected])
    return CellSummary(
        cell=cell,
        n=n,
        d=d,
        c=d / math.log(n),
        trials=len(records),
        connected_fraction=(len(connected) / len(records)) if records else 0.0,
        shell_growth_rate=_rate([r.shell_growth_pass for r in connected]),
        diameter_rate=_rate([r.diameter_pass for r in connected]),
        shell_fraction_rate=_rate([r.shell_fraction_pass for r in connected]),
        sym_diff_rate=_rate([r.sym_diff_pass for r in connected]),
        degree_window_rate=_rate([r.degree_window_pass for r in connected]),
        k23_rate=_rate([r.k23_pass for r in connected]),
        entropic_lb_mean=mean_e,
        entropic_lb_q25=q25_e,
        entropic_lb_q50=q50_e,
        entropic_lb_q75=q75_e,
        greedy_ub_mean=mean_g,
        greedy_ub_q25=q25_g,
        greedy_ub_q50=q50_g,
        greedy_ub_q75=q75_g,
        z_mean=mean_z,
        z_q25=q25_z,
        z_q50=q50_z,
        z_q75=q75_z,
    )


@dataclass(frozen=True)
class SweepResult:
    config: ExperimentConfig
    records: list[TrialRecord]
    summaries: list[CellSummary]


def run_sweep(cfg: ExperimentConfig) -> SweepResult:
    """Execute trials x cells; output order is (cell, trial) regardless of
    worker count or completion order."""
    cells = cfg.cells()
    jobs = [
        (cell, trial, n, d)
        for cell, (n, d) in enumerate(cells)
        for trial in range(cfg.trials)
    ]
    if cfg.workers == 1 or not jobs:
        records = [run_single(cfg, *job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(lambda j: run_single(cfg, *j), jobs))
    records.sort(key=lambda r: (r.cell, r.trial))
    summaries = [
        summarize_cell(cell, n, d, [r for r in records if r.cell == cell])
        for cell, (n, d) in enumerate(cells)
    ]
    return SweepResult(config=cfg, records=records, summaries=summaries)
